#pragma once

// Hot loops with a scalar reference and an AVX2 variant picked at runtime.
// The scalar versions define the semantics; the vector ones must agree to
// rounding (see tests/test_kernels.cpp).

namespace equivibe::kernels {

enum class Isa { Scalar, Avx2 };

struct PairCoeffs {
    double A, B, sigma;
};

bool avx2_available();
Isa active_isa();
// Testing hook: pins the dispatch target. Avx2 is ignored when unsupported.
void force_isa(Isa isa);
void reset_isa();
const char* isa_name(Isa isa);

// Ring bonds (j, j+1 mod n) with U plus all pairs j<k with W.
// Returns the energy; if gx/gy are non-null they receive the gradient.
double energy_gradient_scalar(const double* x, const double* y, int n, const PairCoeffs& c,
                              double* gx, double* gy);
double energy_gradient_avx2(const double* x, const double* y, int n, const PairCoeffs& c,
                            double* gx, double* gy);
double energy_gradient(const double* x, const double* y, int n, const PairCoeffs& c,
                       double* gx, double* gy);

// y += a * x
void axpy_scalar(double a, const double* x, double* y, int m);
void axpy_avx2(double a, const double* x, double* y, int m);
void axpy(double a, const double* x, double* y, int m);

} // namespace equivibe::kernels
