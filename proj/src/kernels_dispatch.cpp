#include "equivibe/kernels.hpp"

#include <atomic>

namespace equivibe::kernels {

namespace {

bool detect_avx2() {
#if defined(__x86_64__) || defined(__i386__)
#if defined(EQUIVIBE_HAVE_AVX2_TU)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
#else
    return false;
#endif
}

std::atomic<int> forced{-1};

} // namespace

bool avx2_available() {
    static const bool ok = detect_avx2();
    return ok;
}

Isa active_isa() {
    const int f = forced.load(std::memory_order_relaxed);
    if (f == static_cast<int>(Isa::Scalar)) return Isa::Scalar;
    return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

void force_isa(Isa isa) { forced.store(static_cast<int>(isa), std::memory_order_relaxed); }
void reset_isa() { forced.store(-1, std::memory_order_relaxed); }

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

double energy_gradient(const double* x, const double* y, int n, const PairCoeffs& c, double* gx,
                       double* gy) {
    if (active_isa() == Isa::Avx2) return energy_gradient_avx2(x, y, n, c, gx, gy);
    return energy_gradient_scalar(x, y, n, c, gx, gy);
}

void axpy(double a, const double* x, double* y, int m) {
    if (active_isa() == Isa::Avx2) axpy_avx2(a, x, y, m);
    else axpy_scalar(a, x, y, m);
}

} // namespace equivibe::kernels
