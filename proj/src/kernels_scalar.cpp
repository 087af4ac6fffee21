#include "equivibe/kernels.hpp"

#include <cmath>

namespace equivibe::kernels {

namespace {

inline void bond_terms(const double* x, const double* y, int n, double& e, double* gx, double* gy) {
    for (int j = 0; j < n; ++j) {
        const int k = (j + 1) % n;
        const double dx = x[j] - x[k], dy = y[j] - y[k];
        const double t = dx * dx + dy * dy;
        const double s = std::sqrt(t);
        e += t - 2.0 * s;
        if (gx) {
            const double f = 2.0 * (1.0 - 1.0 / s);
            gx[j] += f * dx; gy[j] += f * dy;
            gx[k] -= f * dx; gy[k] -= f * dy;
        }
    }
}

} // namespace

double energy_gradient_scalar(const double* x, const double* y, int n, const PairCoeffs& c,
                              double* gx, double* gy) {
    double e = 0.0;
    if (gx)
        for (int i = 0; i < n; ++i) gx[i] = gy[i] = 0.0;
    bond_terms(x, y, n, e, gx, gy);
    for (int i = 0; i < n; ++i) {
        double ax = 0.0, ay = 0.0;
        for (int j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j], dy = y[i] - y[j];
            const double t = dx * dx + dy * dy;
            const double inv = 1.0 / t;
            const double inv3 = inv * inv * inv;
            const double inv6 = inv3 * inv3;
            const double rs = 1.0 / std::sqrt(t);
            e += c.B * inv6 - c.A * inv3 + c.sigma * rs;
            if (gx) {
                const double dw = (-6.0 * c.B * inv6 + 3.0 * c.A * inv3 - 0.5 * c.sigma * rs) * inv;
                const double fx = 2.0 * dw * dx, fy = 2.0 * dw * dy;
                ax += fx; ay += fy;
                gx[j] -= fx; gy[j] -= fy;
            }
        }
        if (gx) { gx[i] += ax; gy[i] += ay; }
    }
    return e;
}

void axpy_scalar(double a, const double* x, double* y, int m) {
    for (int i = 0; i < m; ++i) y[i] += a * x[i];
}

} // namespace equivibe::kernels
