// Compiled with -mavx2 when the compiler supports it; callers reach this
// only after a runtime CPU check.
#include "equivibe/kernels.hpp"

#include <cmath>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace equivibe::kernels {

#if defined(__AVX2__)

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

} // namespace

double energy_gradient_avx2(const double* x, const double* y, int n, const PairCoeffs& c,
                            double* gx, double* gy) {
    double e = 0.0;
    if (gx)
        for (int i = 0; i < n; ++i) gx[i] = gy[i] = 0.0;
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

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d vB = _mm256_set1_pd(c.B), vA = _mm256_set1_pd(c.A), vS = _mm256_set1_pd(c.sigma);
    const __m256d m6B = _mm256_set1_pd(-6.0 * c.B), p3A = _mm256_set1_pd(3.0 * c.A);
    const __m256d mhS = _mm256_set1_pd(-0.5 * c.sigma), two = _mm256_set1_pd(2.0);
    __m256d eacc = _mm256_setzero_pd();

    for (int i = 0; i < n; ++i) {
        const __m256d xi = _mm256_set1_pd(x[i]), yi = _mm256_set1_pd(y[i]);
        __m256d axv = _mm256_setzero_pd(), ayv = _mm256_setzero_pd();
        int j = i + 1;
        for (; j + 4 <= n; j += 4) {
            const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(x + j));
            const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(y + j));
            const __m256d t = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
            const __m256d inv = _mm256_div_pd(one, t);
            const __m256d inv3 = _mm256_mul_pd(_mm256_mul_pd(inv, inv), inv);
            const __m256d inv6 = _mm256_mul_pd(inv3, inv3);
            const __m256d rs = _mm256_div_pd(one, _mm256_sqrt_pd(t));
            const __m256d w = _mm256_add_pd(
                _mm256_sub_pd(_mm256_mul_pd(vB, inv6), _mm256_mul_pd(vA, inv3)), _mm256_mul_pd(vS, rs));
            eacc = _mm256_add_pd(eacc, w);
            if (gx) {
                const __m256d dw = _mm256_mul_pd(
                    _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(m6B, inv6), _mm256_mul_pd(p3A, inv3)),
                                  _mm256_mul_pd(mhS, rs)),
                    inv);
                const __m256d fx = _mm256_mul_pd(_mm256_mul_pd(two, dw), dx);
                const __m256d fy = _mm256_mul_pd(_mm256_mul_pd(two, dw), dy);
                axv = _mm256_add_pd(axv, fx);
                ayv = _mm256_add_pd(ayv, fy);
                _mm256_storeu_pd(gx + j, _mm256_sub_pd(_mm256_loadu_pd(gx + j), fx));
                _mm256_storeu_pd(gy + j, _mm256_sub_pd(_mm256_loadu_pd(gy + j), fy));
            }
        }
        double ax = 0.0, ay = 0.0;
        for (; j < n; ++j) {
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
        if (gx) {
            gx[i] += ax + hsum(axv);
            gy[i] += ay + hsum(ayv);
        }
    }
    return e + hsum(eacc);
}

void axpy_avx2(double a, const double* x, double* y, int m) {
    const __m256d va = _mm256_set1_pd(a);
    int i = 0;
    for (; i + 4 <= m; i += 4) {
        const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < m; ++i) y[i] += a * x[i];
}

#else

double energy_gradient_avx2(const double* x, const double* y, int n, const PairCoeffs& c,
                            double* gx, double* gy) {
    return energy_gradient_scalar(x, y, n, c, gx, gy);
}

void axpy_avx2(double a, const double* x, double* y, int m) { axpy_scalar(a, x, y, m); }

#endif

} // namespace equivibe::kernels
