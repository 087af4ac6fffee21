#include "equivibe/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "equivibe/errors.hpp"
#include "equivibe/kernels.hpp"

namespace equivibe {

void PotentialParams::validate() const {
    if (n < 3) throw DomainError("n must be at least 3, got " + std::to_string(n));
    if (!(B >= 0.0)) throw DomainError("B must be non-negative");
    if (B == 0.0 && (A != 0.0 || sigma != 0.0))
        throw DomainError("B = 0 requires A = sigma = 0 (otherwise phi is unbounded below)");
    if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(sigma))
        throw DomainError("potential coefficients must be finite");
}

namespace pot {
double U(double t) { return t - 2.0 * std::sqrt(t); }
double dU(double t) { return 1.0 - 1.0 / std::sqrt(t); }
double d2U(double t) { return 0.5 / (t * std::sqrt(t)); }
double W(double t, const PotentialParams& p) {
    const double t3 = t * t * t;
    return p.B / (t3 * t3) - p.A / t3 + p.sigma / std::sqrt(t);
}
double dW(double t, const PotentialParams& p) {
    const double t3 = t * t * t;
    return -6.0 * p.B / (t3 * t3 * t) + 3.0 * p.A / (t3 * t) - 0.5 * p.sigma / (t * std::sqrt(t));
}
double d2W(double t, const PotentialParams& p) {
    const double t3 = t * t * t;
    return 42.0 * p.B / (t3 * t3 * t * t) - 12.0 * p.A / (t3 * t * t) +
           0.75 * p.sigma / (t * t * std::sqrt(t));
}
} // namespace pot

double min_pair_distance(const Configuration& u) {
    double m = INFINITY;
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = i + 1; j < u.size(); ++j) m = std::min(m, std::abs(u[i] - u[j]));
    return m;
}

Eigen::VectorXd to_vector(const Configuration& u) {
    Eigen::VectorXd v(2 * u.size());
    for (size_t k = 0; k < u.size(); ++k) {
        v[2 * k] = u[k].real();
        v[2 * k + 1] = u[k].imag();
    }
    return v;
}

Configuration from_vector(const Eigen::VectorXd& v) {
    Configuration u(v.size() / 2);
    for (size_t k = 0; k < u.size(); ++k) u[k] = cplx(v[2 * k], v[2 * k + 1]);
    return u;
}

namespace {

void check_config(const Configuration& u, const PotentialParams& p) {
    if (static_cast<int>(u.size()) != p.n)
        throw DomainError("configuration has " + std::to_string(u.size()) + " points, expected " +
                          std::to_string(p.n));
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = i + 1; j < u.size(); ++j)
            if (u[i] == u[j]) {
                std::ostringstream os;
                os << "coincident particles " << i << " and " << j;
                throw DomainError(os.str());
            }
}

kernels::PairCoeffs coeffs(const PotentialParams& p) { return {p.A, p.B, p.sigma}; }

} // namespace

double potential_energy(const Configuration& u, const PotentialParams& p) {
    check_config(u, p);
    std::vector<double> x(p.n), y(p.n);
    for (int k = 0; k < p.n; ++k) { x[k] = u[k].real(); y[k] = u[k].imag(); }
    return kernels::energy_gradient(x.data(), y.data(), p.n, coeffs(p), nullptr, nullptr);
}

Eigen::VectorXd gradient(const Configuration& u, const PotentialParams& p) {
    check_config(u, p);
    std::vector<double> x(p.n), y(p.n), gx(p.n), gy(p.n);
    for (int k = 0; k < p.n; ++k) { x[k] = u[k].real(); y[k] = u[k].imag(); }
    kernels::energy_gradient(x.data(), y.data(), p.n, coeffs(p), gx.data(), gy.data());
    Eigen::VectorXd g(2 * p.n);
    for (int k = 0; k < p.n; ++k) { g[2 * k] = gx[k]; g[2 * k + 1] = gy[k]; }
    return g;
}

Eigen::MatrixXd hessian(const Configuration& u, const PotentialParams& p) {
    check_config(u, p);
    const int n = p.n;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    auto add_pair = [&](int a, int b, double f1, double f2) {
        const double dx = u[a].real() - u[b].real(), dy = u[a].imag() - u[b].imag();
        Eigen::Matrix2d blk;
        blk << 2 * f1 + 4 * f2 * dx * dx, 4 * f2 * dx * dy, 4 * f2 * dx * dy, 2 * f1 + 4 * f2 * dy * dy;
        H.block<2, 2>(2 * a, 2 * a) += blk;
        H.block<2, 2>(2 * b, 2 * b) += blk;
        H.block<2, 2>(2 * a, 2 * b) -= blk;
        H.block<2, 2>(2 * b, 2 * a) -= blk;
    };
    for (int j = 0; j < n; ++j) {
        const int k = (j + 1) % n;
        const double t = std::norm(u[j] - u[k]);
        add_pair(j, k, pot::dU(t), pot::d2U(t));
    }
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            const double t = std::norm(u[j] - u[k]);
            add_pair(j, k, pot::dW(t, p), pot::d2W(t, p));
        }
    return H;
}

Eigen::VectorXd gradient_fd(const Configuration& u, const PotentialParams& p, double h) {
    Eigen::VectorXd v = to_vector(u), g(v.size());
    for (int i = 0; i < v.size(); ++i) {
        Eigen::VectorXd a = v, b = v;
        a[i] += h;
        b[i] -= h;
        g[i] = (potential_energy(from_vector(a), p) - potential_energy(from_vector(b), p)) / (2 * h);
    }
    return g;
}

Eigen::MatrixXd hessian_fd(const Configuration& u, const PotentialParams& p, double h) {
    Eigen::VectorXd v = to_vector(u);
    Eigen::MatrixXd H(v.size(), v.size());
    for (int i = 0; i < v.size(); ++i) {
        Eigen::VectorXd a = v, b = v;
        a[i] += h;
        b[i] -= h;
        H.col(i) = (gradient(from_vector(a), p) - gradient(from_vector(b), p)) / (2 * h);
    }
    return 0.5 * (H + H.transpose());
}

namespace {

// a_jk for each offset e = 1..n-1
std::vector<double> offset_factors(int n) {
    std::vector<double> a(n, 0.0);
    for (int e = 1; e < n; ++e) {
        const double s = std::sin(e * std::numbers::pi / n);
        a[e] = 4.0 * s * s;
    }
    return a;
}

} // namespace

double phi(double t, const PotentialParams& p) {
    if (!(t > 0.0)) throw DomainError("phi requires t > 0");
    const auto a = offset_factors(p.n);
    double s = p.n * pot::U(a[1] * t * t);
    // pairs j<k with offset e occur n - e times
    for (int e = 1; e < p.n; ++e) s += (p.n - e) * pot::W(a[e] * t * t, p);
    return s;
}

double dphi(double t, const PotentialParams& p) {
    if (!(t > 0.0)) throw DomainError("phi requires t > 0");
    const auto a = offset_factors(p.n);
    double s = p.n * pot::dU(a[1] * t * t) * 2.0 * a[1] * t;
    for (int e = 1; e < p.n; ++e) s += (p.n - e) * pot::dW(a[e] * t * t, p) * 2.0 * a[e] * t;
    return s;
}

double d2phi(double t, const PotentialParams& p) {
    if (!(t > 0.0)) throw DomainError("phi requires t > 0");
    const auto a = offset_factors(p.n);
    auto term = [&](double ae, double f1, double f2) {
        const double q = 2.0 * ae * t;
        return f2 * q * q + f1 * 2.0 * ae;
    };
    double s = p.n * term(a[1], pot::dU(a[1] * t * t), pot::d2U(a[1] * t * t));
    for (int e = 1; e < p.n; ++e)
        s += (p.n - e) * term(a[e], pot::dW(a[e] * t * t, p), pot::d2W(a[e] * t * t, p));
    return s;
}

Configuration ring_configuration(int n, double r) {
    Configuration u(n);
    for (int k = 0; k < n; ++k) u[k] = std::polar(r, 2.0 * std::numbers::pi * k / n);
    return u;
}

Equilibrium find_equilibrium(const PotentialParams& p, const EquilibriumOptions& opt) {
    p.validate();
    double lo = opt.lo, hi = opt.hi > 0 ? opt.hi : 10.0 * p.n;
    if (!(lo > 0 && hi > lo)) throw SolverError("invalid bracket");

    // Coarse log-spaced scan for the global minimum on [lo, hi].
    const int samples = 4000;
    int best = 0;
    double bestv = INFINITY;
    std::vector<double> ts(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        ts[i] = lo * std::pow(hi / lo, double(i) / samples);
        const double v = phi(ts[i], p);
        if (v < bestv) { bestv = v; best = i; }
    }
    if (best == 0 || best == samples) {
        std::ostringstream os;
        os << "minimum of phi not interior to bracket [" << lo << ", " << hi << "], best at t=" << ts[best];
        throw SolverError(os.str());
    }
    double a = ts[best - 1], b = ts[best + 1];

    // Golden-section refinement.
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = phi(c, p), fd = phi(d, p);
    int it = 0;
    while (b - a > 1e-9 * (1.0 + std::abs(a)) && it < opt.max_iter) {
        if (fc < fd) { b = d; d = c; fd = fc; c = b - g * (b - a); fc = phi(c, p); }
        else { a = c; c = d; fc = fd; d = a + g * (b - a); fd = phi(d, p); }
        ++it;
    }
    double t = 0.5 * (a + b);

    // Newton polish on phi'.
    for (int k = 0; k < 50; ++k, ++it) {
        const double f1 = dphi(t, p), f2 = d2phi(t, p);
        if (!(f2 > 0)) throw SolverError("phi'' not positive during Newton polish");
        const double step = f1 / f2;
        t -= step;
        if (std::abs(step) <= 1e-15 * t) break;
    }
    const double res = dphi(t, p);
    if (!(std::abs(res) <= opt.tol)) {
        std::ostringstream os;
        os << "equilibrium not converged: |phi'(" << t << ")| = " << std::abs(res) << ", bracket [" << a
           << ", " << b << "]";
        throw SolverError(os.str());
    }

    Equilibrium eq;
    eq.r0 = t;
    eq.u0 = ring_configuration(p.n, t);
    const auto af = offset_factors(p.n);
    eq.a = af[1];
    eq.ajk = Eigen::MatrixXd::Zero(p.n, p.n);
    for (int j = 0; j < p.n; ++j)
        for (int k = 0; k < p.n; ++k)
            if (j != k) eq.ajk(j, k) = af[((k - j) % p.n + p.n) % p.n];
    eq.phi_min = phi(t, p);
    eq.dphi_r0 = res;
    eq.grad_norm = gradient(eq.u0, p).norm();
    eq.iterations = it;
    return eq;
}

} // namespace equivibe
