#include "equivibe/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "equivibe/errors.hpp"
#include "equivibe/io.hpp"
#include "equivibe/kernels.hpp"
#include "equivibe/symmetry.hpp"

namespace equivibe {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Potential and gradient on the flattened layout through the dispatched kernel.
class Force {
public:
    explicit Force(const PotentialParams& p) : n_(p.n), c_{p.A, p.B, p.sigma}, x_(n_), y_(n_), gx_(n_), gy_(n_) {}

    double operator()(const Eigen::VectorXd& q, Eigen::VectorXd* g) {
        for (int k = 0; k < n_; ++k) {
            x_[k] = q[2 * k];
            y_[k] = q[2 * k + 1];
        }
        const double e = kernels::energy_gradient(x_.data(), y_.data(), n_, c_, g ? gx_.data() : nullptr,
                                                  g ? gy_.data() : nullptr);
        if (g) {
            g->resize(2 * n_);
            for (int k = 0; k < n_; ++k) {
                (*g)[2 * k] = gx_[k];
                (*g)[2 * k + 1] = gy_[k];
            }
        }
        return e;
    }

private:
    int n_;
    kernels::PairCoeffs c_;
    std::vector<double> x_, y_, gx_, gy_;
};

double min_distance(const Eigen::VectorXd& q) {
    const int n = static_cast<int>(q.size()) / 2;
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            m = std::min(m, std::hypot(q[2 * j] - q[2 * k], q[2 * j + 1] - q[2 * k + 1]));
    return m;
}

// Closest pair approach along the straight step from a to b.
double swept_min_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const int n = static_cast<int>(a.size()) / 2;
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            const double x0 = a[2 * j] - a[2 * k], y0 = a[2 * j + 1] - a[2 * k + 1];
            const double dx = b[2 * j] - b[2 * k] - x0, dy = b[2 * j + 1] - b[2 * k + 1] - y0;
            const double dd = dx * dx + dy * dy;
            const double s = dd > 0 ? std::clamp(-(x0 * dx + y0 * dy) / dd, 0.0, 1.0) : 0.0;
            m = std::min(m, std::hypot(x0 + s * dx, y0 + s * dy));
        }
    return m;
}

double radius(const Eigen::VectorXd& q) {
    const int n = static_cast<int>(q.size()) / 2;
    double cx = 0, cy = 0;
    for (int k = 0; k < n; ++k) {
        cx += q[2 * k];
        cy += q[2 * k + 1];
    }
    cx /= n;
    cy /= n;
    double r = 0;
    for (int k = 0; k < n; ++k) r = std::max(r, std::hypot(q[2 * k] - cx, q[2 * k + 1] - cy));
    return r;
}

} // namespace

double Trajectory::max_relative_energy_drift() const {
    if (energy.empty()) return 0.0;
    const double e0 = energy.front();
    const double scale = std::max(std::abs(e0), 1e-300);
    double m = 0.0;
    for (double e : energy) m = std::max(m, std::abs(e - e0) / scale);
    return m;
}

Trajectory integrate(const Eigen::VectorXd& u0, const Eigen::VectorXd& v0, double lambda, double T,
                     const PotentialParams& p, const IntegrateOptions& opt) {
    p.validate();
    const int n = p.n;
    if (u0.size() != 2 * n || v0.size() != 2 * n) throw DomainError("state size does not match n");
    if (!(opt.dt > 0) || !(T >= 0)) throw DomainError("integrate needs dt > 0 and T >= 0");
    if (opt.sample_every < 1) throw DomainError("sample_every must be >= 1");
    const double scale = opt.length_scale > 0 ? opt.length_scale : radius(u0);
    const double guard = opt.collision_factor * scale;
    if (min_distance(u0) < guard) throw DomainError("initial configuration has coincident particles");

    const long steps = std::max<long>(1, std::lround(std::ceil(T / opt.dt - 1e-9)));
    const double h = T > 0 ? T / steps : 0.0;
    const double l2 = lambda * lambda;

    Trajectory tr;
    tr.n = n;
    tr.lambda = lambda;
    tr.dt = h;
    Force force(p);
    Eigen::VectorXd q = u0, v = v0, g(2 * n);
    double V = force(q, &g);
    auto record = [&](double t) {
        tr.times.push_back(t);
        tr.q.push_back(q);
        tr.v.push_back(v);
        tr.energy.push_back(0.5 * v.squaredNorm() + l2 * V);
    };
    record(0.0);
    if (T == 0) return tr;
    Eigen::VectorXd prev(2 * n);
    for (long s = 1; s <= steps; ++s) {
        prev = q;
        kernels::axpy(-0.5 * h * l2, g.data(), v.data(), 2 * n);
        kernels::axpy(h, v.data(), q.data(), 2 * n);
        V = force(q, &g);
        kernels::axpy(-0.5 * h * l2, g.data(), v.data(), 2 * n);
        const double t = s == steps ? T : s * h;
        if (swept_min_distance(prev, q) < guard) {
            tr.collided = true;
            tr.collision_time = t;
            record(t);
            break;
        }
        if (s % opt.sample_every == 0 || s == steps) record(t);
    }
    return tr;
}

namespace {

struct Shot {
    Eigen::VectorXd q, v;   // at t = 2 pi
    Eigen::MatrixXd Q, V;   // d(q, v) / d(u0, v0, lambda)
    bool collided = false;
};

Shot shoot(const Eigen::VectorXd& u0, const Eigen::VectorXd& v0, double lambda, const PotentialParams& p,
           double dt, bool tangent) {
    const int n = p.n, d = 2 * n, m = 2 * d + 1;
    const long steps = std::lround(std::ceil(two_pi / dt - 1e-9));
    const double h = two_pi / steps;
    const double l2 = lambda * lambda;
    Force force(p);
    Shot s;
    s.q = u0;
    s.v = v0;
    Eigen::VectorXd g(d);
    force(s.q, &g);
    Eigen::MatrixXd Hm, dA;
    if (tangent) {
        s.Q = Eigen::MatrixXd::Zero(d, m);
        s.Q.leftCols(d).setIdentity();
        s.V = Eigen::MatrixXd::Zero(d, m);
        s.V.middleCols(d, d).setIdentity();
        Hm = hessian(from_vector(s.q), p);
    }
    const double guard = 1e-6 * radius(u0);
    auto accel = [&] {
        dA.noalias() = -l2 * (Hm * s.Q);
        dA.col(2 * d) -= 2.0 * lambda * g;
    };
    for (long k = 0; k < steps; ++k) {
        if (tangent) {
            accel();
            s.V += 0.5 * h * dA;
            s.Q += h * s.V;
        }
        s.v -= 0.5 * h * l2 * g;
        s.q += h * s.v;
        force(s.q, &g);
        s.v -= 0.5 * h * l2 * g;
        if (tangent) {
            Hm = hessian(from_vector(s.q), p);
            accel();
            s.V += 0.5 * h * dA;
        }
        if (min_distance(s.q) < guard) {
            s.collided = true;
            break;
        }
    }
    return s;
}

} // namespace

PeriodicOrbit find_periodic_orbit(const Equilibrium& eq, const PotentialParams& p, const Eigen::MatrixXd& modes,
                                  double lambda_seed, double eps, const ShootingOptions& opt,
                                  const std::string& seed_tag) {
    p.validate();
    const int n = p.n, d = 2 * n, m = 2 * d + 1;
    if (modes.rows() != d || modes.cols() < 1 || modes.norm() == 0)
        throw DomainError("seed modes have the wrong size or are zero");
    if (!(eps > 0) || !(lambda_seed > 0)) throw DomainError("shooting needs eps > 0 and lambda > 0");
    const Eigen::VectorXd ubar = to_vector(eq.u0);

    Eigen::VectorXd e = modes.col(0).normalized();
    Eigen::VectorXd e2 = Eigen::VectorXd::Zero(d);
    if (opt.symmetrize || opt.rotating) {
        // Align e with the fixed space of a reflection; for a rotating seed
        // this also puts the time origin on a reflection axis.
        std::vector<int> cand;
        if (opt.reflection >= 0) cand.push_back(opt.reflection);
        else
            for (int a = 0; a < n; ++a) cand.push_back(n + a);
        bool ok = false;
        for (int idx : cand) {
            const DihedralElement h{idx % n, idx >= n};
            const Eigen::MatrixXd W = modes + action_matrix(diagonal(h, n), n) * modes;
            Eigen::Index best;
            const double norm = W.colwise().norm().maxCoeff(&best);
            if (norm > 1e-6) {
                e = W.col(best).normalized();
                ok = true;
                break;
            }
        }
        if (!ok) throw DomainError("seed modes have no reflection-symmetric component");
    }
    if (opt.rotating) {
        // u = u° + eps (e cos t + e' sin t) to first order
        if (modes.cols() < 2) throw DomainError("a rotating seed needs a two-dimensional eigenspace");
        double bn = 0;
        for (Eigen::Index c = 0; c < modes.cols(); ++c) {
            const Eigen::VectorXd w = modes.col(c) - modes.col(c).dot(e) * e;
            if (w.norm() > bn) { bn = w.norm(); e2 = w; }
        }
        if (bn < 1e-8) throw DomainError("eigenspace columns are parallel");
        e2.normalize();
    }
    if (opt.sign < 0) e = -e;
    const bool free_v = opt.rotating || opt.free_velocity;

    // Side conditions on z = (u0, v0, lambda): amplitude along e, centre of
    // mass, rotation gauge, phase <v0, e> = 0, and v0 = 0 unless freed.
    const int nc = 5 + (free_v ? 0 : d);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nc, m);
    Eigen::VectorXd target = Eigen::VectorXd::Zero(nc);
    C.block(0, 0, 1, d) = e.transpose();
    for (int k = 0; k < n; ++k) {
        C(1, 2 * k) = 1.0;
        C(2, 2 * k + 1) = 1.0;
        C(3, 2 * k) = -ubar[2 * k + 1];
        C(3, 2 * k + 1) = ubar[2 * k];
    }
    C.row(3).normalize();
    C.block(4, d, 1, d) = e.transpose();
    if (!free_v) C.block(5, d, d, d).setIdentity();
    target.head(4) = C.topRows(4).leftCols(d) * ubar;
    target(0) += eps;

    PeriodicOrbit out;
    out.lambda_seed = lambda_seed;
    out.amplitude = eps;
    out.seed = seed_tag;
    Eigen::VectorXd z(m);
    z.head(d) = ubar + eps * e;
    z.segment(d, d) = eps * e2;
    z(2 * d) = lambda_seed;

    auto residual = [&](const Shot& s, const Eigen::VectorXd& zz) {
        Eigen::VectorXd F(2 * d + nc);
        F.head(d) = s.q - zz.head(d);
        F.segment(d, d) = s.v - zz.segment(d, d);
        F.tail(nc) = C * zz - target;
        return F;
    };
    auto run = [&](const Eigen::VectorXd& zz, bool tangent) {
        return shoot(zz.head(d), zz.segment(d, d), zz(2 * d), p, opt.dt, tangent);
    };

    Shot s = run(z, true);
    Eigen::VectorXd F = residual(s, z);
    for (int it = 0; it < opt.max_iter; ++it) {
        if (s.collided) break;
        const double per = F.head(2 * d).norm();
        out.trace.push_back(per);
        out.iterations = it;
        if (per <= opt.tol && F.tail(nc).norm() <= 1e-10) {
            out.converged = true;
            break;
        }
        Eigen::MatrixXd J(2 * d + nc, m);
        J.topRows(d) = s.Q;
        J.middleRows(d, d) = s.V;
        J.topLeftCorner(2 * d, 2 * d) -= Eigen::MatrixXd::Identity(2 * d, 2 * d);
        J.bottomRows(nc) = C;
        const Eigen::VectorXd dz = J.completeOrthogonalDecomposition().solve(-F);
        double step = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 12; ++ls, step *= 0.5) {
            const Eigen::VectorXd zn = z + step * dz;
            if (!(zn(2 * d) > 0)) continue;
            Shot sn = run(zn, false);
            if (sn.collided) continue;
            const Eigen::VectorXd Fn = residual(sn, zn);
            if (Fn.norm() < F.norm() || ls == 11) {
                z = zn;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        s = run(z, true);
        F = residual(s, z);
        out.iterations = it + 1;
    }
    out.residual = F.head(2 * d).norm();
    if (!out.converged && out.residual <= opt.tol && F.tail(nc).norm() <= 1e-10) out.converged = true;
    if (out.trace.empty() || out.trace.back() != out.residual) out.trace.push_back(out.residual);
    out.u0 = z.head(d);
    out.v0 = z.segment(d, d);
    out.lambda = z(2 * d);
    IntegrateOptions io;
    io.dt = opt.dt;
    out.traj = integrate(out.u0, out.v0, out.lambda, two_pi, p, io);
    out.traj.seed = seed_tag;
    out.traj.amplitude = eps;
    return out;
}

PeriodicOrbit find_periodic_orbit(const Equilibrium& eq, const PotentialParams& p, const SpectralReport& r,
                                  const CriticalValue& crossing, double eps, const ShootingOptions& opt) {
    for (const auto& e : r.entries) {
        if (e.label.j != crossing.label.j || e.label.variant != crossing.label.variant || e.sign != crossing.sign)
            continue;
        if (e.eigenspace.size() == 0)
            throw DomainError("spectral report carries no eigenvectors; shooting needs a computed spectrum");
        return find_periodic_orbit(eq, p, e.eigenspace, crossing.lambda, eps, opt, crossing.tag());
    }
    throw DomainError("no spectral entry for crossing " + crossing.tag());
}

// ---------------------------------------------------------------- symmetry

namespace {

// Cubic Hermite interpolation of q at time s on a periodic, uniformly sampled trajectory.
Eigen::VectorXd sample_at(const Trajectory& tr, double s) {
    const double T = tr.times.back();
    const int m = tr.size() - 1;
    s = std::fmod(s, T);
    if (s < 0) s += T;
    const double h = T / m;
    double x = s / h;
    int i = static_cast<int>(std::floor(x));
    double f = x - i;
    if (f < 1e-12) f = 0;
    if (1 - f < 1e-12) { f = 0; ++i; }
    if (i >= m) i -= m;
    if (f == 0) return tr.q[i];
    const double f2 = f * f, f3 = f2 * f;
    const double h00 = 2 * f3 - 3 * f2 + 1, h10 = f3 - 2 * f2 + f, h01 = -2 * f3 + 3 * f2, h11 = f3 - f2;
    return h00 * tr.q[i] + h10 * h * tr.v[i] + h01 * tr.q[i + 1] + h11 * h * tr.v[i + 1];
}

struct TimeMap {
    Eigen::MatrixXd M;   // spatial action
    double shift = 0.0;
    bool reverse = false;
};

// Deviation for one element: max_t | M q(tau^{-1} t) - q(t) |; gives up above `cap`.
double element_deviation(const Trajectory& tr, const TimeMap& g, double cap) {
    double m = 0.0;
    const int N = tr.size() - 1;
    for (int k = 0; k < N; ++k) {
        const double t = tr.times[k];
        const double s = g.reverse ? g.shift - t : t - g.shift;
        m = std::max(m, (g.M * sample_at(tr, s) - tr.q[k]).norm());
        if (m > cap) return m;
    }
    return m;
}

} // namespace

double symmetry_deviation(const Trajectory& tr, const Lattice& lat, int class_id) {
    if (tr.size() < 2) throw DomainError("trajectory too short for a symmetry check");
    const int n = tr.n;
    if (lat.n() != n) throw DomainError("lattice and trajectory disagree on n");
    const double T = tr.times.back();
    const auto& S = lat.cls(class_id);
    auto spatial = [&](int di) { return action_matrix(diagonal(DihedralElement{di % n, di >= n}, n), n); };

    if (S.infinite_K()) {
        // Contains every time shift.
        double worst = 0.0;
        for (int x : S.elems) {
            const int di = x / 2;
            const bool rev = x % 2;
            for (int j = 0; j < 16; ++j) {
                TimeMap g{spatial(di), T * j / 16.0, rev};
                worst = std::max(worst, element_deviation(tr, g, std::numeric_limits<double>::infinity()));
            }
        }
        return worst;
    }

    const int Q = lat.Q();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> gens = S.gens;
    for (int c = 0; c < lat.frame_size(); ++c) {
        double worst = 0.0;
        for (int x : gens) {
            const int y = lat.mul(lat.mul(c, x), lat.inv(c));
            int di, pp, f;
            lat.decode(y, di, pp, f);
            TimeMap g{spatial(di), T * pp / Q, f == 1};
            worst = std::max(worst, element_deviation(tr, g, best));
            if (worst >= best) break;
        }
        best = std::min(best, worst);
        if (best == 0.0) break;
    }
    return gens.empty() ? 0.0 : best;
}

// ---------------------------------------------------------------- output

void write_csv(const Trajectory& tr, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    f << "t";
    for (int k = 0; k < tr.n; ++k) f << ",x_" << k << ",y_" << k;
    f << ",E\n";
    for (int i = 0; i < tr.size(); ++i) {
        f << fmt12(tr.times[i]);
        for (int k = 0; k < 2 * tr.n; ++k) f << ',' << fmt12(tr.q[i][k]);
        f << ',' << fmt12(tr.energy[i]) << '\n';
    }
}

std::string trajectory_svg(const Trajectory& tr, const Configuration& ref) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    auto grow = [&](double x, double y) {
        xmin = std::min(xmin, x); xmax = std::max(xmax, x);
        ymin = std::min(ymin, y); ymax = std::max(ymax, y);
    };
    for (const auto& q : tr.q)
        for (int k = 0; k < tr.n; ++k) grow(q[2 * k], q[2 * k + 1]);
    for (const auto& z : ref) grow(z.real(), z.imag());
    const double pad = 0.1 * std::max(xmax - xmin, ymax - ymin) + 1e-9;
    xmin -= pad; xmax += pad; ymin -= pad; ymax += pad;
    const double W = 480, s = W / std::max(xmax - xmin, ymax - ymin);
    auto X = [&](double x) { return fmt12((x - xmin) * s); };
    auto Y = [&](double y) { return fmt12((ymax - y) * s); };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << W << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const int stride = std::max(1, tr.size() / 2000);
    for (int k = 0; k < tr.n; ++k) {
        o << "<polyline fill=\"none\" stroke=\"hsl(" << (360 * k / tr.n) << ",70%,40%)\" stroke-width=\"1\" points=\"";
        for (int i = 0; i < tr.size(); i += stride) o << X(tr.q[i][2 * k]) << ',' << Y(tr.q[i][2 * k + 1]) << ' ';
        o << "\"/>\n";
    }
    for (const auto& z : ref)
        o << "<circle cx=\"" << X(z.real()) << "\" cy=\"" << Y(z.imag()) << "\" r=\"3\" fill=\"black\"/>\n";
    o << "</svg>\n";
    return o.str();
}

nlohmann::json to_json(const PeriodicOrbit& o) {
    nlohmann::json tr = nlohmann::json::array();
    for (double r : o.trace) tr.push_back(round12(r));
    nlohmann::json u = nlohmann::json::array();
    for (int i = 0; i < o.u0.size(); ++i) u.push_back(round12(o.u0[i]));
    nlohmann::json v = nlohmann::json::array();
    for (int i = 0; i < o.v0.size(); ++i) v.push_back(round12(o.v0[i]));
    return {{"seed", o.seed},
            {"converged", o.converged},
            {"lambda", round12(o.lambda)},
            {"lambda_seed", round12(o.lambda_seed)},
            {"relative_lambda_shift", round12(std::abs(o.lambda - o.lambda_seed) / o.lambda_seed)},
            {"limit_period", round12(two_pi * o.lambda)},
            {"amplitude", round12(o.amplitude)},
            {"residual", round12(o.residual)},
            {"iterations", o.iterations},
            {"residual_trace", tr},
            {"energy_drift", round12(o.traj.max_relative_energy_drift())},
            {"u0", u},
            {"v0", v}};
}

} // namespace equivibe
