#include "equivibe/symmetry.hpp"

#include <cmath>
#include <numbers>

#include "equivibe/errors.hpp"

namespace equivibe {

namespace {
int mod(int a, int n) { return ((a % n) + n) % n; }
} // namespace

DihedralElement compose(const DihedralElement& a, const DihedralElement& b, int n) {
    return {mod(a.rot + (a.refl ? -b.rot : b.rot), n), a.refl != b.refl};
}

DihedralElement inverse(const DihedralElement& a, int n) {
    if (a.refl) return a;
    return {mod(-a.rot, n), false};
}

O2Element compose(const O2Element& a, const O2Element& b) {
    return {a.angle + (a.refl ? -b.angle : b.angle), a.refl != b.refl};
}

O2Element inverse(const O2Element& a) {
    if (a.refl) return a;
    return {-a.angle, false};
}

GroupElement compose(const GroupElement& a, const GroupElement& b, int n) {
    return {compose(a.d, b.d, n), compose(a.o, b.o)};
}

GroupElement inverse(const GroupElement& a, int n) { return {inverse(a.d, n), inverse(a.o)}; }

cplx apply(const O2Element& o, cplx z) {
    const cplx w = o.refl ? std::conj(z) : z;
    return std::polar(1.0, o.angle) * w;
}

O2Element planar_image(const DihedralElement& d, int n) {
    return {2.0 * std::numbers::pi * d.rot / n, d.refl};
}

GroupElement diagonal(const DihedralElement& d, int n) { return {d, planar_image(d, n)}; }

Configuration act(const GroupElement& g, const Configuration& u) {
    const int n = static_cast<int>(u.size());
    Configuration out(n);
    for (int k = 0; k < n; ++k) {
        const int gk = mod(g.d.rot + (g.d.refl ? -k : k), n);
        out[gk] = apply(g.o, u[k]);
    }
    return out;
}

Eigen::MatrixXd action_matrix(const GroupElement& g, int n) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    const double c = std::cos(g.o.angle), s = std::sin(g.o.angle);
    Eigen::Matrix2d A;
    if (g.o.refl) A << c, s, s, -c;
    else A << c, -s, s, c;
    for (int k = 0; k < n; ++k) {
        const int gk = mod(g.d.rot + (g.d.refl ? -k : k), n);
        M.block<2, 2>(2 * gk, 2 * k) = A;
    }
    return M;
}

namespace {

Eigen::VectorXd embed(const std::vector<cplx>& w) {
    Eigen::VectorXd v(2 * w.size());
    for (size_t k = 0; k < w.size(); ++k) {
        v[2 * k] = w[k].real();
        v[2 * k + 1] = w[k].imag();
    }
    return v.normalized();
}

// Complex vector gamma^{m k} times a scalar.
std::vector<cplx> mode(int n, int m, cplx scale) {
    std::vector<cplx> w(n);
    for (int k = 0; k < n; ++k) w[k] = scale * std::polar(1.0, 2.0 * std::numbers::pi * m * k / n);
    return w;
}

} // namespace

std::vector<IsotypicalComponent> isotypical_basis(int n) {
    if (n < 3) throw DomainError("isotypical_basis requires n >= 3");
    const cplx I(0.0, 1.0);
    std::vector<IsotypicalComponent> out;
    const int half = n / 2;
    for (int j = 0; j <= half; ++j) {
        IsotypicalComponent c;
        c.j = j;
        c.name = "V" + std::to_string(j);
        std::vector<Eigen::VectorXd> cols;
        if (j == 0) {
            cols.push_back(embed(mode(n, 1, 1.0)));
        } else if (j == 1) {
            const int m = 2;  // v^1 = gamma^{2k}; u^1 is the translation
            cols.push_back(embed(mode(n, m, 1.0)));
            cols.push_back(embed(mode(n, m, I)));
        } else if (2 * j == n) {
            const int m = j + 1;
            cols.push_back(embed(mode(n, m, 1.0)));
            cols.push_back(embed(mode(n, m, I)));
        } else {
            const int mu = 1 - j, mv = j + 1;  // u^j, v^j
            cols.push_back(embed(mode(n, mu, 1.0)));
            cols.push_back(embed(mode(n, mu, I)));
            cols.push_back(embed(mode(n, mv, 1.0)));
            cols.push_back(embed(mode(n, mv, I)));
        }
        c.dim = static_cast<int>(cols.size());
        c.basis.resize(2 * n, c.dim);
        for (int i = 0; i < c.dim; ++i) c.basis.col(i) = cols[i];
        out.push_back(std::move(c));
    }
    return out;
}

Eigen::MatrixXd null_directions(int n) {
    const cplx I(0.0, 1.0);
    Eigen::MatrixXd N(2 * n, 3);
    N.col(0) = embed(mode(n, 0, 1.0));
    N.col(1) = embed(mode(n, 0, I));
    N.col(2) = embed(mode(n, 1, I));
    return N;
}

} // namespace equivibe
