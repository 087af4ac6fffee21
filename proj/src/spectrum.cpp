#include "equivibe/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "equivibe/errors.hpp"
#include "equivibe/io.hpp"
#include "equivibe/symmetry.hpp"

namespace equivibe {

namespace {
constexpr double pi = std::numbers::pi;

double sq(double x) { return x * x; }
} // namespace

CoefficientTable coefficient_table(const Equilibrium& eq, const PotentialParams& p) {
    const int n = p.n;
    CoefficientTable T;
    T.n = n;
    T.r0 = eq.r0;
    T.v = T.u = T.vw = T.uw = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            const double s2 = sq(std::sin(pi * (j - k) / n));
            const double t = 4.0 * s2 * eq.r0 * eq.r0;
            const int e = ((k - j) % n + n) % n;
            if (e == 1 || e == n - 1) {
                T.v(j, k) = pot::dU(t);
                T.u(j, k) = 2.0 * pot::d2U(t) * s2;
            }
            T.vw(j, k) = pot::dW(t, p);
            T.uw(j, k) = 2.0 * pot::d2W(t, p) * s2;
        }
    return T;
}

double CoefficientTable::A(int m) const {
    double s = 0.0;
    for (int e = 1; e < n; ++e) {
        const double fp = v(0, e) + vw(0, e);
        const double tfpp = 2.0 * r0 * r0 * (u(0, e) + uw(0, e));
        s += sq(std::sin(pi * e * (m + 1) / n)) * (fp + tfpp);
    }
    return 4.0 * s;
}

double CoefficientTable::B(int m) const {
    double s = 0.0;
    for (int e = 1; e < n; ++e) {
        const double tfpp = 2.0 * r0 * r0 * (u(0, e) + uw(0, e));
        s += tfpp * std::sin(pi * e * (1 + m) / n) * std::sin(pi * e * (1 - m) / n);
    }
    return 4.0 * s;
}

std::string SpectralEntry::tag() const {
    std::string s = label.str();
    if (sign > 0) s += "+";
    if (sign < 0) s += "-";
    return s;
}

std::string CriticalValue::tag() const {
    std::string s = label.str();
    if (sign > 0) s += ",+";
    if (sign < 0) s += ",-";
    return s;
}

SpectralReport isotypical_blocks(const Equilibrium& eq, const PotentialParams& p, double cross_tol) {
    p.validate();
    const int n = p.n;
    if (static_cast<int>(eq.u0.size()) != n) throw DomainError("equilibrium does not match n");
    const Eigen::MatrixXd H = hessian(eq.u0, p);
    const CoefficientTable T = coefficient_table(eq, p);
    const auto comps = isotypical_basis(n);

    SpectralReport rep;
    rep.n = n;
    rep.r0 = eq.r0;
    rep.resolution =
        "closed form from rotating-frame Fourier sums A(m), B(m); "
        "V_k (0<k<n/2) block [[A(-k), B(k)], [B(k), A(k)]] on (u^k, v^k); "
        "V_0 = A(0)+B(0); V_1 = A(1); V_{n/2} splits into kappa-even A+B (primed) and kappa-odd A-B";

    // Slice basis with a coupling id per column: columns sharing an id may
    // interact, all other pairs are cross terms.
    std::vector<Eigen::VectorXd> cols;
    std::vector<int> group;
    int gid = 0;
    auto add_block = [&](int j, int variant, int irrep_dim, const std::vector<Eigen::VectorXd>& bcols,
                         const Eigen::MatrixXd& closed, const Eigen::MatrixXd& full) {
        SpectralBlock b;
        b.j = j;
        b.variant = variant;
        b.name = "V" + IrrepLabel{j, variant, 0}.str();
        b.irrep_dim = irrep_dim;
        b.closed = closed;
        const int d = static_cast<int>(bcols.size());
        b.basis.resize(2 * n, d);
        for (int i = 0; i < d; ++i) b.basis.col(i) = bcols[i];
        b.full = full;
        b.oracle = b.basis.transpose() * H * b.basis;
        const double scale = std::max(b.oracle.cwiseAbs().maxCoeff(), 1e-300);
        b.rel_diff = (b.closed - b.oracle).cwiseAbs().maxCoeff() / scale;
        rep.blocks.push_back(std::move(b));
    };

    for (const auto& c : comps) {
        const int j = c.j;
        if (j == 0) {
            add_block(0, 0, 1, {c.basis.col(0)}, Eigen::MatrixXd::Constant(1, 1, T.A(0) + T.B(0)), c.basis);
            cols.push_back(c.basis.col(0));
            group.push_back(gid++);
        } else if (c.dim == 2 && 2 * j == n) {
            const double a = T.A(j), b = T.B(j);
            add_block(j, 1, 1, {c.basis.col(0)}, Eigen::MatrixXd::Constant(1, 1, a + b), c.basis.col(0));
            add_block(j, 0, 1, {c.basis.col(1)}, Eigen::MatrixXd::Constant(1, 1, a - b), c.basis.col(1));
            for (int i = 0; i < 2; ++i) {
                cols.push_back(c.basis.col(i));
                group.push_back(gid++);
            }
        } else if (c.dim == 2) {
            add_block(j, 0, 2, {c.basis.col(0)}, Eigen::MatrixXd::Constant(1, 1, T.A(j)), c.basis);
            for (int i = 0; i < 2; ++i) {
                cols.push_back(c.basis.col(i));
                group.push_back(gid++);
            }
        } else {
            Eigen::Matrix2d M;
            M << T.A(-j), T.B(j), T.B(j), T.A(j);
            add_block(j, 0, 2, {c.basis.col(0), c.basis.col(2)}, M, c.basis);
            // (u, v) couple and (iu, iv) couple
            cols.push_back(c.basis.col(0)); group.push_back(gid);
            cols.push_back(c.basis.col(1)); group.push_back(gid + 1);
            cols.push_back(c.basis.col(2)); group.push_back(gid);
            cols.push_back(c.basis.col(3)); group.push_back(gid + 1);
            gid += 2;
        }
    }

    const int m = static_cast<int>(cols.size());
    Eigen::MatrixXd S(2 * n, m);
    for (int i = 0; i < m; ++i) S.col(i) = cols[i];
    const Eigen::MatrixXd Ms = S.transpose() * H * S;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (group[a] != group[b]) rep.max_cross_term = std::max(rep.max_cross_term, std::abs(Ms(a, b)));
    if (rep.max_cross_term > cross_tol)
        throw DomainError("symmetry breaking: cross-component Hessian term " + fmt12(rep.max_cross_term) +
                          " exceeds " + fmt12(cross_tol) + " (equilibrium not symmetric?)");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ms, Eigen::EigenvaluesOnly);
    for (int i = 0; i < m; ++i) rep.slice_eigenvalues.push_back(es.eigenvalues()(i));
    rep.null_residual = (H * null_directions(n)).colwise().norm().maxCoeff();

    for (const auto& b : rep.blocks) {
        rep.max_block_diff = std::max(rep.max_block_diff, b.rel_diff);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ec(b.closed), eo(b.oracle, Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ef(b.full.transpose() * H * b.full);
        const int d = static_cast<int>(b.closed.rows());
        for (int i = 0; i < d; ++i) {
            SpectralEntry e;
            e.label = {b.j, b.variant, 0};
            e.sign = d == 2 ? (i == 0 ? -1 : 1) : 0;
            e.mu = ec.eigenvalues()(i);
            e.mu_oracle = eo.eigenvalues()(i);
            e.real_multiplicity = b.irrep_dim;
            e.eigenvector = (b.basis * ec.eigenvectors().col(i)).normalized();
            // copies of the irreducible: full-component eigenvectors i*irrep_dim .. (i+1)*irrep_dim-1
            e.eigenspace = b.full * ef.eigenvectors().middleCols(i * b.irrep_dim, b.irrep_dim);
            rep.entries.push_back(std::move(e));
        }
    }
    std::stable_sort(rep.entries.begin(), rep.entries.end(),
                     [](const SpectralEntry& x, const SpectralEntry& y) { return x.mu < y.mu; });
    return rep;
}

SpectralReport spectral_report_from_eigenvalues(int n, const std::vector<SpectralEntry>& entries) {
    SpectralReport rep;
    rep.n = n;
    rep.synthetic = true;
    rep.entries = entries;
    for (auto& e : rep.entries) {
        if (e.label.l != 0) throw DomainError("spectral entries must carry plain labels");
        if (e.mu_oracle == 0.0) e.mu_oracle = e.mu;
        if (e.real_multiplicity <= 0) e.real_multiplicity = (e.label.j == 0 || 2 * e.label.j == n) ? 1 : 2;
    }
    std::stable_sort(rep.entries.begin(), rep.entries.end(),
                     [](const SpectralEntry& x, const SpectralEntry& y) { return x.mu < y.mu; });
    rep.resolution = "eigenvalues supplied externally";
    return rep;
}

std::vector<SpectralEntry> parse_eigenvalue_list(const std::string& text) {
    std::vector<SpectralEntry> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(pos, end - pos);
        pos = end + 1;
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("eigenvalue item '" + item + "' lacks '='");
        std::string tag = item.substr(0, eq);
        tag.erase(std::remove_if(tag.begin(), tag.end(), [](char c) { return c == ' ' || c == '\t'; }), tag.end());
        SpectralEntry e;
        if (!tag.empty() && (tag.back() == '+' || tag.back() == '-')) {
            e.sign = tag.back() == '+' ? 1 : -1;
            tag.pop_back();
        }
        try {
            e.label = parse_irrep_label(tag);
            std::size_t used = 0;
            const std::string num = item.substr(eq + 1);
            e.mu = std::stod(num, &used);
            if (num.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(num);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse eigenvalue item '" + item + "'");
        }
        if (e.label.l != 0) throw ConfigError("eigenvalue tags name plain components: '" + item + "'");
        out.push_back(e);
    }
    if (out.empty()) throw ConfigError("empty eigenvalue list");
    return out;
}

std::vector<EigenvalueRecord> eigenvalues_with_multiplicity(const SpectralReport& r, double rel_tol) {
    std::vector<EigenvalueRecord> out;
    for (const auto& e : r.entries) {
        if (!out.empty() && std::abs(out.back().mu - e.mu) <= rel_tol * std::max(1.0, std::abs(e.mu))) {
            out.back().components.emplace_back(e.tag(), e.isotypical_multiplicity);
            out.back().real_multiplicity += e.isotypical_multiplicity * e.real_multiplicity;
            continue;
        }
        EigenvalueRecord rec;
        rec.mu = e.mu;
        rec.components.emplace_back(e.tag(), e.isotypical_multiplicity);
        rec.real_multiplicity = e.isotypical_multiplicity * e.real_multiplicity;
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<CriticalValue> critical_set(const SpectralReport& r, int l_max, double zero_tol, double merge_tol) {
    if (l_max < 1) throw DomainError("l_max must be >= 1");
    double scale = 1.0;
    for (const auto& e : r.entries) scale = std::max(scale, std::abs(e.mu));
    for (const auto& e : r.entries)
        if (std::abs(e.mu) <= zero_tol * scale)
            throw DomainError("condition (C) fails: slice eigenvalue " + fmt12(e.mu) + " for V" + e.tag() +
                              " is zero; the equilibrium orbit is not isolated");
    std::vector<CriticalValue> all;
    for (const auto& e : r.entries) {
        if (e.mu <= 0) continue;
        for (int l = 1; l <= l_max; ++l) {
            CriticalValue c;
            c.label = {e.label.j, e.label.variant, l};
            c.sign = e.sign;
            c.mu = e.mu;
            c.lambda = l / std::sqrt(e.mu);
            c.period = 2.0 * pi * c.lambda;
            all.push_back(std::move(c));
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const CriticalValue& a, const CriticalValue& b) {
        return a.lambda != b.lambda ? a.lambda < b.lambda : a.tag() < b.tag();
    });
    std::vector<CriticalValue> out;
    for (auto& c : all) {
        if (!out.empty() && std::abs(out.back().lambda - c.lambda) <= merge_tol * c.lambda) {
            out.back().coincident.push_back(c.tag());
            continue;
        }
        out.push_back(std::move(c));
    }
    return out;
}

const CriticalValue& find_crossing(const std::vector<CriticalValue>& lambda, const std::string& tag) {
    std::string t = tag;
    int sign = 0;
    if (t.size() >= 2 && t[t.size() - 2] == ',' && (t.back() == '+' || t.back() == '-')) {
        sign = t.back() == '+' ? 1 : -1;
        t.resize(t.size() - 2);
    }
    const IrrepLabel lab = parse_irrep_label(t);
    if (lab.l < 1) throw DomainError("crossing '" + tag + "' needs a Fourier mode, e.g. 2,1,+");
    const CriticalValue* hit = nullptr;
    int count = 0;
    for (const auto& c : lambda) {
        if (c.label != lab) continue;
        if (sign != 0 && c.sign != sign) continue;
        hit = &c;
        ++count;
    }
    if (!hit) {
        // Merged crossings survive only as a tag on the entry sharing their lambda.
        for (const auto& c : lambda)
            for (const auto& o : c.coincident)
                if (o == tag || (sign == 0 && (o == t + ",+" || o == t + ",-"))) {
                    if (hit != &c) ++count;
                    hit = &c;
                }
    }
    if (!hit) throw DomainError("crossing '" + tag + "' is not in the critical set");
    if (count > 1) throw DomainError("crossing '" + tag + "' is ambiguous; add ,+ or ,-");
    return *hit;
}

nlohmann::json to_json(const CriticalValue& c) {
    nlohmann::json j = {{"tag", c.tag()},          {"j", c.label.j},
                        {"variant", c.label.variant}, {"l", c.label.l},
                        {"sign", c.sign == 0 ? "" : (c.sign > 0 ? "+" : "-")},
                        {"mu", round12(c.mu)},     {"lambda", round12(c.lambda)},
                        {"limit_period", round12(c.period)}};
    if (!c.coincident.empty()) j["coincident"] = c.coincident;
    return j;
}

nlohmann::json to_json(const SpectralReport& r) {
    auto mat = [](const Eigen::MatrixXd& M) {
        nlohmann::json a = nlohmann::json::array();
        for (int i = 0; i < M.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int k = 0; k < M.cols(); ++k) row.push_back(round12(M(i, k)));
            a.push_back(row);
        }
        return a;
    };
    nlohmann::json j;
    j["n"] = r.n;
    j["r0"] = round12(r.r0);
    j["synthetic"] = r.synthetic;
    j["resolution"] = r.resolution;
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : r.blocks)
        blocks.push_back({{"component", b.name}, {"irrep_dim", b.irrep_dim}, {"closed_form", mat(b.closed)},
                          {"oracle", mat(b.oracle)}, {"relative_difference", round12(b.rel_diff)}});
    j["blocks"] = blocks;
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& e : r.entries)
        ev.push_back({{"tag", e.tag()}, {"mu", round12(e.mu)}, {"mu_oracle", round12(e.mu_oracle)},
                      {"isotypical_multiplicity", e.isotypical_multiplicity},
                      {"real_multiplicity", e.real_multiplicity}});
    j["eigenvalues"] = ev;
    nlohmann::json se = nlohmann::json::array();
    for (double x : r.slice_eigenvalues) se.push_back(round12(x));
    j["slice_eigenvalues"] = se;
    j["diagnostics"] = {{"max_cross_term", round12(r.max_cross_term)},
                        {"max_block_difference", round12(r.max_block_diff)},
                        {"null_residual", round12(r.null_residual)}};
    return j;
}

} // namespace equivibe
