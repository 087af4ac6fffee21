#include "equivibe/degrees.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "equivibe/errors.hpp"
#include "equivibe/io.hpp"

namespace equivibe {

namespace {
constexpr double pi = std::numbers::pi;

// Character of the D_n irreducible on xi^a kappa^f.
double dn_character(const IrrepLabel& lab, int n, int a, int f) {
    if (lab.j == 0) return 1.0;
    if (2 * lab.j == n) {
        const int s = lab.variant ? a : a + f;
        return (s % 2) ? -1.0 : 1.0;
    }
    return f ? 0.0 : 2.0 * std::cos(2.0 * pi * lab.j * a / n);
}

void check_label(const IrrepLabel& lab, int n) {
    if (lab.j < 0 || 2 * lab.j > n) throw DomainError("irreducible index out of range: " + lab.str());
    if (lab.variant && 2 * lab.j != n) throw DomainError("primed label only exists for j = n/2: " + lab.str());
    if (lab.l < 0) throw DomainError("negative Fourier mode: " + lab.str());
}
} // namespace

std::shared_ptr<const BurnsideRing> burnside_ring(int n, std::vector<int> ls) {
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    if (ls.empty()) ls.push_back(1);
    static std::mutex mu;
    static std::map<std::pair<int, std::vector<int>>, std::shared_ptr<const BurnsideRing>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[{n, ls}];
    if (!slot) slot = std::make_shared<const BurnsideRing>(burnside_universe(n, ls));
    return slot;
}

int fixed_dim(const Lattice& lat, int L, const IrrepLabel& lab) {
    const int n = lat.n();
    check_label(lab, n);
    const auto& S = lat.cls(L);
    double sum = 0.0;
    if (S.infinite_K()) {
        // SO(2) rotates U_l without fixed vectors.
        if (lab.l > 0) return 0;
        for (int x : S.elems) {
            const int d = x / 2;
            sum += dn_character(lab, n, d % n, d / n);
        }
    } else {
        for (int x : S.elems) {
            int d, p, f;
            lat.decode(x, d, p, f);
            double ch = dn_character(lab, n, d % n, d / n);
            if (lab.l > 0) ch *= f ? 0.0 : 2.0 * std::cos(2.0 * pi * lab.l * p / lat.Q());
            sum += ch;
        }
    }
    const double avg = sum / static_cast<double>(S.elems.size());
    const long r = std::lround(avg);
    if (std::abs(avg - r) > 1e-9 || r < 0)
        throw ConsistencyError("non-integral fixed-point dimension " + fmt12(avg) + " on " + S.name);
    return static_cast<int>(r);
}

namespace {
BurnsideElement degree_impl(const BurnsideRing& ring, const IrrepLabel& lab) {
    static std::mutex mu;
    static std::map<std::pair<const BurnsideRing*, IrrepLabel>, BurnsideElement> cache;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find({&ring, lab});
        if (it != cache.end()) return it->second;
    }
    const auto& lat = ring.lattice();
    auto deg = ring.from_marks([&](int L) -> int64_t { return fixed_dim(lat, L, lab) % 2 ? -1 : 1; });
    std::lock_guard<std::mutex> lk(mu);
    cache[{&ring, lab}] = deg;
    return deg;
}
} // namespace

BurnsideElement basic_degree(const BurnsideRing& ring, const IrrepLabel& lab) {
    if (lab.l != 0) throw DomainError("basic_degree expects a plain label, got " + lab.str());
    return degree_impl(ring, lab);
}

BurnsideElement twisted_basic_degree(const BurnsideRing& ring, const IrrepLabel& lab) {
    if (lab.l < 1) throw DomainError("twisted_basic_degree expects l >= 1, got " + lab.str());
    const auto& spec = ring.lattice().spec();
    const bool covered = std::any_of(spec.dihedral_c.begin(), spec.dihedral_c.end(),
                                     [&](int c) { return c == lab.l * spec.n; });
    if (!covered) throw DomainError("ring universe does not cover Fourier mode " + std::to_string(lab.l));
    return degree_impl(ring, lab);
}

BurnsideElement degree_of(const BurnsideRing& ring, const IrrepLabel& lab) {
    return lab.l == 0 ? basic_degree(ring, lab) : twisted_basic_degree(ring, lab);
}

BurnsideElement linear_gradient_degree(const BurnsideRing& ring, const std::vector<NegativeEigenvalue>& negative) {
    BurnsideElement out = ring.unit();
    for (const auto& e : negative)
        for (const auto& [lab, m] : e.multiplicities) {
            if (m < 0) throw DomainError("negative multiplicity");
            const auto d = degree_of(ring, lab);
            // Deg^2 = (G), so only the parity matters; multiply anyway for odd m.
            if (m % 2) out = ring.multiply(out, d);
        }
    return out;
}

OmegaMode parse_omega_mode(const std::string& s) {
    if (s == "reduced" || s == "paper_style") return OmegaMode::Reduced;  // second spelling kept for old configs
    if (s == "literal") return OmegaMode::Literal;
    throw ConfigError("unknown omega mode '" + s + "' (reduced|literal)");
}

const char* to_string(OmegaMode m) { return m == OmegaMode::Reduced ? "reduced" : "literal"; }

std::vector<int> maximal_orbit_types(const Lattice& lat, const BurnsideElement& x) {
    std::vector<int> ids;
    for (auto& [id, v] : x.terms) ids.push_back(id);
    std::vector<int> out;
    for (int a : ids) {
        bool dominated = false;
        for (int b : ids)
            if (b != a && lat.leq(a, b)) { dominated = true; break; }
        if (!dominated) out.push_back(a);
    }
    return out;
}

OmegaInvariant omega_invariant(const SpectralReport& spec, const CriticalValue& crossing, OmegaMode mode,
                               double sep_tol) {
    const int n = spec.n;
    if (crossing.label.l < 1 || crossing.lambda <= 0) throw DomainError("invalid crossing " + crossing.tag());
    double scale = 1.0;
    for (const auto& e : spec.entries) scale = std::max(scale, std::abs(e.mu));
    for (const auto& e : spec.entries)
        if (std::abs(e.mu) <= 1e-8 * scale)
            throw DomainError("condition (C) fails: zero slice eigenvalue for V" + e.tag());

    const double lam = crossing.lambda;
    bool found = false;
    OmegaInvariant w;
    w.crossing = crossing;
    w.mode = mode;
    std::vector<int> ls{crossing.label.l};
    for (const auto& e : spec.entries) {
        if (e.mu <= 0) continue;
        const double x = lam * std::sqrt(e.mu);  // crossed l' satisfy l' < x
        for (int l = 1; l <= static_cast<int>(std::ceil(x)) + 1; ++l) {
            const bool self = e.label.j == crossing.label.j && e.label.variant == crossing.label.variant &&
                              e.sign == crossing.sign && l == crossing.label.l &&
                              std::abs(e.mu - crossing.mu) <= 1e-12 * std::abs(e.mu);
            if (self) {
                found = true;
                continue;
            }
            const double lam_l = l / std::sqrt(e.mu);
            if (std::abs(lam_l - lam) <= sep_tol * lam)
                throw DomainError("crossing " + crossing.tag() + " is not isolated: V" + e.tag() + " mode " +
                                  std::to_string(l) + " gives the same lambda");
            if (lam_l < lam) {
                w.crossed.push_back({e.label.j, e.label.variant, l});
                ls.push_back(l);
            }
        }
    }
    if (!found) throw DomainError("crossing " + crossing.tag() + " does not belong to this spectrum");
    if (mode == OmegaMode::Literal)
        for (const auto& e : spec.entries)
            if (e.mu > 0)
                for (int k = 0; k < e.isotypical_multiplicity; ++k) w.constant.push_back(e.label);

    w.ring = burnside_ring(n, ls);
    const auto& R = *w.ring;
    BurnsideElement acc = R.unit();
    for (const auto& lab : w.constant) acc = R.multiply(acc, basic_degree(R, lab));
    for (const auto& lab : w.crossed) acc = R.multiply(acc, twisted_basic_degree(R, lab));
    const IrrepLabel own{crossing.label.j, crossing.label.variant, crossing.label.l};
    acc = R.multiply(acc, twisted_basic_degree(R, own) - R.unit());
    w.value = acc;
    w.maximal_orbit_types = maximal_orbit_types(R.lattice(), w.value);
    return w;
}

nlohmann::json to_json(const OmegaInvariant& w) {
    nlohmann::json j;
    j["crossing"] = to_json(w.crossing);
    j["mode"] = to_string(w.mode);
    nlohmann::json f = nlohmann::json::array();
    for (const auto& l : w.constant) f.push_back("Deg V" + l.str());
    for (const auto& l : w.crossed) f.push_back("Deg W" + l.str());
    f.push_back("(Deg W" + IrrepLabel{w.crossing.label.j, w.crossing.label.variant, w.crossing.label.l}.str() +
                " - (G))");
    j["factors"] = f;
    j["expansion"] = w.ring->to_string(w.value);
    j["terms"] = w.ring->to_json(w.value);
    nlohmann::json m = nlohmann::json::array();
    for (int id : w.maximal_orbit_types) m.push_back(w.ring->lattice().cls(id).name);
    j["maximal_orbit_types"] = m;
    j["predicted_branches"] = w.predicted_branches();
    return j;
}

} // namespace equivibe
