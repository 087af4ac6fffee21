#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "equivibe/burnside.hpp"
#include "equivibe/labels.hpp"
#include "equivibe/spectrum.hpp"

namespace equivibe {

// Shared ring over burnside_universe(n, ls); cached per (n, sorted ls).
std::shared_ptr<const BurnsideRing> burnside_ring(int n, std::vector<int> ls);

// dim V^L for the representation named by the label (plain or folded).
int fixed_dim(const Lattice& lat, int L, const IrrepLabel& label);

// Degree of -Id on the unit ball of a plain D_n irreducible (l = 0).
BurnsideElement basic_degree(const BurnsideRing& ring, const IrrepLabel& label);
// Degree of -Id on V_j folded with the Fourier mode l >= 1.
BurnsideElement twisted_basic_degree(const BurnsideRing& ring, const IrrepLabel& label);
// Dispatches on label.l.
BurnsideElement degree_of(const BurnsideRing& ring, const IrrepLabel& label);

struct NegativeEigenvalue {
    double mu = 0.0;
    std::vector<std::pair<IrrepLabel, int>> multiplicities;
};

// Product over negative eigenvalues of degree_of(label)^multiplicity.
BurnsideElement linear_gradient_degree(const BurnsideRing& ring, const std::vector<NegativeEigenvalue>& negative);

enum class OmegaMode { Reduced, Literal };
OmegaMode parse_omega_mode(const std::string& s);
const char* to_string(OmegaMode m);

struct OmegaInvariant {
    CriticalValue crossing;
    OmegaMode mode = OmegaMode::Reduced;
    std::shared_ptr<const BurnsideRing> ring;
    std::vector<IrrepLabel> crossed;   // folded labels already crossed below lambda
    std::vector<IrrepLabel> constant;  // plain factors (literal mode only)
    BurnsideElement value;
    std::vector<int> maximal_orbit_types;

    int predicted_branches() const { return static_cast<int>(maximal_orbit_types.size()); }
};

// reduced: prod_{crossed (j',l')} Deg_{W_{j',l'}} * (Deg_{W_{j,l}} - (G)).
// literal: additionally multiplies Deg_{V_j} for every positive slice eigenvalue.
// Throws DomainError when the crossing is not isolated (another critical
// value within sep_tol relative) or when condition (C) fails.
OmegaInvariant omega_invariant(const SpectralReport& spectrum, const CriticalValue& crossing,
                               OmegaMode mode = OmegaMode::Reduced, double sep_tol = 1e-9);

// Classes with nonzero coefficient that are maximal under (H) <= (K).
std::vector<int> maximal_orbit_types(const Lattice& lat, const BurnsideElement& x);

nlohmann::json to_json(const OmegaInvariant& w);

} // namespace equivibe
