#pragma once

#include <compare>
#include <string>

namespace equivibe {

// Irreducible label. l = 0 is a plain D_n irreducible V_j (constant modes);
// l >= 1 is V_j folded with the O(2) Fourier mode l.
//
// For even n the slice component at j = n/2 carries two one-dimensional
// irreducibles. variant 0 is the kappa-odd one (tangential alternation, the
// one the printed degree for j = n/2 refers to); variant 1 is kappa-even
// (radial alternation) and prints with a prime, e.g. "3'".
struct IrrepLabel {
    int j = 0;
    int variant = 0;
    int l = 0;

    std::string str() const;  // "2", "3'", "1,2", "3',1"
    auto operator<=>(const IrrepLabel&) const = default;
};

// Parses "j", "j'" or "j,l" / "j',l".
IrrepLabel parse_irrep_label(const std::string& s);

} // namespace equivibe
