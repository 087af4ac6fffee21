#include "equivibe/labels.hpp"

#include <charconv>

#include "equivibe/errors.hpp"

namespace equivibe {

std::string IrrepLabel::str() const {
    std::string s = std::to_string(j);
    if (variant) s += "'";
    if (l > 0) s += "," + std::to_string(l);
    return s;
}

IrrepLabel parse_irrep_label(const std::string& s) {
    IrrepLabel lab;
    const char* p = s.data();
    const char* end = s.data() + s.size();
    auto r = std::from_chars(p, end, lab.j);
    if (r.ec != std::errc{} || lab.j < 0) throw DomainError("bad irreducible label '" + s + "'");
    p = r.ptr;
    if (p < end && *p == '\'') {
        lab.variant = 1;
        ++p;
    }
    if (p < end && *p == ',') {
        r = std::from_chars(p + 1, end, lab.l);
        if (r.ec != std::errc{} || lab.l < 1) throw DomainError("bad Fourier mode in '" + s + "'");
        p = r.ptr;
    }
    if (p != end) throw DomainError("trailing characters in label '" + s + "'");
    return lab;
}

} // namespace equivibe
