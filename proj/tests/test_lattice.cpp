#include <doctest.h>

#include <string>

#include "equivibe/burnside.hpp"
#include "equivibe/errors.hpp"
#include "equivibe/lattice.hpp"
#include "table1_data.hpp"

using namespace equivibe;

namespace {
std::string ascii(std::string s) {
    const std::string times = "×", tilde = "̃";
    for (auto p = s.find(times); p != std::string::npos; p = s.find(times)) s.replace(p, times.size(), "x");
    for (auto p = s.find(tilde); p != std::string::npos; p = s.find(tilde)) s.replace(p, tilde.size(), "~");
    return s;
}
} // namespace

TEST_CASE("subgroup_classes(6) reproduces the 101 classes with their Weyl orders") {
    const auto L = subgroup_classes(6);
    REQUIRE(L->size() == 101);
    int infinite = 0;
    for (const auto& row : kTable1) {
        const auto& c = L->cls(row.id);
        INFO("class " << row.id);
        CHECK(ascii(c.generic_name) == row.name);
        CHECK(c.weyl == row.weyl);
        infinite += row.weyl == 0;
    }
    CHECK(infinite == 25);
}

TEST_CASE("lattice lookups and partial order") {
    const auto L = subgroup_classes(6);
    const int top = L->top();
    CHECK(ascii(L->cls(top).name) == "D6xO(2)");
    const int a = L->find(parse_class_name("D6^{D~3}x_{Z2}D2"));
    const int b = L->find(parse_class_name("D6xD1"));
    CHECK(L->leq(a, top));
    CHECK(L->leq(b, top));
    CHECK_FALSE(L->leq(top, a));
    CHECK(L->leq(L->find(parse_class_name("Z1xD1")), b));
    for (int id : L->topdown()) CHECK(L->cls(id).finite_weyl());
}

TEST_CASE("class names parse in both spellings") {
    const auto q1 = parse_class_name("D2^{Z1}_{D~1}x_{D2}D2");
    const auto q2 = parse_class_name("D2^{Z1}_{D̃" "1}×_{D2}D2");
    const auto L = subgroup_classes(6);
    CHECK(L->find(q1) == L->find(q2));
    CHECK(q1.c == 2);
    CHECK(parse_class_name("D6xO(2)").kind == KKind::O2);
}

TEST_CASE("unsupported sizes are rejected") {
    CHECK_THROWS_AS(subgroup_classes(5), UnsupportedError);
    CHECK_THROWS_AS(burnside_universe(6, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}), UnsupportedError);
}
