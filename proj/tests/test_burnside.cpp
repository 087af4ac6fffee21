#include <doctest.h>

#include <random>
#include <vector>

#include "equivibe/burnside.hpp"
#include "equivibe/errors.hpp"
#include "equivibe/lattice.hpp"

using namespace equivibe;

namespace {
std::vector<int> finite_ids(const Lattice& L) {
    std::vector<int> ids;
    for (const auto& c : L.classes())
        if (c.finite_weyl()) ids.push_back(c.id);
    return ids;
}

// Direct product of two multiplication tables.
std::vector<std::vector<int>> product_table(const std::vector<std::vector<int>>& a,
                                            const std::vector<std::vector<int>>& b) {
    const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    std::vector<std::vector<int>> t(na * nb, std::vector<int>(na * nb));
    for (int x = 0; x < na * nb; ++x)
        for (int y = 0; y < na * nb; ++y) t[x][y] = a[x % na][y % na] + na * b[x / na][y / na];
    return t;
}
} // namespace

TEST_CASE("A(D2): (D1)^2 = 2(D1) by orbit counting and by marks") {
    FiniteGroupBurnside G(dihedral_table(2));
    CHECK(G.order() == 4);
    CHECK(G.num_classes() == 5);
    const int d1 = G.class_of({0, 2});  // {1, s}
    const auto p = G.product_by_orbits(d1, d1);
    CHECK(p.size() == 1);
    CHECK(p.at(d1) == 2);
    CHECK(G.product_by_marks(d1, d1) == p);
}

TEST_CASE("orbit counting and mark inversion agree on small groups") {
    for (const auto& table : {dihedral_table(3), dihedral_table(4), dihedral_table(6),
                              product_table(dihedral_table(3), dihedral_table(2))}) {
        FiniteGroupBurnside G(table);
        for (int h = 0; h < G.num_classes(); ++h)
            for (int k = h; k < G.num_classes(); ++k) CHECK(G.product_by_orbits(h, k) == G.product_by_marks(h, k));
    }
}

TEST_CASE("ring axioms on 200 random generator triples") {
    BurnsideRing R(burnside_universe(6, {1}));
    const auto ids = finite_ids(R.lattice());
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    const auto one = R.unit();
    for (int t = 0; t < 200; ++t) {
        const auto a = R.generator(ids[pick(rng)]), b = R.generator(ids[pick(rng)]), c = R.generator(ids[pick(rng)]);
        const auto ab = R.multiply(a, b);
        CHECK(ab == R.multiply(b, a));
        CHECK(R.multiply(ab, c) == R.multiply(a, R.multiply(b, c)));
        CHECK(R.multiply(a, one) == a);
        CHECK(R.multiply(a, b + c) == ab + R.multiply(a, c));
        R.validate(ab);
    }
}

TEST_CASE("recurrence products equal mark products; divisions are integral") {
    BurnsideRing R(burnside_universe(6, {1, 2}));
    const auto ids = finite_ids(R.lattice());
    int checked = 0;
    for (std::size_t i = 0; i < ids.size(); i += 5)
        for (std::size_t j = i; j < ids.size(); j += 9, ++checked)
            CHECK(R.multiply_generators(ids[i], ids[j]) == R.multiply(R.generator(ids[i]), R.generator(ids[j])));
    CHECK(checked > 100);
}

TEST_CASE("marks: the unit has mark 1 everywhere, generators vanish off their lower set") {
    BurnsideRing R(burnside_universe(6, {1}));
    const auto& L = R.lattice();
    const auto ids = finite_ids(L);
    for (int a : ids) {
        CHECK(R.mark(a, R.unit()) == 1);
        for (int b : ids)
            if (!L.leq(a, b)) CHECK(L.mark(a, b) == 0);
        CHECK(L.mark(a, a) == L.cls(a).weyl);
    }
}

TEST_CASE("expansion parsing round-trips") {
    BurnsideRing R(burnside_universe(6, {1}));
    const auto x = R.parse("-(D2^{Z2}x_{Z2}D2) + 2(D2^{Z2}x_{D1}D1) + (G)");
    CHECK(x.terms.size() == 3);
    CHECK(R.parse(R.to_string(x)) == x);
    CHECK_THROWS(R.parse("(no such class)"));
    BurnsideRing T(subgroup_classes(6));
    CHECK_THROWS_AS(T.generator(1), DomainError);  // Z1 x Zl: infinite Weyl group
}
