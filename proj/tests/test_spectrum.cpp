#include <doctest.h>

#include <cmath>

#include "equivibe/errors.hpp"
#include "equivibe/spectrum.hpp"

using namespace equivibe;

namespace {
const SpectralEntry& entry(const SpectralReport& r, const std::string& tag) {
    for (const auto& e : r.entries)
        if (e.tag() == tag) return e;
    FAIL("no entry " << tag);
    return r.entries.front();
}
} // namespace

TEST_CASE("closed-form blocks match the projection oracle for n = 3..8") {
    for (int n = 3; n <= 8; ++n) {
        PotentialParams p;
        p.n = n;
        const auto eq = find_equilibrium(p);
        const auto r = isotypical_blocks(eq, p);
        for (const auto& b : r.blocks) CHECK(b.rel_diff <= 1e-8);
        // Slice spectrum with multiplicity equals the union of the blocks.
        int dim = 0;
        for (const auto& e : r.entries) dim += e.isotypical_multiplicity * e.real_multiplicity;
        CHECK(dim == 2 * n - 3);
        CHECK(static_cast<int>(r.slice_eigenvalues.size()) == 2 * n - 3);
        for (const auto& e : r.entries) CHECK(e.mu == doctest::Approx(e.mu_oracle).epsilon(1e-8));
    }
}

TEST_CASE("n = 6 example: component values") {
    PotentialParams p;
    const auto eq = find_equilibrium(p);
    const auto r = isotypical_blocks(eq, p);
    CHECK(r.entries.size() == 6);
    CHECK(entry(r, "2-").mu == doctest::Approx(0.0866873627).epsilon(1e-8));
    CHECK(entry(r, "3'").mu == doctest::Approx(0.161991625).epsilon(1e-8));
    CHECK(entry(r, "0").mu == doctest::Approx(13.0899264).epsilon(1e-8));
    CHECK(entry(r, "1").mu == doctest::Approx(19.5833880).epsilon(1e-8));
    CHECK(entry(r, "2+").mu == doctest::Approx(32.5514660).epsilon(1e-8));
    CHECK(entry(r, "3").mu == doctest::Approx(39.0047844).epsilon(1e-8));
    // V_1 is one copy of a two-dimensional irreducible.
    CHECK(entry(r, "1").real_multiplicity == 2);
    CHECK(entry(r, "1").eigenspace.cols() == 2);
    const auto recs = eigenvalues_with_multiplicity(r);
    CHECK(recs.size() == 6);
}

TEST_CASE("coefficient table sums reproduce the blocks") {
    PotentialParams p;
    const auto eq = find_equilibrium(p);
    const auto t = coefficient_table(eq, p);
    const auto r = isotypical_blocks(eq, p);
    CHECK(t.A(1) == doctest::Approx(entry(r, "1").mu).epsilon(1e-10));
    CHECK(t.A(0) + t.B(0) == doctest::Approx(entry(r, "0").mu).epsilon(1e-10));
}

TEST_CASE("critical set: ordering, labels and condition (C)") {
    const auto r = spectral_report_from_eigenvalues(6, parse_eigenvalue_list("0=-2,1=4,2+=9,2-=1,3=16"));
    const auto lam = critical_set(r, 2);
    REQUIRE(lam.size() == 6);  // 1,1 meets 3,2 and 1,2 meets 2,1,-
    for (std::size_t i = 1; i < lam.size(); ++i) CHECK(lam[i - 1].lambda <= lam[i].lambda);
    CHECK(lam[0].tag() == "3,1");
    CHECK(lam[0].lambda == doctest::Approx(0.25));
    CHECK(lam[0].period == doctest::Approx(2 * M_PI * 0.25));
    CHECK(find_crossing(lam, "2,1,-").lambda == doctest::Approx(1.0));
    CHECK(find_crossing(lam, "1,2").lambda == doctest::Approx(1.0));
    CHECK_FALSE(find_crossing(lam, "1,2").coincident.empty());
    CHECK_THROWS_AS(find_crossing(lam, "0,1"), DomainError);

    const auto z = spectral_report_from_eigenvalues(6, parse_eigenvalue_list("0=0,1=4"));
    CHECK_THROWS_AS(critical_set(z, 1), DomainError);
}

TEST_CASE("eigenvalue list parsing") {
    const auto es = parse_eigenvalue_list("0=-10.5, 3'=0.25,2+=1e1");
    REQUIRE(es.size() == 3);
    CHECK(es[1].label.variant == 1);
    CHECK(es[2].sign == 1);
    CHECK(es[2].mu == 10.0);
    CHECK_THROWS_AS(parse_eigenvalue_list("1:4"), ConfigError);
    CHECK_THROWS_AS(parse_eigenvalue_list("1=abc"), ConfigError);
    CHECK_THROWS_AS(parse_eigenvalue_list(""), ConfigError);
}
