#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "equivibe/errors.hpp"
#include "equivibe/model.hpp"
#include "equivibe/symmetry.hpp"
#include "test_util.hpp"

using namespace equivibe;

TEST_CASE("pair potentials match finite differences") {
    PotentialParams p;
    for (double t : {0.5, 1.0, 3.37, 10.0}) {
        const double h = 1e-6 * t;
        CHECK(pot::dU(t) == doctest::Approx((pot::U(t + h) - pot::U(t - h)) / (2 * h)).epsilon(1e-7));
        CHECK(pot::d2U(t) == doctest::Approx((pot::dU(t + h) - pot::dU(t - h)) / (2 * h)).epsilon(1e-7));
        CHECK(pot::dW(t, p) == doctest::Approx((pot::W(t + h, p) - pot::W(t - h, p)) / (2 * h)).epsilon(1e-6));
        CHECK(pot::d2W(t, p) == doctest::Approx((pot::dW(t + h, p) - pot::dW(t - h, p)) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("gradient and Hessian agree with finite differences on random instances") {
    std::mt19937_64 rng(20240601);
    int count = 0;
    for (int rep = 0; rep < 10; ++rep)
        for (int n = 3; n <= 8; ++n, ++count) {
            auto in = testutil::random_instance(rng, n);
            const auto g = gradient(in.u, in.p);
            const auto gf = gradient_fd(in.u, in.p);
            CHECK((g - gf).norm() <= 1e-6 * std::max(1.0, g.norm()));
            const auto H = hessian(in.u, in.p);
            const auto Hf = hessian_fd(in.u, in.p);
            CHECK((H - Hf).norm() <= 1e-6 * std::max(1.0, H.norm()));
            CHECK((H - H.transpose()).norm() <= 1e-12 * H.norm());
        }
    CHECK(count >= 50);
}

TEST_CASE("energy, gradient and Hessian are D_n x O(2) equivariant") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
    int count = 0;
    for (int rep = 0; rep < 10; ++rep)
        for (int n = 3; n <= 8; ++n, ++count) {
            auto in = testutil::random_instance(rng, n);
            const double V = potential_energy(in.u, in.p);
            const auto g = gradient(in.u, in.p);
            const auto H = hessian(in.u, in.p);
            std::uniform_int_distribution<int> ri(0, n - 1);
            for (int k = 0; k < 4; ++k) {
                GroupElement e{{ri(rng), k % 2 == 1}, {ang(rng), k >= 2}};
                const auto M = action_matrix(e, n);
                const auto gu = act(e, in.u);
                CHECK(std::abs(potential_energy(gu, in.p) - V) <= 1e-10 * std::max(1.0, std::abs(V)));
                CHECK((gradient(gu, in.p) - M * g).norm() <= 1e-10 * std::max(1.0, g.norm()));
                CHECK((hessian(gu, in.p) - M * H * M.transpose()).norm() <= 1e-10 * std::max(1.0, H.norm()));
                CHECK((M * M.transpose() - Eigen::MatrixXd::Identity(2 * n, 2 * n)).norm() <= 1e-12);
            }
        }
    CHECK(count >= 50);
}

TEST_CASE("equilibrium radius") {
    SUBCASE("harmonic ring without pair terms has unit nearest-neighbour spacing") {
        PotentialParams p;
        p.A = p.B = p.sigma = 0.0;
        for (int n = 3; n <= 8; ++n) {
            p.n = n;
            CHECK(find_equilibrium(p).r0 == doctest::Approx(0.5 / std::sin(M_PI / n)).epsilon(1e-9));
        }
    }
    SUBCASE("the example ring is a critical point with vanishing full gradient") {
        PotentialParams p;
        const auto eq = find_equilibrium(p);
        CHECK(eq.r0 == doctest::Approx(1.83655165009).epsilon(1e-10));
        CHECK(eq.grad_norm <= 1e-9);
        CHECK(gradient(eq.u0, p).norm() <= 1e-9);
        CHECK(std::abs(dphi(eq.r0, p)) <= 1e-10);
    }
    SUBCASE("invalid parameters") {
        PotentialParams p;
        p.n = 2;
        CHECK_THROWS_AS(find_equilibrium(p), DomainError);
        p.n = 6;
        p.B = -1;
        CHECK_THROWS_AS(find_equilibrium(p), DomainError);
    }
}
