#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "equivibe/kernels.hpp"
#include "equivibe/model.hpp"
#include "test_util.hpp"

using namespace equivibe;
namespace k = equivibe::kernels;

namespace {
struct Split {
    std::vector<double> x, y;
};
Split split(const Configuration& u) {
    Split s;
    for (auto z : u) {
        s.x.push_back(z.real());
        s.y.push_back(z.imag());
    }
    return s;
}
} // namespace

TEST_CASE("scalar pair kernel reproduces the model energy and gradient") {
    std::mt19937_64 rng(11);
    for (int n = 3; n <= 12; ++n) {
        auto in = testutil::random_instance(rng, n);
        auto s = split(in.u);
        std::vector<double> gx(n), gy(n);
        const double E = k::energy_gradient_scalar(s.x.data(), s.y.data(), n, {in.p.A, in.p.B, in.p.sigma},
                                                   gx.data(), gy.data());
        CHECK(E == doctest::Approx(potential_energy(in.u, in.p)).epsilon(1e-12));
        const auto g = gradient(in.u, in.p);
        for (int i = 0; i < n; ++i) {
            CHECK(gx[i] == doctest::Approx(g[2 * i]).epsilon(1e-10).scale(g.norm()));
            CHECK(gy[i] == doctest::Approx(g[2 * i + 1]).epsilon(1e-10).scale(g.norm()));
        }
    }
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
    if (!k::avx2_available()) {
        MESSAGE("AVX2 not available on this machine; vector path not exercised");
        return;
    }
    std::mt19937_64 rng(12);
    for (int n = 3; n <= 40; ++n) {
        auto in = testutil::random_instance(rng, n);
        auto s = split(in.u);
        const k::PairCoeffs c{in.p.A, in.p.B, in.p.sigma};
        std::vector<double> ax(n), ay(n), bx(n), by(n);
        const double Es = k::energy_gradient_scalar(s.x.data(), s.y.data(), n, c, ax.data(), ay.data());
        const double Ev = k::energy_gradient_avx2(s.x.data(), s.y.data(), n, c, bx.data(), by.data());
        CHECK(Ev == doctest::Approx(Es).epsilon(1e-13));
        double gmax = 0, diff = 0;
        for (int i = 0; i < n; ++i) {
            gmax = std::max({gmax, std::abs(ax[i]), std::abs(ay[i])});
            diff = std::max({diff, std::abs(ax[i] - bx[i]), std::abs(ay[i] - by[i])});
        }
        CHECK(diff <= 1e-13 * std::max(1.0, gmax));
        // Energy only.
        CHECK(k::energy_gradient_avx2(s.x.data(), s.y.data(), n, c, nullptr, nullptr) ==
              doctest::Approx(Es).epsilon(1e-13));
    }
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int m : {0, 1, 3, 4, 5, 7, 8, 17, 64, 101}) {
        std::vector<double> x(m), y0(m);
        for (int i = 0; i < m; ++i) {
            x[i] = U(rng);
            y0[i] = U(rng);
        }
        auto ys = y0, yv = y0;
        k::axpy_scalar(0.37, x.data(), ys.data(), m);
        k::axpy_avx2(0.37, x.data(), yv.data(), m);
        for (int i = 0; i < m; ++i) CHECK(yv[i] == doctest::Approx(ys[i]).epsilon(1e-15));
    }
}

TEST_CASE("dispatch can be pinned and reset") {
    k::force_isa(k::Isa::Scalar);
    CHECK(k::active_isa() == k::Isa::Scalar);
    std::vector<double> x{1, 2, 3}, y{1, 1, 1};
    k::axpy(2.0, x.data(), y.data(), 3);
    CHECK(y[2] == 7.0);
    k::force_isa(k::Isa::Avx2);
    CHECK(k::active_isa() == (k::avx2_available() ? k::Isa::Avx2 : k::Isa::Scalar));
    k::reset_isa();
    CHECK(std::string(k::isa_name(k::active_isa())).size() > 0);
}
