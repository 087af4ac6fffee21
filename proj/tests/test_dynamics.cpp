#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "equivibe/degrees.hpp"
#include "equivibe/dynamics.hpp"
#include "equivibe/symmetry.hpp"

using namespace equivibe;

namespace {
constexpr double two_pi = 2 * std::numbers::pi;

struct Example {
    PotentialParams p;
    Equilibrium eq;
    SpectralReport spec;
    std::vector<CriticalValue> lam;
    Example() : eq(find_equilibrium(p)), spec(isotypical_blocks(eq, p)), lam(critical_set(spec, 1)) {}
};
const Example& example() {
    static const Example ex;
    return ex;
}
const SpectralEntry& entry(const std::string& tag) {
    for (const auto& e : example().spec.entries)
        if (e.tag() == tag) return e;
    throw std::runtime_error("missing " + tag);
}
} // namespace

TEST_CASE("the equilibrium is stationary") {
    const auto& ex = example();
    const auto u0 = to_vector(ex.eq.u0);
    const auto tr = integrate(u0, Eigen::VectorXd::Zero(12), 0.3, two_pi, ex.p);
    CHECK(tr.size() == static_cast<int>(std::ceil(two_pi / 1e-3 - 1e-9)) + 1);
    double dev = 0;
    for (const auto& q : tr.q) dev = std::max(dev, (q - u0).norm());
    CHECK(dev <= 1e-9);
    CHECK_FALSE(tr.collided);
}

TEST_CASE("linearised prediction: unit frequency at lambda = 1/sqrt(mu)") {
    const auto& ex = example();
    const auto& e = entry("1");
    const Eigen::VectorXd u0 = to_vector(ex.eq.u0) + 1e-4 * e.eigenvector;
    IntegrateOptions io;
    io.sample_every = 1000;
    const auto tr = integrate(u0, Eigen::VectorXd::Zero(12), 1 / std::sqrt(e.mu), two_pi, ex.p, io);
    CHECK((tr.q.back() - u0).norm() <= 1e-6);
    CHECK(tr.times.back() == doctest::Approx(two_pi).epsilon(1e-14));
}

TEST_CASE("energy drift over 100 periods") {
    const auto& ex = example();
    const auto& e = entry("1");
    const Eigen::VectorXd u0 = to_vector(ex.eq.u0) + 0.05 * ex.eq.r0 * e.eigenvector;
    IntegrateOptions io;
    io.sample_every = 500;
    const auto tr = integrate(u0, Eigen::VectorXd::Zero(12), 1 / std::sqrt(e.mu), 100 * two_pi, ex.p, io);
    CHECK(tr.max_relative_energy_drift() <= 1e-6);
}

TEST_CASE("time reversal with zero initial velocity") {
    const auto& ex = example();
    const Eigen::VectorXd u0 = to_vector(ex.eq.u0) + 0.05 * ex.eq.r0 * entry("2+").eigenvector;
    const double lam = 0.2;
    const auto fwd = integrate(u0, Eigen::VectorXd::Zero(12), lam, 3.0, ex.p);
    const auto back = integrate(fwd.q.back(), -fwd.v.back(), lam, 3.0, ex.p);
    CHECK((back.q.back() - u0).norm() <= 1e-8);
    CHECK(back.v.back().norm() <= 1e-8);
    // u(-t) = u(t): the backward flow from (u0, 0) mirrors the forward one.
    const auto rev = integrate(u0, Eigen::VectorXd::Zero(12), lam, 3.0, ex.p);
    for (int k = 0; k < fwd.size(); k += 250) CHECK((rev.q[k] - fwd.q[k]).norm() <= 1e-12);
}

TEST_CASE("the flow commutes with the symmetry group") {
    const auto& ex = example();
    const Eigen::VectorXd u0 = to_vector(ex.eq.u0) + 0.04 * ex.eq.r0 * entry("1").eigenspace.col(1);
    const Eigen::VectorXd v0 = 0.02 * entry("3").eigenvector;
    const GroupElement g{{2, true}, {0.7, true}};
    const auto M = action_matrix(g, 6);
    IntegrateOptions io;
    io.sample_every = 100;
    const auto a = integrate(u0, v0, 0.25, two_pi, ex.p, io);
    const auto b = integrate(M * u0, M * v0, 0.25, two_pi, ex.p, io);
    double dev = 0;
    for (int k = 0; k < a.size(); ++k) dev = std::max(dev, (M * a.q[k] - b.q[k]).norm());
    CHECK(dev <= 1e-9);
}

TEST_CASE("collisions truncate the trajectory") {
    PotentialParams p;
    p.A = p.B = p.sigma = 0;  // no repulsion: particles can meet
    auto u = ring_configuration(6, 1.0);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(12);
    v[0] = -5.0;  // particle 0 heads through the centre towards particle 3
    const auto tr = integrate(to_vector(u), v, 1.0, 2.0, p);
    CHECK(tr.collided);
    CHECK(tr.collision_time < 2.0);
    CHECK(tr.times.back() <= tr.collision_time + 1e-12);
}

TEST_CASE("symmetry deviation: trivial cases") {
    const auto& ex = example();
    const auto L = subgroup_classes(6);
    const auto tr = integrate(to_vector(ex.eq.u0), Eigen::VectorXd::Zero(12), 0.3, two_pi, ex.p);
    CHECK(symmetry_deviation(tr, *L, L->top()) <= 1e-10);
    const Eigen::VectorXd u0 = to_vector(ex.eq.u0) + 0.05 * entry("2+").eigenvector;
    const auto moving = integrate(u0, Eigen::VectorXd::Zero(12), 0.3, two_pi, ex.p);
    CHECK(symmetry_deviation(moving, *L, 1) == 0.0);
}

TEST_CASE("shooting from the (3,1) crossing finds the alternating pattern") {
    const auto& ex = example();
    const auto& c = find_crossing(ex.lam, "3,1");
    const auto orb = find_periodic_orbit(ex.eq, ex.p, ex.spec, c, 0.05 * ex.eq.r0);
    CHECK(orb.converged);
    CHECK(orb.residual <= 1e-8);
    CHECK(std::abs(orb.lambda - c.lambda) <= 0.02 * c.lambda);
    const auto U = burnside_universe(6, {1});
    CHECK(symmetry_deviation(orb.traj, *U, U->find(parse_class_name("D6^{D~3}x_{Z2}D2"))) <= 1e-5);
    CHECK(symmetry_deviation(orb.traj, *U, U->find(parse_class_name("D6^{D3}x_{Z2}D2"))) > 1e-3);
}

TEST_CASE("shooting from the (1,1) crossing") {
    const auto& ex = example();
    const auto& c = find_crossing(ex.lam, "1,1");
    const auto U = burnside_universe(6, {1});
    SUBCASE("rotating wave") {
        ShootingOptions o;
        o.rotating = true;
        const auto orb = find_periodic_orbit(ex.eq, ex.p, ex.spec, c, 0.05 * ex.eq.r0, o);
        CHECK(orb.converged);
        CHECK(std::abs(orb.lambda - c.lambda) <= 0.02 * c.lambda);
        CHECK(orb.v0.norm() > 0.01);
        CHECK(symmetry_deviation(orb.traj, *U, U->find(parse_class_name("D6^{Z1}x_{D6}D6"))) <= 1e-5);
    }
    SUBCASE("standing wave through a reflection axis") {
        ShootingOptions o;
        o.reflection = 6;
        const auto orb = find_periodic_orbit(ex.eq, ex.p, ex.spec, c, 0.05 * ex.eq.r0, o);
        CHECK(orb.converged);
        CHECK(orb.v0.norm() <= 1e-12);
        CHECK(symmetry_deviation(orb.traj, *U, U->find(parse_class_name("D2^{D1}x_{Z2}D2"))) <= 1e-5);
    }
    SUBCASE("small amplitude approaches the crossing") {
        const auto orb = find_periodic_orbit(ex.eq, ex.p, ex.spec, c, 1e-3 * ex.eq.r0);
        CHECK(orb.converged);
        CHECK(std::abs(orb.lambda - c.lambda) <= 0.01 * c.lambda);
    }
}

TEST_CASE("shooting reports non-convergence with a trace") {
    const auto& ex = example();
    ShootingOptions o;
    o.max_iter = 0;
    const auto orb = find_periodic_orbit(ex.eq, ex.p, ex.spec, find_crossing(ex.lam, "3,1"), 0.05 * ex.eq.r0, o);
    CHECK_FALSE(orb.converged);
    CHECK_FALSE(orb.trace.empty());
    CHECK(orb.residual > 1e-8);
}

TEST_CASE("CSV export") {
    const auto& ex = example();
    IntegrateOptions io;
    io.sample_every = 1000;
    const auto tr = integrate(to_vector(ex.eq.u0), Eigen::VectorXd::Zero(12), 0.3, two_pi, ex.p, io);
    const auto path = std::filesystem::temp_directory_path() / "equivibe_test_traj.csv";
    write_csv(tr, path.string());
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header.rfind("t,x_0,y_0", 0) == 0);
    CHECK(header.substr(header.size() - 2) == ",E");
    int rows = 0;
    for (std::string line; std::getline(f, line);) ++rows;
    CHECK(rows == tr.size());
    CHECK(trajectory_svg(tr, ex.eq.u0).find("<svg") != std::string::npos);
    std::filesystem::remove(path);
}
