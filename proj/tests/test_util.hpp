#pragma once

#include <random>

#include "equivibe/model.hpp"

namespace testutil {

// Random admissible parameters and a perturbed regular polygon, far enough
// from collisions for finite differences.
struct Instance {
    equivibe::PotentialParams p;
    equivibe::Configuration u;
};

inline Instance random_instance(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> uA(0.0, 0.5), uB(50.0, 500.0), us(0.0, 0.5), jit(-0.08, 0.08);
    Instance in;
    in.p.n = n;
    in.p.A = uA(rng);
    in.p.B = uB(rng);
    in.p.sigma = us(rng);
    const double r = 1.2 + 0.1 * n;
    in.u = equivibe::ring_configuration(n, r);
    for (auto& z : in.u) z += equivibe::cplx(jit(rng), jit(rng)) * r;
    return in;
}

} // namespace testutil
