#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "equivibe/lattice.hpp"
#include "equivibe/model.hpp"
#include "equivibe/spectrum.hpp"

namespace equivibe {

// Samples of u'' = -lambda^2 grad V(u) on a uniform grid. Positions and
// velocities use the flattened (x0, y0, x1, y1, ...) layout.
struct Trajectory {
    int n = 0;
    double lambda = 0.0;
    double dt = 0.0;                 // integrator step
    std::vector<double> times;
    std::vector<Eigen::VectorXd> q, v;
    std::vector<double> energy;      // |v|^2 / 2 + lambda^2 V
    bool collided = false;
    double collision_time = 0.0;
    std::string seed;                // e.g. "3,1"
    double amplitude = 0.0;

    double max_relative_energy_drift() const;
    int size() const { return static_cast<int>(times.size()); }
};

struct IntegrateOptions {
    double dt = 1e-3;
    int sample_every = 1;            // keep every k-th step (the last step is always kept)
    double collision_factor = 1e-6;  // guard: min distance < factor * length_scale
    double length_scale = 0.0;       // 0: radius of the initial configuration
};

// Velocity Verlet. The step is shrunk so that T is hit exactly.
Trajectory integrate(const Eigen::VectorXd& u0, const Eigen::VectorXd& v0, double lambda, double T,
                     const PotentialParams& p, const IntegrateOptions& opt = {});

struct ShootingOptions {
    double dt = 1e-3;
    int max_iter = 40;
    double tol = 1e-8;               // on |(u(2pi) - u0, v(2pi))|
    bool symmetrize = true;          // project the seed onto the fixed space of a reflection
    int reflection = -1;             // D_n element index used; -1 picks the first that works
    int sign = 1;                    // orientation of the seed along the eigenvector
    bool free_velocity = false;      // v0 free apart from the phase condition <v0, seed> = 0
    bool rotating = false;           // seed e cos t + e' sin t from a 2-d eigenspace (frees v0)
};

struct PeriodicOrbit {
    Trajectory traj;                 // one period, sampled every step
    Eigen::VectorXd u0, v0;
    double lambda = 0.0;
    double lambda_seed = 0.0;
    double amplitude = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;       // residual per iteration
    std::string seed;
};

// Shooting on (u0, v0, lambda): the amplitude of u0 - u° along the seed is
// fixed to eps, centre of mass and rotation gauge are pinned, <v0, seed> = 0
// fixes the phase and v0 = 0 unless freed. Gauss-Newton with the exact
// tangent map of the discrete flow.
// `modes` spans the eigenspace to seed from (one column suffices for a
// one-dimensional irreducible).
PeriodicOrbit find_periodic_orbit(const Equilibrium& eq, const PotentialParams& p, const Eigen::MatrixXd& modes,
                                  double lambda_seed, double eps, const ShootingOptions& opt = {},
                                  const std::string& seed_tag = "");

// Seeds from the eigenvector of the report entry that produced the crossing.
PeriodicOrbit find_periodic_orbit(const Equilibrium& eq, const PotentialParams& p, const SpectralReport& r,
                                  const CriticalValue& crossing, double eps, const ShootingOptions& opt = {});

// Spatio-temporal symmetry residual of a one-period trajectory with respect to
// a class of D_n x O(2): the O(2) factor acts on time (rotation = shift,
// reflection = reversal), D_n acts through its diagonal copy. Minimised over
// conjugates of the class representative inside the lattice frame.
double symmetry_deviation(const Trajectory& traj, const Lattice& lat, int class_id);

void write_csv(const Trajectory& traj, const std::string& path);
std::string trajectory_svg(const Trajectory& traj, const Configuration& reference);
nlohmann::json to_json(const PeriodicOrbit& orbit);

} // namespace equivibe
