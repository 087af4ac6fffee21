#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace equivibe {

using cplx = std::complex<double>;
// Particle positions u_0..u_{n-1} as points of the complex plane.
using Configuration = std::vector<cplx>;

struct PotentialParams {
    int n = 6;
    double A = 0.2;
    double B = 350.0;
    double sigma = 0.25;

    // Throws DomainError when n < 3 or B < 0.
    void validate() const;
};

// Bond potential U(t) = t - 2 sqrt(t) and pair potential
// W(t) = B/t^6 - A/t^3 + sigma/sqrt(t), t a squared distance.
namespace pot {
double U(double t);
double dU(double t);
double d2U(double t);
double W(double t, const PotentialParams& p);
double dW(double t, const PotentialParams& p);
double d2W(double t, const PotentialParams& p);
} // namespace pot

double min_pair_distance(const Configuration& u);

// Flattened layout (x0, y0, x1, y1, ...).
Eigen::VectorXd to_vector(const Configuration& u);
Configuration from_vector(const Eigen::VectorXd& v);

double potential_energy(const Configuration& u, const PotentialParams& p);
Eigen::VectorXd gradient(const Configuration& u, const PotentialParams& p);
Eigen::MatrixXd hessian(const Configuration& u, const PotentialParams& p);

// Central finite differences, used as oracles.
Eigen::VectorXd gradient_fd(const Configuration& u, const PotentialParams& p, double h = 1e-6);
Eigen::MatrixXd hessian_fd(const Configuration& u, const PotentialParams& p, double h = 1e-6);

// Energy restricted to regular polygons of radius t.
double phi(double t, const PotentialParams& p);
double dphi(double t, const PotentialParams& p);
double d2phi(double t, const PotentialParams& p);

struct Equilibrium {
    double r0 = 0.0;
    Configuration u0;
    double a = 0.0;           // 4 sin^2(pi/n)
    Eigen::MatrixXd ajk;      // 4 sin^2((k-j) pi/n)
    double phi_min = 0.0;
    double dphi_r0 = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
};

struct EquilibriumOptions {
    double lo = 1e-3;
    double hi = 0.0;          // 0 means 10 n
    double tol = 1e-10;
    int max_iter = 200;
};

Equilibrium find_equilibrium(const PotentialParams& p, const EquilibriumOptions& opt = {});

// Regular polygon r * gamma^k.
Configuration ring_configuration(int n, double r);

} // namespace equivibe
