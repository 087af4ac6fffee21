#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "equivibe/labels.hpp"
#include "equivibe/model.hpp"

namespace equivibe {

// Pair coefficients at the equilibrium radius, indexed by (j, k):
//   v  = U'(a_jk r0^2)          (bonds only, zero elsewhere)
//   u  = 2 U''(a_jk r0^2) sin^2(pi (j-k)/n)
//   vw = W'(a_jk r0^2)
//   uw = 2 W''(a_jk r0^2) sin^2(pi (j-k)/n)
struct CoefficientTable {
    int n = 0;
    double r0 = 0.0;
    Eigen::MatrixXd v, u, vw, uw;

    // Rotating-frame Fourier sums. With f = W (+ U on bonds) and t_e the
    // squared distance at offset e:
    //   A(m) = 4 sum_e sin^2(pi e (m+1)/n) (f'_e + t_e f''_e)
    //   B(m) = 4 sum_e t_e f''_e sin(pi e (1+m)/n) sin(pi e (1-m)/n)
    double A(int m) const;
    double B(int m) const;
};

CoefficientTable coefficient_table(const Equilibrium& eq, const PotentialParams& p);

struct SpectralBlock {
    int j = 0;
    int variant = 0;
    std::string name;          // "V0", "V2", "V3'", ...
    int irrep_dim = 1;         // real dimension of the D_n irreducible
    Eigen::MatrixXd closed;    // 1x1 or 2x2 from the Fourier sums
    Eigen::MatrixXd oracle;    // same coordinates, projected dense Hessian
    Eigen::MatrixXd basis;     // 2n x size, one column per block coordinate
    Eigen::MatrixXd full;      // 2n x (size * irrep_dim): every copy of the irreducible
    double rel_diff = 0.0;     // max entrywise |closed - oracle| / max|oracle|
};

struct SpectralEntry {
    IrrepLabel label;          // l = 0
    int sign = 0;              // +1 / -1 for the two roots of a 2x2 block
    double mu = 0.0;           // closed form
    double mu_oracle = 0.0;
    int isotypical_multiplicity = 1;
    int real_multiplicity = 1;
    Eigen::VectorXd eigenvector;  // unit vector in R^{2n} (empty when synthesised)
    Eigen::MatrixXd eigenspace;   // orthonormal, 2n x real_multiplicity

    std::string tag() const;   // "0", "1", "2+", "2-", "3", "3'"
};

struct SpectralReport {
    int n = 0;
    double r0 = 0.0;
    std::vector<SpectralBlock> blocks;
    std::vector<SpectralEntry> entries;      // ascending in mu
    std::vector<double> slice_eigenvalues;   // dense oracle on the slice, with repetition
    double max_cross_term = 0.0;             // between distinct irreducible blocks
    double max_block_diff = 0.0;
    double null_residual = 0.0;              // |H N| over translations and rotation
    std::string resolution;                  // how the closed form is assembled
    bool synthetic = false;                  // built from given eigenvalues
};

// Closed-form blocks plus the projection oracle. Throws DomainError with a
// symmetry-breaking message when cross terms exceed cross_tol.
SpectralReport isotypical_blocks(const Equilibrium& eq, const PotentialParams& p, double cross_tol = 1e-6);

// Report carrying only labelled eigenvalues (no blocks), e.g. to evaluate
// invariants on a published spectrum.
SpectralReport spectral_report_from_eigenvalues(int n, const std::vector<SpectralEntry>& entries);

// Parses "0=-10.37,1=43.0,2+=7.6,3'=0.16": component tag, '=', value.
std::vector<SpectralEntry> parse_eigenvalue_list(const std::string& text);

struct EigenvalueRecord {
    double mu = 0.0;
    std::vector<std::pair<std::string, int>> components;  // (tag, isotypical multiplicity)
    int real_multiplicity = 0;
};

// Groups entries whose mu agree to rel_tol; coincidences across components
// are merged into one record.
std::vector<EigenvalueRecord> eigenvalues_with_multiplicity(const SpectralReport& r, double rel_tol = 1e-9);

struct CriticalValue {
    IrrepLabel label;   // l >= 1
    int sign = 0;
    double mu = 0.0;
    double lambda = 0.0;
    double period = 0.0;
    std::vector<std::string> coincident;  // other crossings at the same lambda

    std::string tag() const;  // "1,1", "2,1,+", "3',2"
};

// Lambda = l / sqrt(mu) for mu > 0 and 1 <= l <= l_max, ascending.
// Throws DomainError if some slice eigenvalue is zero (condition (C)).
std::vector<CriticalValue> critical_set(const SpectralReport& r, int l_max, double zero_tol = 1e-8,
                                        double merge_tol = 1e-12);

// Finds the crossing named by "j,l" or "j,l,+" (j may carry a prime).
const CriticalValue& find_crossing(const std::vector<CriticalValue>& lambda, const std::string& tag);

nlohmann::json to_json(const SpectralReport& r);
nlohmann::json to_json(const CriticalValue& c);

} // namespace equivibe
