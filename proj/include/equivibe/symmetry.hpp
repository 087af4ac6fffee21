#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "equivibe/model.hpp"

namespace equivibe {

// xi^rot kappa^refl in D_n. xi sends vertex k to k+1, kappa sends k to -k.
struct DihedralElement {
    int rot = 0;
    bool refl = false;
};

// Planar isometry z -> e^{i angle} z, or z -> e^{i angle} conj(z) when refl.
struct O2Element {
    double angle = 0.0;
    bool refl = false;
};

struct GroupElement {
    DihedralElement d;
    O2Element o;
};

DihedralElement compose(const DihedralElement& a, const DihedralElement& b, int n);
DihedralElement inverse(const DihedralElement& a, int n);
O2Element compose(const O2Element& a, const O2Element& b);
O2Element inverse(const O2Element& a);
GroupElement compose(const GroupElement& a, const GroupElement& b, int n);
GroupElement inverse(const GroupElement& a, int n);

cplx apply(const O2Element& o, cplx z);

// The planar isometry paired with a dihedral element inside the isotropy
// group of the regular polygon (the diagonal copy of D_n).
O2Element planar_image(const DihedralElement& d, int n);
GroupElement diagonal(const DihedralElement& d, int n);

// (g u)_{g(k)} = A u_k
Configuration act(const GroupElement& g, const Configuration& u);
// Matrix of act(g, .) on the flattened layout.
Eigen::MatrixXd action_matrix(const GroupElement& g, int n);

struct IsotypicalComponent {
    int j = 0;
    int dim = 0;
    std::string name;
    // 2n x dim, orthonormal columns. For 0<j<n/2 the columns are
    // (u, i u, v, i v); for j = n/2 they are (real part, imaginary part),
    // spanning the kappa-even and kappa-odd one-dimensional irreducibles.
    Eigen::MatrixXd basis;
};

// Slice decomposition at the regular polygon u0 (radius r0 only rescales
// the radial vector, so the basis does not depend on it).
std::vector<IsotypicalComponent> isotypical_basis(int n);

// Translations (x, y) and the rotation tangent i u0, orthonormalised.
Eigen::MatrixXd null_directions(int n);

} // namespace equivibe
