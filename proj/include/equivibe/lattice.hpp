#pragma once

// Conjugacy classes of closed subgroups of D_n x O(2) in Goursat form.
//
// Finite pieces are realised inside D_n x D_Q (Q = 2 lcm of the K-orders in
// play) with K in standard position: D_c has rotations by 2 pi k/c and
// reflection axes at k pi/c. Classes whose K-part is SO(2) or O(2) contain
// {1} x SO(2) and are stored through their image in D_n x Z_2.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace equivibe {

// ---------------------------------------------------------------- D_n

struct DnClass {
    std::string name;   // Z3, D1, D~1 (rendered with a combining tilde) ...
    char kind = 'Z';    // 'Z', 'D', 'T' (the second dihedral class)
    int d = 1;          // Z_d or D_d
    int order = 1;
    int rep = -1;       // index into DihedralLattice::subgroups
};

class DihedralLattice {
public:
    explicit DihedralLattice(int n);
    int n() const { return n_; }
    int size() const { return 2 * n_; }
    // element index a + n f  <->  xi^a kappa^f
    int mul(int x, int y) const;
    int inv(int x) const;

    const std::vector<uint64_t>& subgroups() const { return subs_; }
    const std::vector<DnClass>& classes() const { return classes_; }
    int class_of(uint64_t mask) const;
    int class_index(const std::string& name) const;  // accepts "D~1" or the tilde form
    uint64_t conjugate(uint64_t mask, int g) const;
    std::vector<int> elements(uint64_t mask) const;
    std::vector<int> generators(uint64_t mask) const;
    uint64_t normalizer(uint64_t mask) const;

private:
    int n_;
    std::vector<uint64_t> subs_;
    std::vector<int> sub_class_;
    std::vector<DnClass> classes_;
};

// ---------------------------------------------------------------- classes

enum class KKind { Cyclic, Dihedral, SO2, O2 };

struct SubgroupClass {
    int id = 0;               // 1-based position in lattice order
    KKind kind = KKind::Dihedral;
    int c = 0;                // K = Z_c or D_c; 0 for SO(2), O(2)
    int family = 0;           // order of the rotation part of ker psi
    int H = 0, Z = 0, R = -1; // D_n class indices; R = -1 when not applicable
    std::string L = "1";      // quotient label: 1, Z2, Z3, Z6, D1, D2, ...
    int Lorder = 1;
    bool show_R = false;
    int64_t weyl = 0;         // 0 encodes an infinite Weyl group
    int64_t order = 0;        // |S|, or |S / SO(2)| for infinite K
    std::string name;         // concrete, e.g. D6^{Z2}x_{D3}D3
    std::string generic_name; // in terms of the family parameter l
    std::vector<int> elems;   // sorted codes of the representative
    std::vector<int> gens;

    bool finite_weyl() const { return weyl > 0; }
    bool infinite_K() const { return kind == KKind::SO2 || kind == KKind::O2; }
};

// Descriptor used to look classes up by the fields of their amalgamated name.
struct ClassQuery {
    std::string H, Z, R, L;   // empty = unconstrained; L "1" for a plain product
    KKind kind = KKind::Dihedral;
    int c = 0;
};

struct LatticeSpec {
    int n = 6;
    std::vector<int> dihedral_c;  // K = D_c realised
    std::vector<int> cyclic_c;    // K = Z_c realised (infinite Weyl; listing only)
    bool include_infinite_K = true;
    int family_filter = 0;        // keep only classes with this family (0 = all)
};

class Lattice {
public:
    explicit Lattice(const LatticeSpec& spec);

    int n() const { return spec_.n; }
    int Q() const { return Q_; }
    const LatticeSpec& spec() const { return spec_; }
    const DihedralLattice& dn() const { return dn_; }
    const std::vector<SubgroupClass>& classes() const { return classes_; }
    const SubgroupClass& cls(int id) const { return classes_.at(id - 1); }
    int size() const { return static_cast<int>(classes_.size()); }

    // The whole group D_n x O(2).
    int top() const { return top_; }

    // Frame arithmetic on D_n x D_Q; code = dn_index * 2Q + (p + Q f).
    int frame_size() const { return dn_.size() * 2 * Q_; }
    int mul(int x, int y) const;
    int inv(int x) const;
    int code(int dn_index, int p, int f) const;
    void decode(int code, int& dn_index, int& p, int& f) const;

    // |(G/S)^L| for finite-Weyl classes.
    int64_t mark(int L, int S) const;
    // Number of conjugates of S containing L (= mark / |W(S)|).
    int64_t n_pairs(int L, int S) const;
    // (L) <= (S): some conjugate of L lies in S. Works for every class.
    bool leq(int L, int S) const;

    // Lookup by amalgamated-name fields. Throws if zero or several match.
    int find(const ClassQuery& q) const;
    std::vector<int> find_all(const ClassQuery& q) const;

    // Classes with finite Weyl group, ordered so that supergroups come first.
    const std::vector<int>& topdown() const { return topdown_; }

    nlohmann::json to_json() const;

private:
    void build();
    void enumerate_finite(KKind kind, int c);
    void enumerate_infinite();
    void finalize();
    bool conj_into_finite(const std::vector<int>& gens_L, const SubgroupClass& S, bool all_frame,
                          int64_t* count) const;
    bool contains(const SubgroupClass& S, int code) const;

    LatticeSpec spec_;
    DihedralLattice dn_;
    int Q_ = 1;
    std::vector<SubgroupClass> classes_;
    std::vector<std::vector<uint64_t>> bits_;  // membership bitsets per class
    std::vector<int> topdown_;
    int top_ = 0;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, int64_t> mark_cache_;
};

// The Table-1 style listing: K-parts Z_{ml}, D_{ml} (m | n), SO(2), O(2),
// restricted to family parameter l. Requires even n >= 4.
std::shared_ptr<const Lattice> subgroup_classes(int n, int l = 1);

// Largest Q accepted for the D_n x D_Q frame of a Burnside universe; memory
// grows with Q.
constexpr int kMaxFrameQ = 60480;

// Finite-Weyl universe closed under subgroups, large enough for degrees of
// the folded representations with Fourier modes in `ls`.
std::shared_ptr<const Lattice> burnside_universe(int n, const std::vector<int>& ls);

std::string kind_name(KKind k);
std::string tilde_name(const std::string& ascii);  // "D~3" -> "D" U+0303 "3"

} // namespace equivibe
