#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "equivibe/lattice.hpp"

namespace equivibe {

// Sparse integer combination of finite-Weyl classes (keyed by class id).
struct BurnsideElement {
    std::map<int, int64_t> terms;

    bool is_zero() const { return terms.empty(); }
    int64_t coeff(int id) const;
    void add(int id, int64_t c);

    BurnsideElement operator+(const BurnsideElement& o) const;
    BurnsideElement operator-(const BurnsideElement& o) const;
    BurnsideElement operator-() const;
    bool operator==(const BurnsideElement& o) const { return terms == o.terms; }
};

class BurnsideRing {
public:
    explicit BurnsideRing(std::shared_ptr<const Lattice> lattice);

    const Lattice& lattice() const { return *lat_; }
    std::shared_ptr<const Lattice> lattice_ptr() const { return lat_; }

    BurnsideElement unit() const;             // (G)
    BurnsideElement generator(int id) const;  // (H); rejects infinite Weyl

    // Product via the mark homomorphism (one triangular solve).
    BurnsideElement multiply(const BurnsideElement& x, const BurnsideElement& y) const;
    // (H)(K) through the published coefficient recurrence; memoised.
    BurnsideElement multiply_generators(int H, int K) const;
    // Bilinear extension of multiply_generators.
    BurnsideElement multiply_bilinear(const BurnsideElement& x, const BurnsideElement& y) const;

    // n_L = (n(L,K)|W(K)| n(L,H)|W(H)| - sum_{L' > L} n(L,L') n_{L'} |W(L')|) / |W(L)|
    int64_t recurrence_coefficient(int L, int H, int K, const std::map<int, int64_t>& partial) const;

    // Solves sum_S n_S mark(L, S) = f(L) top-down for every finite-Weyl L.
    BurnsideElement from_marks(const std::function<int64_t(int)>& f) const;

    // mark(L, x) = sum_S x_S mark(L, S)
    int64_t mark(int L, const BurnsideElement& x) const;

    void validate(const BurnsideElement& x) const;

    std::string to_string(const BurnsideElement& x) const;
    nlohmann::json to_json(const BurnsideElement& x) const;
    std::string table_csv(const std::vector<int>& ids) const;

    // Parses "-(D2^{Z2}x_{Z2}D2) + 2(...)" style expansions using the
    // amalgamated-name fields. Used to state printed invariants as data.
    BurnsideElement parse(const std::string& text) const;

private:
    std::shared_ptr<const Lattice> lat_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, BurnsideElement> gen_cache_;
};

// Parses one amalgamated name such as "D6^{Z2}x_{D3}D3", "D~1^{Z1}x_{Z2}D2",
// "D2^{Z1}_{D~1}x_{D2}D2", "Z2xD1", "D6xO(2)". Accepts 'x' or the
// multiplication sign.
ClassQuery parse_class_name(const std::string& s);

// Brute-force Burnside ring of a finite group given by its multiplication
// table (identity at index 0). Used as an independent oracle.
class FiniteGroupBurnside {
public:
    explicit FiniteGroupBurnside(std::vector<std::vector<int>> table);

    int order() const { return static_cast<int>(table_.size()); }
    int num_classes() const { return static_cast<int>(classes_.size()); }
    const std::vector<int>& class_rep(int c) const { return subgroups_[classes_[c].front()]; }
    int class_of(const std::vector<int>& subgroup) const;
    int64_t weyl(int c) const { return weyl_[c]; }
    int64_t mark(int L, int S) const { return marks_[L][S]; }

    // Product by counting G-orbits on G/H x G/K and their stabilisers.
    std::map<int, int64_t> product_by_orbits(int H, int K) const;
    // Product by inverting the table of marks.
    std::map<int, int64_t> product_by_marks(int H, int K) const;

private:
    std::vector<std::vector<int>> table_;
    std::vector<int> inv_;
    std::vector<std::vector<int>> subgroups_;  // sorted element lists
    std::vector<std::vector<int>> classes_;    // indices into subgroups_, sorted by order
    std::vector<int> sub_class_;
    std::vector<int64_t> weyl_;
    std::vector<std::vector<int64_t>> marks_;
};

// Multiplication table of D_m with elements r^a s^f at index a + m f.
std::vector<std::vector<int>> dihedral_table(int m);

} // namespace equivibe
