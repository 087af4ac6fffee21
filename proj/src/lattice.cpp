#include "equivibe/lattice.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "equivibe/errors.hpp"

namespace equivibe {

namespace {

int md(int a, int n) { return ((a % n) + n) % n; }

std::vector<int> divisors(int m) {
    std::vector<int> d;
    for (int k = 1; k <= m; ++k)
        if (m % k == 0) d.push_back(k);
    return d;
}

int popcount64(uint64_t x) { return __builtin_popcountll(x); }

} // namespace

std::string tilde_name(const std::string& ascii) {
    if (ascii.size() >= 2 && ascii[0] == 'D' && ascii[1] == '~') return "D\xCC\x83" + ascii.substr(2);
    return ascii;
}

std::string kind_name(KKind k) {
    switch (k) {
    case KKind::Cyclic: return "Z";
    case KKind::Dihedral: return "D";
    case KKind::SO2: return "SO(2)";
    case KKind::O2: return "O(2)";
    }
    return "?";
}

// ---------------------------------------------------------------- D_n

DihedralLattice::DihedralLattice(int n) : n_(n) {
    if (n < 1 || 2 * n > 64) throw UnsupportedError("dihedral lattice supports 1 <= n <= 32");
    std::set<uint64_t> seen;
    struct Raw { uint64_t mask; char kind; int d; int order; };
    std::vector<Raw> raw;
    for (int d : divisors(n)) {
        const int step = n / d;
        uint64_t z = 0;
        for (int k = 0; k < d; ++k) z |= uint64_t(1) << (k * step);
        if (seen.insert(z).second) raw.push_back({z, 'Z', d, d});
        for (int i = 0; i < step; ++i) {
            uint64_t m = z;
            for (int k = 0; k < d; ++k) m |= uint64_t(1) << (n + md(i + k * step, n));
            if (seen.insert(m).second) raw.push_back({m, (step % 2 == 0 && i % 2 == 1) ? 'T' : 'D', d, 2 * d});
        }
    }
    // classes: (order, kind D < Z < T)
    auto krank = [](char k) { return k == 'D' ? 0 : (k == 'Z' ? 1 : 2); };
    std::map<std::tuple<int, int, int>, int> cls_index;
    std::vector<std::tuple<int, int, int>> keys;
    for (auto& r : raw) {
        auto key = std::make_tuple(r.order, krank(r.kind), r.d);
        if (!cls_index.count(key)) {
            cls_index[key] = 0;
            keys.push_back(key);
        }
    }
    std::sort(keys.begin(), keys.end());
    for (size_t i = 0; i < keys.size(); ++i) cls_index[keys[i]] = static_cast<int>(i);
    classes_.resize(keys.size());
    for (auto& r : raw) {
        const int ci = cls_index[std::make_tuple(r.order, krank(r.kind), r.d)];
        subs_.push_back(r.mask);
        sub_class_.push_back(ci);
        DnClass& c = classes_[ci];
        if (c.rep < 0) {
            c.kind = r.kind;
            c.d = r.d;
            c.order = r.order;
            c.rep = static_cast<int>(subs_.size()) - 1;
            const std::string ascii = (r.kind == 'Z' ? "Z" : (r.kind == 'D' ? "D" : "D~")) + std::to_string(r.d);
            c.name = tilde_name(ascii);
        }
    }
}

int DihedralLattice::mul(int x, int y) const {
    const int a = x % n_, f = x / n_, b = y % n_, g = y / n_;
    return md(a + (f ? -b : b), n_) + n_ * (f ^ g);
}

int DihedralLattice::inv(int x) const {
    const int a = x % n_, f = x / n_;
    return f ? x : md(-a, n_);
}

int DihedralLattice::class_of(uint64_t mask) const {
    for (size_t i = 0; i < subs_.size(); ++i)
        if (subs_[i] == mask) return sub_class_[i];
    throw ConsistencyError("mask is not a subgroup of D_n");
}

int DihedralLattice::class_index(const std::string& name) const {
    const std::string t = tilde_name(name);
    for (size_t i = 0; i < classes_.size(); ++i)
        if (classes_[i].name == t) return static_cast<int>(i);
    throw DomainError("unknown subgroup of D_" + std::to_string(n_) + ": " + name);
}

uint64_t DihedralLattice::conjugate(uint64_t mask, int g) const {
    uint64_t out = 0;
    const int gi = inv(g);
    for (int x = 0; x < size(); ++x)
        if (mask >> x & 1) out |= uint64_t(1) << mul(mul(g, x), gi);
    return out;
}

std::vector<int> DihedralLattice::elements(uint64_t mask) const {
    std::vector<int> e;
    for (int x = 0; x < size(); ++x)
        if (mask >> x & 1) e.push_back(x);
    return e;
}

std::vector<int> DihedralLattice::generators(uint64_t mask) const {
    std::vector<int> gens;
    uint64_t cur = 1;  // identity
    for (int x = 0; x < size(); ++x) {
        if (!(mask >> x & 1) || (cur >> x & 1)) continue;
        gens.push_back(x);
        // closure
        bool grown = true;
        cur |= uint64_t(1) << x;
        while (grown) {
            grown = false;
            for (int a = 0; a < size(); ++a) {
                if (!(cur >> a & 1)) continue;
                for (int g : gens) {
                    const int p = mul(a, g);
                    if (!(cur >> p & 1)) { cur |= uint64_t(1) << p; grown = true; }
                }
            }
        }
    }
    return gens;
}

uint64_t DihedralLattice::normalizer(uint64_t mask) const {
    uint64_t out = 0;
    for (int g = 0; g < size(); ++g)
        if (conjugate(mask, g) == mask) out |= uint64_t(1) << g;
    return out;
}

// ---------------------------------------------------------------- frame

int Lattice::code(int dn_index, int p, int f) const { return dn_index * 2 * Q_ + md(p, Q_) + Q_ * f; }

void Lattice::decode(int c, int& dn_index, int& p, int& f) const {
    dn_index = c / (2 * Q_);
    const int o = c % (2 * Q_);
    p = o % Q_;
    f = o / Q_;
}

int Lattice::mul(int x, int y) const {
    int a, p, f, b, q, g;
    decode(x, a, p, f);
    decode(y, b, q, g);
    return code(dn_.mul(a, b), p + (f ? -q : q), f ^ g);
}

int Lattice::inv(int x) const {
    int a, p, f;
    decode(x, a, p, f);
    return code(dn_.inv(a), f ? p : -p, f);
}

namespace {

// Reduced frame D_n x Z_2 used for classes containing SO(2).
struct Reduced {
    const DihedralLattice& dn;
    int code(int a, int f) const { return a * 2 + f; }
    int mul(int x, int y) const { return code(dn.mul(x / 2, y / 2), (x % 2) ^ (y % 2)); }
    int inv(int x) const { return code(dn.inv(x / 2), x % 2); }
    int size() const { return dn.size() * 2; }
};

std::vector<int> closure_gens(const std::vector<int>& elems, const std::function<int(int, int)>& mul,
                              int identity) {
    std::set<int> all(elems.begin(), elems.end());
    std::set<int> cur{identity};
    std::vector<int> gens;
    for (int x : elems) {
        if (cur.count(x)) continue;
        gens.push_back(x);
        std::vector<int> frontier(cur.begin(), cur.end());
        cur.insert(x);
        bool grown = true;
        while (grown) {
            grown = false;
            std::vector<int> snapshot(cur.begin(), cur.end());
            for (int a : snapshot)
                for (int g : gens) {
                    const int p = mul(a, g);
                    if (!cur.count(p)) { cur.insert(p); grown = true; }
                }
        }
        if (cur.size() == all.size()) break;
    }
    return gens;
}

} // namespace

// ---------------------------------------------------------------- building

Lattice::Lattice(const LatticeSpec& spec) : spec_(spec), dn_(spec.n) {
    if (spec.n < 4 || spec.n % 2 != 0)
        throw UnsupportedError("subgroup lattice implemented for even n >= 4, got n = " + std::to_string(spec.n));
    int l = 1;
    for (int c : spec.dihedral_c) l = std::lcm(l, c);
    for (int c : spec.cyclic_c) l = std::lcm(l, c);
    Q_ = 2 * l;
    build();
}

bool Lattice::contains(const SubgroupClass& S, int c) const {
    const auto& b = bits_[S.id - 1];
    return (b[c >> 6] >> (c & 63)) & 1;
}

void Lattice::build() {
    for (int c : spec_.cyclic_c) enumerate_finite(KKind::Cyclic, c);
    for (int c : spec_.dihedral_c) enumerate_finite(KKind::Dihedral, c);
    if (spec_.include_infinite_K) enumerate_infinite();
    finalize();
}

namespace {

struct Candidate {
    SubgroupClass cls;
    uint64_t Hmask = 0;
};

} // namespace

void Lattice::enumerate_finite(KKind kind, int c) {
    const int step = Q_ / c;
    // K in standard position
    std::vector<int> K;  // o-indices p + Q f
    for (int k = 0; k < c; ++k) K.push_back(k * step);
    if (kind == KKind::Dihedral)
        for (int k = 0; k < c; ++k) K.push_back(k * step + Q_);
    auto omul = [&](int x, int y) {
        const int p = x % Q_, f = x / Q_, q = y % Q_, g = y / Q_;
        return md(p + (f ? -q : q), Q_) + Q_ * (f ^ g);
    };

    struct Normal { std::vector<int> elems; std::string label; int rot_order; };
    std::vector<Normal> normals;
    for (int d : divisors(c)) {
        Normal N;
        const int s2 = Q_ / d;
        for (int k = 0; k < d; ++k) N.elems.push_back(k * s2);
        N.rot_order = d;
        if (kind == KKind::Cyclic) N.label = (c / d == 1) ? "1" : "Z" + std::to_string(c / d);
        else N.label = "D" + std::to_string(c / d);
        normals.push_back(N);
    }
    if (kind == KKind::Dihedral) {
        Normal N{K, "1", c};
        normals.push_back(N);
        if (c % 2 == 0) {
            for (int v = 0; v < 2; ++v) {
                Normal M;
                for (int k = 0; k < c / 2; ++k) M.elems.push_back(k * 2 * step);
                for (int k = 0; k < c / 2; ++k) M.elems.push_back((k * 2 + v) * step + Q_);
                M.label = "Z2";
                M.rot_order = c / 2;
                normals.push_back(M);
            }
        }
    }

    std::vector<Candidate> found;
    std::map<std::tuple<int, std::string, int, int, int, int64_t>, std::vector<int>> buckets;

    const int nrot_frame = 2 * c;  // D_{2c} inside D_Q
    const int fstep = Q_ / nrot_frame;

    for (const auto& N : normals) {
        // cosets of N in K
        std::map<int, int> coset;
        std::vector<int> reps;
        for (int k : K) {
            if (coset.count(k)) continue;
            const int id = static_cast<int>(reps.size());
            reps.push_back(k);
            for (int m : N.elems) coset[omul(k, m)] = id;
        }
        const int Lsize = static_cast<int>(reps.size());
        std::vector<std::vector<int>> Lmul(Lsize, std::vector<int>(Lsize));
        for (int a = 0; a < Lsize; ++a)
            for (int b = 0; b < Lsize; ++b) Lmul[a][b] = coset.at(omul(reps[a], reps[b]));
        std::set<int> rot_image;
        for (int k = 0; k < c; ++k) rot_image.insert(coset.at(k * step));
        const int Lid = coset.at(0);

        for (size_t ci = 0; ci < dn_.classes().size(); ++ci) {
            const uint64_t Hm = dn_.subgroups()[dn_.classes()[ci].rep];
            const auto Hel = dn_.elements(Hm);
            const auto Hg = dn_.generators(Hm);
            if (static_cast<int>(Hel.size()) % Lsize != 0) continue;
            const int ng = static_cast<int>(Hg.size());
            std::vector<int> img(ng, 0);
            // iterate over all generator image tuples
            const long total = [&] { long t = 1; for (int i = 0; i < ng; ++i) t *= Lsize; return t; }();
            for (long code_t = 0; code_t < total; ++code_t) {
                long r = code_t;
                for (int i = 0; i < ng; ++i) { img[i] = static_cast<int>(r % Lsize); r /= Lsize; }
                std::map<int, int> phi;
                phi[0] = Lid;
                std::vector<int> queue{0};
                bool ok = true;
                for (size_t qi = 0; qi < queue.size() && ok; ++qi) {
                    const int x = queue[qi];
                    for (int i = 0; i < ng; ++i) {
                        const int y = dn_.mul(x, Hg[i]);
                        const int v = Lmul[phi[x]][img[i]];
                        auto it = phi.find(y);
                        if (it == phi.end()) { phi[y] = v; queue.push_back(y); }
                        else if (it->second != v) { ok = false; break; }
                    }
                }
                if (!ok) continue;
                std::set<int> image;
                for (auto& [h, v] : phi) image.insert(v);
                if (static_cast<int>(image.size()) != Lsize) continue;

                Candidate cand;
                SubgroupClass& S = cand.cls;
                S.kind = kind;
                S.c = c;
                S.family = N.rot_order;
                S.H = static_cast<int>(ci);
                S.L = N.label;
                S.Lorder = Lsize;
                uint64_t Zm = 0, Rm = 0;
                for (auto& [h, v] : phi) {
                    if (v == Lid) Zm |= uint64_t(1) << h;
                    if (rot_image.count(v)) Rm |= uint64_t(1) << h;
                    for (int k : K)
                        if (coset.at(k) == v) S.elems.push_back(h * 2 * Q_ + k);
                }
                std::sort(S.elems.begin(), S.elems.end());
                S.Z = dn_.class_of(Zm);
                S.R = dn_.class_of(Rm);
                S.order = static_cast<int64_t>(S.elems.size());
                cand.Hmask = Hm;

                // dedupe against same-key candidates
                auto key = std::make_tuple(S.H, S.L, S.Z, S.R, S.family, S.order);
                auto& bucket = buckets[key];
                std::vector<int> gens = closure_gens(
                    S.elems, [&](int a, int b) { return mul(a, b); }, 0);
                bool dup = false;
                const uint64_t NH = dn_.normalizer(Hm);
                for (int other : bucket) {
                    const auto& T = found[other].cls;
                    std::set<int> Tset(T.elems.begin(), T.elems.end());
                    for (int a = 0; a < dn_.size() && !dup; ++a) {
                        if (!(NH >> a & 1)) continue;
                        for (int f = 0; f < 2 && !dup; ++f)
                            for (int k = 0; k < nrot_frame && !dup; ++k) {
                                const int g = code(a, k * fstep, f), gi = inv(g);
                                bool all = true;
                                for (int x : gens)
                                    if (!Tset.count(mul(mul(g, x), gi))) { all = false; break; }
                                if (all) dup = true;
                            }
                    }
                    if (dup) break;
                }
                if (dup) continue;
                S.gens = std::move(gens);
                bucket.push_back(static_cast<int>(found.size()));
                found.push_back(std::move(cand));
            }
        }
    }
    for (auto& f : found) {
        if (spec_.family_filter && f.cls.family != spec_.family_filter) continue;
        classes_.push_back(std::move(f.cls));
    }
}

void Lattice::enumerate_infinite() {
    Reduced R{dn_};
    for (int variant = 0; variant < 3; ++variant) {
        // 0: H x SO(2); 1: H x O(2); 2: H x_{D1} O(2) through H -> Z_2
        std::vector<SubgroupClass> found;
        for (size_t ci = 0; ci < dn_.classes().size(); ++ci) {
            const uint64_t Hm = dn_.subgroups()[dn_.classes()[ci].rep];
            const auto Hel = dn_.elements(Hm);
            auto push = [&](std::vector<int> el, uint64_t Zm, const std::string& L, int Lorder) {
                SubgroupClass S;
                S.kind = variant == 0 ? KKind::SO2 : KKind::O2;
                S.c = 0;
                S.family = 0;
                S.H = static_cast<int>(ci);
                S.Z = dn_.class_of(Zm);
                S.R = -1;
                S.L = L;
                S.Lorder = Lorder;
                std::sort(el.begin(), el.end());
                S.elems = el;
                S.order = static_cast<int64_t>(el.size());
                // dedupe under N_{D_n}(H)
                for (const auto& T : found) {
                    if (T.H != S.H || T.Z != S.Z || T.L != S.L) continue;
                    std::set<int> Ts(T.elems.begin(), T.elems.end());
                    for (int a = 0; a < dn_.size(); ++a) {
                        bool all = true;
                        for (int x : S.elems) {
                            const int g = R.code(a, 0);
                            if (!Ts.count(R.mul(R.mul(g, x), R.inv(g)))) { all = false; break; }
                        }
                        if (all) return;
                    }
                }
                S.gens = closure_gens(S.elems, [&](int a, int b) { return R.mul(a, b); }, 0);
                found.push_back(std::move(S));
            };
            if (variant == 0) {
                std::vector<int> el;
                for (int h : Hel) el.push_back(R.code(h, 0));
                push(el, Hm, "1", 1);
            } else if (variant == 1) {
                std::vector<int> el;
                for (int h : Hel) { el.push_back(R.code(h, 0)); el.push_back(R.code(h, 1)); }
                push(el, Hm, "1", 1);
            } else {
                // index-two subgroups Z of H give epimorphisms H -> Z_2
                for (uint64_t Zm : dn_.subgroups()) {
                    if ((Zm & Hm) != Zm || popcount64(Zm) * 2 != popcount64(Hm)) continue;
                    std::vector<int> el;
                    for (int h : Hel) el.push_back(R.code(h, (Zm >> h & 1) ? 0 : 1));
                    push(el, Zm, "D1", 2);
                }
            }
        }
        for (auto& S : found) classes_.push_back(std::move(S));
    }
}

void Lattice::finalize() {
    Reduced R{dn_};
    // ordering
    auto gkey = [](const SubgroupClass& S) -> std::pair<int, int> {
        switch (S.kind) {
        case KKind::Cyclic: return {0, S.Lorder};
        case KKind::Dihedral:
            if (S.L == "1") return {2, 0};
            if (S.L == "Z2") return {3, 0};
            return {1, S.Lorder / 2};
        case KKind::SO2: return {4, 0};
        case KKind::O2: return {S.L == "1" ? 6 : 5, 0};
        }
        return {9, 0};
    };
    std::stable_sort(classes_.begin(), classes_.end(), [&](const SubgroupClass& a, const SubgroupClass& b) {
        auto ka = std::make_tuple(a.infinite_K() ? 1 : 0, a.family, gkey(a), a.H, a.Z, a.R);
        auto kb = std::make_tuple(b.infinite_K() ? 1 : 0, b.family, gkey(b), b.H, b.Z, b.R);
        return ka < kb;
    });
    for (size_t i = 0; i < classes_.size(); ++i) classes_[i].id = static_cast<int>(i) + 1;

    // membership bitsets
    bits_.clear();
    for (const auto& S : classes_) {
        const int sz = S.infinite_K() ? R.size() : frame_size();
        std::vector<uint64_t> b((sz + 63) / 64, 0);
        for (int x : S.elems) b[x >> 6] |= uint64_t(1) << (x & 63);
        bits_.push_back(std::move(b));
    }

    // Weyl groups
    for (auto& S : classes_) {
        if (S.kind == KKind::Cyclic) { S.weyl = 0; continue; }
        int64_t cnt = 0;
        if (S.infinite_K()) {
            for (int g = 0; g < R.size(); ++g) {
                bool all = true;
                for (int x : S.gens)
                    if (!contains(S, R.mul(R.mul(g, x), R.inv(g)))) { all = false; break; }
                cnt += all;
            }
        } else {
            const int fstep = Q_ / (2 * S.c);
            for (int a = 0; a < dn_.size(); ++a)
                for (int f = 0; f < 2; ++f)
                    for (int k = 0; k < 2 * S.c; ++k) {
                        const int g = code(a, k * fstep, f), gi = inv(g);
                        bool all = true;
                        for (int x : S.gens)
                            if (!contains(S, mul(mul(g, x), gi))) { all = false; break; }
                        cnt += all;
                    }
        }
        if (cnt % S.order != 0) throw ConsistencyError("normalizer order not divisible by |S|");
        S.weyl = cnt / S.order;
    }

    // names
    const auto& dc = dn_.classes();
    std::map<std::tuple<int, int, int, int, std::string>, std::set<int>> Rs;
    for (const auto& S : classes_) Rs[{int(S.kind), S.c, S.H, S.Z, S.L}].insert(S.R);
    std::map<std::string, int> seen_names;
    for (auto& S : classes_) {
        S.show_R = S.R >= 0 && Rs[{int(S.kind), S.c, S.H, S.Z, S.L}].size() > 1;
        auto kstr = [&](bool generic) -> std::string {
            switch (S.kind) {
            case KKind::SO2: return "SO(2)";
            case KKind::O2: return "O(2)";
            case KKind::Cyclic:
            case KKind::Dihedral: {
                const std::string k = S.kind == KKind::Cyclic ? "Z" : "D";
                if (!generic) return k + std::to_string(S.c);
                const int m = S.c / S.family;
                return k + (m == 1 ? std::string() : std::to_string(m)) + "l";
            }
            }
            return "?";
        };
        auto mk = [&](bool generic) {
            std::string s = dc[S.H].name;
            if (S.L == "1") return s + "×" + kstr(generic);
            s += "^{" + dc[S.Z].name + "}";
            if (S.show_R) s += "_{" + dc[S.R].name + "}";
            return s + "×_{" + S.L + "}" + kstr(generic);
        };
        S.name = mk(false);
        S.generic_name = mk(true);
        const int k = ++seen_names[S.name];
        if (k > 1) {
            S.name += "#" + std::to_string(k);
            S.generic_name += "#" + std::to_string(k);
        }
    }

    // top class and top-down order
    top_ = 0;
    for (const auto& S : classes_)
        if (S.kind == KKind::O2 && S.L == "1" && dc[S.H].order == dn_.size()) top_ = S.id;
    topdown_.clear();
    for (const auto& S : classes_)
        if (S.finite_weyl()) topdown_.push_back(S.id);
    std::stable_sort(topdown_.begin(), topdown_.end(), [&](int a, int b) {
        const auto& A = cls(a);
        const auto& B = cls(b);
        return std::make_pair(A.infinite_K() ? 1 : 0, A.order) > std::make_pair(B.infinite_K() ? 1 : 0, B.order);
    });
}

// ---------------------------------------------------------------- queries

namespace {

// Image of a finite-K class in D_n x Z_2.
std::vector<int> reduce_gens(const Lattice& lat, const SubgroupClass& L) {
    if (L.infinite_K()) return L.gens;
    std::vector<int> out;
    for (int x : L.gens) {
        int a, p, f;
        lat.decode(x, a, p, f);
        out.push_back(a * 2 + f);
    }
    return out;
}

} // namespace

bool Lattice::conj_into_finite(const std::vector<int>& gens_L, const SubgroupClass& S, bool all_frame,
                               int64_t* count) const {
    const int fstep = Q_ / (2 * S.c);
    int64_t cnt = 0;
    for (int a = 0; a < dn_.size(); ++a)
        for (int f = 0; f < 2; ++f)
            for (int k = 0; k < 2 * S.c; ++k) {
                const int g = code(a, k * fstep, f), gi = inv(g);
                bool all = true;
                for (int x : gens_L)
                    if (!contains(S, mul(mul(gi, x), g))) { all = false; break; }
                if (all) {
                    ++cnt;
                    if (!all_frame) { if (count) *count = cnt; return true; }
                }
            }
    if (count) *count = cnt;
    return cnt > 0;
}

int64_t Lattice::mark(int Lid, int Sid) const {
    const auto& L = cls(Lid);
    const auto& S = cls(Sid);
    if (!L.finite_weyl() || !S.finite_weyl())
        throw UnsupportedError("marks are defined for finite-Weyl classes only");
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = mark_cache_.find({Lid, Sid});
        if (it != mark_cache_.end()) return it->second;
    }
    int64_t m = 0;
    if (!S.infinite_K()) {
        if (!L.infinite_K() && S.c % L.c == 0 && S.order % L.order == 0) {
            int64_t cnt = 0;
            conj_into_finite(L.gens, S, true, &cnt);
            if (cnt % S.order != 0) throw ConsistencyError("mark count not divisible by |S|");
            m = cnt / S.order;
        }
    } else {
        Reduced R{dn_};
        const auto g = reduce_gens(*this, L);
        int64_t cnt = 0;
        for (int x = 0; x < R.size(); ++x) {
            const int xi = R.inv(x);
            bool all = true;
            for (int y : g)
                if (!contains(S, R.mul(R.mul(xi, y), x))) { all = false; break; }
            cnt += all;
        }
        if (cnt % S.order != 0) throw ConsistencyError("mark count not divisible by |S|");
        m = cnt / S.order;
    }
    std::lock_guard<std::mutex> lk(mu_);
    mark_cache_[{Lid, Sid}] = m;
    return m;
}

int64_t Lattice::n_pairs(int Lid, int Sid) const {
    const auto& S = cls(Sid);
    if (!cls(Lid).finite_weyl() || !S.finite_weyl())
        throw UnsupportedError("n(L,K) requires finite Weyl groups");
    const int64_t m = mark(Lid, Sid);
    if (m % S.weyl != 0) throw ConsistencyError("mark not divisible by |W(S)|");
    return m / S.weyl;
}

bool Lattice::leq(int Lid, int Sid) const {
    if (Lid == Sid) return true;
    const auto& L = cls(Lid);
    const auto& S = cls(Sid);
    if (L.infinite_K() && !S.infinite_K()) return false;
    if (!S.infinite_K()) {
        if (S.c % L.c != 0 || S.order % L.order != 0) return false;
        if (L.kind == KKind::Dihedral && S.kind == KKind::Cyclic) return false;
        return conj_into_finite(L.gens, S, false, nullptr);
    }
    Reduced R{dn_};
    const auto g = reduce_gens(*this, L);
    for (int x = 0; x < R.size(); ++x) {
        const int xi = R.inv(x);
        bool all = true;
        for (int y : g)
            if (!contains(S, R.mul(R.mul(xi, y), x))) { all = false; break; }
        if (all) return true;
    }
    return false;
}

std::vector<int> Lattice::find_all(const ClassQuery& q) const {
    std::vector<int> out;
    auto idx = [&](const std::string& s) { return s.empty() ? -2 : dn_.class_index(s); };
    const int h = idx(q.H), z = idx(q.Z), r = idx(q.R);
    for (const auto& S : classes_) {
        if (S.kind != q.kind) continue;
        if ((q.kind == KKind::Cyclic || q.kind == KKind::Dihedral) && S.c != q.c) continue;
        if (h != -2 && S.H != h) continue;
        if (z != -2 && S.Z != z) continue;
        if (r != -2 && S.R != r) continue;
        if (!q.L.empty() && S.L != q.L) continue;
        out.push_back(S.id);
    }
    return out;
}

int Lattice::find(const ClassQuery& q) const {
    const auto all = find_all(q);
    if (all.size() != 1) {
        std::ostringstream os;
        os << "class query H=" << q.H << " Z=" << q.Z << " R=" << q.R << " L=" << q.L << " K=" << kind_name(q.kind)
           << q.c << " matched " << all.size() << " classes";
        throw DomainError(os.str());
    }
    return all.front();
}

nlohmann::json Lattice::to_json() const {
    using nlohmann::json;
    json arr = json::array();
    const auto& dc = dn_.classes();
    for (const auto& S : classes_) {
        json covers = json::array();
        for (const auto& T : classes_) {
            if (T.id == S.id || !leq(T.id, S.id)) continue;
            bool cover = true;
            for (const auto& M : classes_) {
                if (M.id == S.id || M.id == T.id) continue;
                if (leq(T.id, M.id) && leq(M.id, S.id)) { cover = false; break; }
            }
            if (cover) covers.push_back(T.id);
        }
        json j;
        j["id"] = S.id;
        j["name"] = S.name;
        j["generic_name"] = S.generic_name;
        j["H"] = dc[S.H].name;
        j["Z"] = dc[S.Z].name;
        j["R"] = S.R >= 0 ? json(dc[S.R].name) : json(nullptr);
        j["L"] = S.L;
        j["K"] = S.kind == KKind::SO2 ? "SO(2)" : S.kind == KKind::O2 ? "O(2)" : kind_name(S.kind) + std::to_string(S.c);
        j["family"] = S.family;
        j["weyl_order"] = S.weyl > 0 ? json(S.weyl) : json("infinity");
        j["covers"] = covers;
        arr.push_back(j);
    }
    json out;
    out["n"] = spec_.n;
    out["classes"] = arr;
    return out;
}

// ---------------------------------------------------------------- factories

std::shared_ptr<const Lattice> subgroup_classes(int n, int l) {
    if (n < 4 || n % 2 != 0) throw UnsupportedError("subgroup_classes supports even n >= 4");
    if (l < 1) throw DomainError("family parameter must be >= 1");
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const Lattice>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[{n, l}];
    if (!slot) {
        LatticeSpec s;
        s.n = n;
        for (int m : divisors(n)) {
            s.dihedral_c.push_back(m * l);
            s.cyclic_c.push_back(m * l);
        }
        s.family_filter = l;
        slot = std::make_shared<const Lattice>(s);
    }
    return slot;
}

std::shared_ptr<const Lattice> burnside_universe(int n, const std::vector<int>& ls) {
    if (n < 4 || n % 2 != 0) throw UnsupportedError("Burnside universe supports even n >= 4");
    std::set<int> cs;
    for (int l : ls) {
        if (l < 1) throw DomainError("Fourier mode must be >= 1");
        for (int d : divisors(n * l)) cs.insert(d);
    }
    if (cs.empty()) cs.insert(1);
    long q = 1;
    for (int c : cs)
        if (2 * (q = std::lcm(q, static_cast<long>(c))) > kMaxFrameQ)
            throw UnsupportedError("Fourier modes up to " +
                                   std::to_string(*std::max_element(ls.begin(), ls.end())) +
                                   " need a D_n x D_Q frame with Q above " + std::to_string(kMaxFrameQ));
    static std::mutex mu;
    static std::map<std::pair<int, std::set<int>>, std::shared_ptr<const Lattice>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[{n, cs}];
    if (!slot) {
        LatticeSpec s;
        s.n = n;
        s.dihedral_c.assign(cs.begin(), cs.end());
        slot = std::make_shared<const Lattice>(s);
    }
    return slot;
}

} // namespace equivibe
