#include "equivibe/burnside.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "equivibe/errors.hpp"

namespace equivibe {

// ---------------------------------------------------------------- element

int64_t BurnsideElement::coeff(int id) const {
    auto it = terms.find(id);
    return it == terms.end() ? 0 : it->second;
}

void BurnsideElement::add(int id, int64_t c) {
    if (c == 0) return;
    int64_t& v = terms[id];
    v += c;
    if (v == 0) terms.erase(id);
}

BurnsideElement BurnsideElement::operator+(const BurnsideElement& o) const {
    BurnsideElement r = *this;
    for (auto& [k, v] : o.terms) r.add(k, v);
    return r;
}

BurnsideElement BurnsideElement::operator-(const BurnsideElement& o) const {
    BurnsideElement r = *this;
    for (auto& [k, v] : o.terms) r.add(k, -v);
    return r;
}

BurnsideElement BurnsideElement::operator-() const {
    BurnsideElement r;
    for (auto& [k, v] : terms) r.terms[k] = -v;
    return r;
}

// ---------------------------------------------------------------- ring

BurnsideRing::BurnsideRing(std::shared_ptr<const Lattice> lattice) : lat_(std::move(lattice)) {
    if (!lat_->top()) throw ConsistencyError("lattice lacks the full group class");
}

BurnsideElement BurnsideRing::unit() const {
    BurnsideElement e;
    e.add(lat_->top(), 1);
    return e;
}

BurnsideElement BurnsideRing::generator(int id) const {
    if (!lat_->cls(id).finite_weyl())
        throw DomainError("class " + lat_->cls(id).name + " has infinite Weyl group; not in the Burnside ring");
    BurnsideElement e;
    e.add(id, 1);
    return e;
}

void BurnsideRing::validate(const BurnsideElement& x) const {
    for (auto& [id, v] : x.terms) {
        if (id < 1 || id > lat_->size()) throw DomainError("class id out of range");
        if (!lat_->cls(id).finite_weyl())
            throw DomainError("coefficient on infinite-Weyl class " + lat_->cls(id).name);
    }
}

int64_t BurnsideRing::mark(int L, const BurnsideElement& x) const {
    int64_t s = 0;
    for (auto& [id, v] : x.terms) s += v * lat_->mark(L, id);
    return s;
}

BurnsideElement BurnsideRing::from_marks(const std::function<int64_t(int)>& f) const {
    BurnsideElement out;
    for (int L : lat_->topdown()) {
        int64_t rhs = f(L);
        for (auto& [S, nS] : out.terms) rhs -= lat_->mark(L, S) * nS;
        const int64_t w = lat_->cls(L).weyl;
        if (rhs % w != 0) {
            std::ostringstream os;
            os << "non-integral recurrence division at " << lat_->cls(L).name << ": " << rhs << " / " << w;
            throw ConsistencyError(os.str());
        }
        out.add(L, rhs / w);
    }
    return out;
}

BurnsideElement BurnsideRing::multiply(const BurnsideElement& x, const BurnsideElement& y) const {
    validate(x);
    validate(y);
    if (x.is_zero() || y.is_zero()) return {};
    return from_marks([&](int L) { return mark(L, x) * mark(L, y); });
}

int64_t BurnsideRing::recurrence_coefficient(int L, int H, int K, const std::map<int, int64_t>& partial) const {
    const auto& lat = *lat_;
    int64_t num = lat.n_pairs(L, K) * lat.cls(K).weyl * lat.n_pairs(L, H) * lat.cls(H).weyl;
    for (auto& [Lt, nLt] : partial) {
        if (Lt == L || nLt == 0) continue;
        const int64_t np = lat.n_pairs(L, Lt);
        if (np) num -= np * nLt * lat.cls(Lt).weyl;
    }
    const int64_t w = lat.cls(L).weyl;
    if (num % w != 0) {
        std::ostringstream os;
        os << "non-integral recurrence division at " << lat.cls(L).name << ": " << num << " / " << w;
        throw ConsistencyError(os.str());
    }
    return num / w;
}

BurnsideElement BurnsideRing::multiply_generators(int H, int K) const {
    if (H > K) std::swap(H, K);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = gen_cache_.find({H, K});
        if (it != gen_cache_.end()) return it->second;
    }
    generator(H);
    generator(K);
    std::map<int, int64_t> partial;
    BurnsideElement out;
    for (int L : lat_->topdown()) {
        const int64_t v = recurrence_coefficient(L, H, K, partial);
        if (v) {
            partial[L] = v;
            out.add(L, v);
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    gen_cache_[{H, K}] = out;
    return out;
}

BurnsideElement BurnsideRing::multiply_bilinear(const BurnsideElement& x, const BurnsideElement& y) const {
    BurnsideElement out;
    for (auto& [a, ca] : x.terms)
        for (auto& [b, cb] : y.terms) {
            const auto p = multiply_generators(a, b);
            for (auto& [id, v] : p.terms) out.add(id, ca * cb * v);
        }
    return out;
}

std::string BurnsideRing::to_string(const BurnsideElement& x) const {
    if (x.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [id, v] : x.terms) {
        const int64_t a = v < 0 ? -v : v;
        if (first) { if (v < 0) os << "-"; }
        else os << (v < 0 ? " - " : " + ");
        if (a != 1) os << a;
        os << "(" << lat_->cls(id).name << ")";
        first = false;
    }
    return os.str();
}

nlohmann::json BurnsideRing::to_json(const BurnsideElement& x) const {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& [id, v] : x.terms) arr.push_back({{"class", lat_->cls(id).name}, {"id", id}, {"coefficient", v}});
    return arr;
}

std::string BurnsideRing::table_csv(const std::vector<int>& ids) const {
    std::ostringstream os;
    os << "left,right,product\n";
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i; j < ids.size(); ++j) {
            const auto p = multiply_generators(ids[i], ids[j]);
            os << '"' << lat_->cls(ids[i]).name << "\",\"" << lat_->cls(ids[j]).name << "\",\"" << to_string(p) << "\"\n";
        }
    return os.str();
}

// ---------------------------------------------------------------- parsing

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Reads "{...}" or a single token starting at pos.
std::string read_group(const std::string& s, size_t& pos) {
    if (pos < s.size() && s[pos] == '{') {
        const size_t e = s.find('}', pos);
        if (e == std::string::npos) throw DomainError("unbalanced braces in class name: " + s);
        std::string g = s.substr(pos + 1, e - pos - 1);
        pos = e + 1;
        return trim(g);
    }
    throw DomainError("expected {...} in class name: " + s);
}

} // namespace

ClassQuery parse_class_name(const std::string& raw) {
    std::string s = trim(raw);
    const std::string times = "\xC3\x97";
    size_t cut = s.find(times);
    size_t cutlen = times.size();
    if (cut == std::string::npos) {
        cut = s.find('x');
        cutlen = 1;
    }
    if (cut == std::string::npos) throw DomainError("class name lacks a product sign: " + raw);
    const std::string left = s.substr(0, cut);
    std::string right = s.substr(cut + cutlen);
    ClassQuery q;
    size_t pos = left.find_first_of("^_");
    q.H = trim(left.substr(0, pos));
    while (pos != std::string::npos && pos < left.size()) {
        const char tag = left[pos++];
        const std::string g = read_group(left, pos);
        if (tag == '^') q.Z = g;
        else q.R = g;
        while (pos < left.size() && std::isspace(static_cast<unsigned char>(left[pos]))) ++pos;
    }
    right = trim(right);
    if (!right.empty() && right[0] == '_') {
        size_t p = 1;
        q.L = read_group(right, p);
        right = trim(right.substr(p));
    } else {
        q.L = "1";
    }
    if (right == "SO(2)") q.kind = KKind::SO2;
    else if (right == "O(2)") q.kind = KKind::O2;
    else if (!right.empty() && (right[0] == 'D' || right[0] == 'Z')) {
        q.kind = right[0] == 'D' ? KKind::Dihedral : KKind::Cyclic;
        q.c = std::stoi(right.substr(1));
    } else {
        throw DomainError("cannot parse K-part '" + right + "' in " + raw);
    }
    if (q.L == "1") q.Z.clear();
    return q;
}

BurnsideElement BurnsideRing::parse(const std::string& text) const {
    BurnsideElement out;
    size_t i = 0;
    const std::string& s = text;
    auto skip = [&] { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; };
    while (true) {
        skip();
        if (i >= s.size()) break;
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
            skip();
        }
        int64_t c = 1;
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            c = std::stoll(s.substr(i, j - i));
            i = j;
            skip();
        }
        if (i >= s.size() || s[i] != '(') throw DomainError("expected '(' in expansion at offset " + std::to_string(i));
        int depth = 0;
        size_t j = i;
        for (; j < s.size(); ++j) {
            if (s[j] == '(') ++depth;
            else if (s[j] == ')' && --depth == 0) break;
        }
        if (j >= s.size()) throw DomainError("unbalanced parentheses in expansion");
        const std::string name = trim(s.substr(i + 1, j - i - 1));
        i = j + 1;
        const int id = name == "G" ? lat_->top() : lat_->find(parse_class_name(name));
        out.add(id, sign * c);
    }
    return out;
}

// ---------------------------------------------------------------- oracle

std::vector<std::vector<int>> dihedral_table(int m) {
    const int N = 2 * m;
    std::vector<std::vector<int>> t(N, std::vector<int>(N));
    for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y) {
            const int a = x % m, f = x / m, b = y % m, g = y / m;
            t[x][y] = (((a + (f ? -b : b)) % m + m) % m) + m * (f ^ g);
        }
    return t;
}

FiniteGroupBurnside::FiniteGroupBurnside(std::vector<std::vector<int>> table) : table_(std::move(table)) {
    const int N = order();
    inv_.assign(N, -1);
    for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y)
            if (table_[x][y] == 0) inv_[x] = y;

    auto closure = [&](std::vector<int> gens) {
        std::set<int> cur{0};
        std::vector<int> frontier{0};
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int a : frontier)
                for (int g : gens) {
                    const int p = table_[a][g];
                    if (cur.insert(p).second) next.push_back(p);
                }
            frontier = std::move(next);
        }
        return std::vector<int>(cur.begin(), cur.end());
    };
    std::set<std::vector<int>> subs;
    for (int x = 0; x < N; ++x) subs.insert(closure({x}));
    bool grown = true;
    while (grown) {
        grown = false;
        std::vector<std::vector<int>> cur(subs.begin(), subs.end());
        for (size_t i = 0; i < cur.size(); ++i)
            for (size_t j = i + 1; j < cur.size(); ++j) {
                std::vector<int> u = cur[i];
                u.insert(u.end(), cur[j].begin(), cur[j].end());
                if (subs.insert(closure(u)).second) grown = true;
            }
    }
    subgroups_.assign(subs.begin(), subs.end());
    std::stable_sort(subgroups_.begin(), subgroups_.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });

    auto conj = [&](const std::vector<int>& S, int g) {
        std::vector<int> out;
        for (int x : S) out.push_back(table_[table_[g][x]][inv_[g]]);
        std::sort(out.begin(), out.end());
        return out;
    };
    sub_class_.assign(subgroups_.size(), -1);
    for (size_t i = 0; i < subgroups_.size(); ++i) {
        if (sub_class_[i] >= 0) continue;
        const int c = static_cast<int>(classes_.size());
        classes_.push_back({});
        std::set<std::vector<int>> orbit;
        for (int g = 0; g < N; ++g) orbit.insert(conj(subgroups_[i], g));
        for (size_t j = i; j < subgroups_.size(); ++j)
            if (orbit.count(subgroups_[j])) {
                sub_class_[j] = c;
                classes_[c].push_back(static_cast<int>(j));
            }
    }
    const int C = num_classes();
    weyl_.assign(C, 0);
    marks_.assign(C, std::vector<int64_t>(C, 0));
    for (int S = 0; S < C; ++S) {
        const auto& Srep = class_rep(S);
        std::set<int> Sset(Srep.begin(), Srep.end());
        int64_t nrm = 0;
        for (int g = 0; g < N; ++g) nrm += conj(Srep, g) == Srep;
        weyl_[S] = nrm / static_cast<int64_t>(Srep.size());
        for (int L = 0; L < C; ++L) {
            int64_t cnt = 0;
            for (int g = 0; g < N; ++g) {
                bool all = true;
                for (int x : class_rep(L))
                    if (!Sset.count(table_[table_[inv_[g]][x]][g])) { all = false; break; }
                cnt += all;
            }
            marks_[L][S] = cnt / static_cast<int64_t>(Srep.size());
        }
    }
}

int FiniteGroupBurnside::class_of(const std::vector<int>& subgroup) const {
    std::vector<int> s = subgroup;
    std::sort(s.begin(), s.end());
    for (size_t i = 0; i < subgroups_.size(); ++i)
        if (subgroups_[i] == s) return sub_class_[i];
    throw DomainError("not a subgroup");
}

std::map<int, int64_t> FiniteGroupBurnside::product_by_orbits(int H, int K) const {
    const int N = order();
    const auto& Hs = class_rep(H);
    const auto& Ks = class_rep(K);
    std::vector<char> seen(N, 0);
    std::map<int, int64_t> out;
    for (int g = 0; g < N; ++g) {
        if (seen[g]) continue;
        // double coset H g K
        for (int h : Hs)
            for (int k : Ks) seen[table_[table_[h][g]][k]] = 1;
        std::set<int> gKg;
        for (int k : Ks) gKg.insert(table_[table_[g][k]][inv_[g]]);
        std::vector<int> stab;
        for (int h : Hs)
            if (gKg.count(h)) stab.push_back(h);
        ++out[class_of(stab)];
    }
    return out;
}

std::map<int, int64_t> FiniteGroupBurnside::product_by_marks(int H, int K) const {
    const int C = num_classes();
    std::vector<int64_t> n(C, 0);
    for (int L = C - 1; L >= 0; --L) {
        int64_t rhs = marks_[L][H] * marks_[L][K];
        for (int S = L + 1; S < C; ++S) rhs -= marks_[L][S] * n[S];
        if (rhs % weyl_[L] != 0) throw ConsistencyError("non-integral division in oracle");
        n[L] = rhs / weyl_[L];
    }
    std::map<int, int64_t> out;
    for (int L = 0; L < C; ++L)
        if (n[L]) out[L] = n[L];
    return out;
}

} // namespace equivibe
