#include "wittk/witt.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include <nlohmann/json.hpp>

namespace wittk {

using nlohmann::json;

bool WittVector::operator==(const WittVector& o) const {
    return trunc == o.trunc && ring == o.ring && coeffs == o.coeffs;
}
bool GhostVector::operator==(const GhostVector& o) const {
    return trunc == o.trunc && ring == o.ring && components == o.components;
}

WittVector witt_zero(const TruncationSet& t, const RingDescriptor& ring) {
    WittVector w{t, ring, {}};
    w.coeffs.assign(t.size(), RingElement::zero(ring));
    return w;
}

WittVector witt_one(const TruncationSet& t, const RingDescriptor& ring) {
    return teichmuller(RingElement::one(ring), t);
}

WittVector teichmuller(const RingElement& a, const TruncationSet& t) {
    WittVector w = witt_zero(t, a.ring());
    if (!t.empty()) {
        if (t.indices()[0] != 1) throw DomainError("truncation set lacks index 1");
        w.coeffs[0] = a;
    }
    return w;
}

GhostVector ghost(const WittVector& w) {
    GhostVector g{w.trunc, w.ring, {}};
    g.components.reserve(w.trunc.size());
    for (int n : w.trunc.indices()) {
        RingElement acc = RingElement::zero(w.ring);
        for (int d : w.trunc.indices()) {
            if (d > n) break;
            if (n % d) continue;
            RingElement term = arith_pow(w.at(d), BigInt(n / d));
            acc = acc + RingElement::from_integer(w.ring, d) * term;
        }
        g.components.push_back(std::move(acc));
    }
    return g;
}

WittVector from_ghost(const GhostVector& g) {
    const auto kind = g.ring.kind();
    if (kind != RingKind::Integers &&
        !(kind == RingKind::MultivarPoly &&
          g.ring.poly_base().kind() == RingKind::Integers))
        throw DomainError("from_ghost needs Integers or polynomials over Integers");
    WittVector w = witt_zero(g.trunc, g.ring);
    for (int n : g.trunc.indices()) {
        RingElement rhs = g.at(n);
        for (int d : g.trunc.indices()) {
            if (d >= n) break;
            if (n % d) continue;
            rhs = rhs - RingElement::from_integer(g.ring, d) * arith_pow(w.at(d), BigInt(n / d));
        }
        w.coeffs[w.trunc.position(n)] = divide_exact(rhs, BigInt(n));
    }
    return w;
}

// ---------------------------------------------------------------------------
// Universal polynomials.
//
// Internal representation: flat term lists with variables encoded as
// 2d (X_d) and 2d+1 (Y_d). Because truncation sets are divisor-closed the
// polynomial for index n is independent of the ambient set, so entries are
// keyed by (op, n) alone; Frobenius entries by (n, m). The memo is an
// idempotent table persisted to a versioned JSON file.

namespace {

using UTerm = RawTerm;
using UPoly = RawPoly;

using UMap = std::map<std::vector<std::pair<int, int>>, BigInt>;

UPoly from_umap(UMap m) {
    UPoly p;
    for (auto& [v, c] : m)
        if (c != 0) p.push_back(UTerm{c, v});
    return p;
}

void umap_add(UMap& acc, const UPoly& p, const BigInt& scale) {
    for (auto& t : p) {
        BigInt& slot = acc[t.vars];
        slot += t.coef * scale;
        if (slot == 0) acc.erase(t.vars);
    }
}

std::vector<std::pair<int, int>> vars_mul(const std::vector<std::pair<int, int>>& a,
                                          const std::vector<std::pair<int, int>>& b) {
    std::vector<std::pair<int, int>> r;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first))
            r.push_back(a[i++]);
        else if (i == a.size() || b[j].first < a[i].first)
            r.push_back(b[j++]);
        else {
            r.push_back({a[i].first, a[i].second + b[j].second});
            ++i, ++j;
        }
    }
    return r;
}

UPoly upoly_mul(const UPoly& a, const UPoly& b) {
    UMap acc;
    for (auto& ta : a)
        for (auto& tb : b) {
            auto v = vars_mul(ta.vars, tb.vars);
            BigInt& slot = acc[v];
            slot += ta.coef * tb.coef;
            if (slot == 0) acc.erase(v);
        }
    return from_umap(std::move(acc));
}

UPoly upoly_pow(const UPoly& a, int e) {
    UPoly r{UTerm{1, {}}};
    UPoly base = a;
    while (e > 0) {
        if (e & 1) r = upoly_mul(r, base);
        base = upoly_mul(base, base);
        e >>= 1;
    }
    return r;
}

UPoly upoly_divide_exact(const UPoly& a, long n) {
    UPoly r = a;
    for (auto& t : r) {
        if (t.coef % n != 0)
            throw NonIntegral("universal polynomial inversion hit a non-integral step");
        t.coef /= n;
    }
    return r;
}

// ghost_n in the X (side=0) or Y (side=1) variables
UPoly ghost_poly(int n, int side) {
    UMap acc;
    for (int d = 1; d <= n; ++d) {
        if (n % d) continue;
        std::vector<std::pair<int, int>> v{{2 * d + side, n / d}};
        acc[v] += d;
    }
    return from_umap(std::move(acc));
}

json upoly_to_json(const UPoly& p) {
    json out = json::array();
    for (auto& t : p) {
        json vars = json::array();
        for (auto& [v, e] : t.vars) vars.push_back(json::array({v, e}));
        out.push_back(json::array({t.coef.str(), vars}));
    }
    return out;
}

UPoly upoly_from_json(const json& j) {
    UPoly p;
    for (auto& t : j) {
        UTerm term;
        term.coef = BigInt(t.at(0).get<std::string>());
        for (auto& ve : t.at(1))
            term.vars.push_back({ve.at(0).get<int>(), ve.at(1).get<int>()});
        p.push_back(std::move(term));
    }
    return p;
}

constexpr int kCacheVersion = 1;

class PolyCache {
  public:
    static PolyCache& instance() {
        static PolyCache c;
        return c;
    }

    const UPoly& get(const std::string& key, const std::function<UPoly()>& compute) {
        {
            std::shared_lock lock(mu_);
            auto it = table_.find(key);
            if (it != table_.end()) return it->second;
        }
        UPoly fresh = compute();
        std::unique_lock lock(mu_);
        auto [it, inserted] = table_.emplace(key, std::move(fresh));
        if (inserted) dirty_ = true;
        flush_locked();
        return it->second;
    }

  private:
    PolyCache() { load(); }

    void load() {
        std::string path = poly_cache_path();
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) return;
        try {
            json j = json::parse(in);
            if (j.value("version", 0) != kCacheVersion) return;
            for (auto& [k, v] : j.at("entries").items()) table_[k] = upoly_from_json(v);
        } catch (...) {
            table_.clear();  // corrupt cache files are ignored, not fatal
        }
    }

    void flush_locked() {
        if (!dirty_) return;
        std::string path = poly_cache_path();
        if (path.empty()) return;
        json entries = json::object();
        for (auto& [k, v] : table_) entries[k] = upoly_to_json(v);
        json j{{"version", kCacheVersion}, {"entries", entries}};
        std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) return;
            out << j.dump();
        }
        std::rename(tmp.c_str(), path.c_str());
        dirty_ = false;
    }

    std::shared_mutex mu_;
    std::map<std::string, UPoly> table_;
    bool dirty_ = false;
};

const UPoly& universal_upoly(WittOp op, int n);

UPoly compute_universal(WittOp op, int n) {
    // RHS = ghost_n(X) (op) ghost_n(Y); subtract lower universal terms and
    // divide by n, exactly as ghost inversion over Z[X, Y].
    UMap acc;
    switch (op) {
        case WittOp::Sum:
            umap_add(acc, ghost_poly(n, 0), 1);
            umap_add(acc, ghost_poly(n, 1), 1);
            break;
        case WittOp::Product:
            umap_add(acc, upoly_mul(ghost_poly(n, 0), ghost_poly(n, 1)), 1);
            break;
        case WittOp::Negation:
            umap_add(acc, ghost_poly(n, 0), -1);
            break;
    }
    for (int d = 1; d < n; ++d) {
        if (n % d) continue;
        umap_add(acc, upoly_pow(universal_upoly(op, d), n / d), -d);
    }
    return upoly_divide_exact(from_umap(std::move(acc)), n);
}

const UPoly& universal_upoly(WittOp op, int n) {
    const char* tag = op == WittOp::Sum ? "S" : op == WittOp::Product ? "P" : "N";
    std::string key = std::string(tag) + ":" + std::to_string(n);
    return PolyCache::instance().get(key, [&] { return compute_universal(op, n); });
}

const UPoly& frobenius_upoly(int n, int m);

UPoly compute_frobenius(int n, int m) {
    // ghost_m(F_n w) = ghost_{nm}(w); invert over the X variables.
    UMap acc;
    umap_add(acc, ghost_poly(n * m, 0), 1);
    for (int d = 1; d < m; ++d) {
        if (m % d) continue;
        umap_add(acc, upoly_pow(frobenius_upoly(n, d), m / d), -d);
    }
    return upoly_divide_exact(from_umap(std::move(acc)), m);
}

const UPoly& frobenius_upoly(int n, int m) {
    std::string key = "F:" + std::to_string(n) + ":" + std::to_string(m);
    return PolyCache::instance().get(key, [&] { return compute_frobenius(n, m); });
}

// Evaluate a universal polynomial; inputs[c] is the element bound to var
// code c (2d for X_d, 2d+1 for Y_d). Power tables amortize exponentiation.
RingElement upoly_eval(const UPoly& p, const RingDescriptor& ring,
                       const std::vector<const RingElement*>& inputs) {
    std::vector<std::vector<RingElement>> powers(inputs.size());
    auto power = [&](int var, int e) -> const RingElement& {
        auto& tab = powers[var];
        if (tab.empty()) tab.push_back(RingElement::one(ring));
        while (static_cast<int>(tab.size()) <= e) tab.push_back(tab.back() * (*inputs[var]));
        return tab[e];
    };
    RingElement acc = RingElement::zero(ring);
    for (auto& t : p) {
        RingElement term = RingElement::from_integer(ring, t.coef);
        if (term.is_zero()) continue;
        for (auto& [v, e] : t.vars) term = term * power(v, e);
        acc = acc + term;
    }
    return acc;
}

void check_compatible(const WittVector& a, const WittVector& b) {
    if (a.ring != b.ring) throw DescriptorMismatch("Witt vectors over different rings");
    if (a.trunc != b.trunc) throw DescriptorMismatch("Witt vectors over different truncation sets");
}

WittVector binary_op(const WittVector& a, const WittVector& b, WittOp op) {
    check_compatible(a, b);
    WittVector out = witt_zero(a.trunc, a.ring);
    const int maxn = a.trunc.max_index();
    std::vector<const RingElement*> inputs(2 * maxn + 2, nullptr);
    for (int d : a.trunc.indices()) {
        inputs[2 * d] = &a.at(d);
        inputs[2 * d + 1] = &b.at(d);
    }
    for (int n : a.trunc.indices())
        out.coeffs[a.trunc.position(n)] = upoly_eval(universal_upoly(op, n), a.ring, inputs);
    return out;
}

}  // namespace

const RawPoly& universal_terms(WittOp op, int n) { return universal_upoly(op, n); }
const RawPoly& frobenius_terms(int n, int m) { return frobenius_upoly(n, m); }

std::string poly_cache_path() {
    if (const char* env = std::getenv("WITTK_POLY_CACHE")) return std::string(env);
    return ".wittk-poly-cache.json";
}

std::map<int, RingElement> universal_polys(const TruncationSet& t, WittOp op) {
    // Public view: polynomials over Z in named variables X1..Xm, Y1..Ym.
    const int maxn = t.max_index();
    std::vector<std::string> names;
    for (int d = 1; d <= maxn; ++d) names.push_back("X" + std::to_string(d));
    for (int d = 1; d <= maxn; ++d) names.push_back("Y" + std::to_string(d));
    RingDescriptor poly = RingDescriptor::multivar_poly(RingDescriptor::integers(), names);
    std::map<int, RingElement> out;
    for (int n : t.indices()) {
        PolyTerms terms;
        for (auto& term : universal_upoly(op, n)) {
            Monomial m;
            for (auto& [v, e] : term.vars) {
                int d = v / 2;
                std::uint32_t idx = (v % 2 == 0) ? (d - 1) : (maxn + d - 1);
                m.factors.push_back({idx, static_cast<std::uint32_t>(e)});
            }
            std::sort(m.factors.begin(), m.factors.end());
            terms[m] = term.coef;
        }
        out.emplace(n, RingElement::poly_from_terms(poly, std::move(terms)));
    }
    return out;
}

std::map<int, RingElement> universal_frobenius_polys(const TruncationSet& t, int n) {
    const int maxn = t.max_index();
    std::vector<std::string> names;
    for (int d = 1; d <= maxn; ++d) names.push_back("X" + std::to_string(d));
    RingDescriptor poly = RingDescriptor::multivar_poly(RingDescriptor::integers(), names);
    std::map<int, RingElement> out;
    for (int m : t.divided(n).indices()) {
        PolyTerms terms;
        for (auto& term : frobenius_upoly(n, m)) {
            Monomial mono;
            for (auto& [v, e] : term.vars)
                mono.factors.push_back({static_cast<std::uint32_t>(v / 2 - 1),
                                        static_cast<std::uint32_t>(e)});
            std::sort(mono.factors.begin(), mono.factors.end());
            terms[mono] = term.coef;
        }
        out.emplace(m, RingElement::poly_from_terms(poly, std::move(terms)));
    }
    return out;
}

WittVector witt_add(const WittVector& a, const WittVector& b) {
    return binary_op(a, b, WittOp::Sum);
}

WittVector witt_mul(const WittVector& a, const WittVector& b) {
    return binary_op(a, b, WittOp::Product);
}

WittVector witt_neg(const WittVector& a) {
    WittVector out = witt_zero(a.trunc, a.ring);
    const int maxn = a.trunc.max_index();
    std::vector<const RingElement*> inputs(2 * maxn + 2, nullptr);
    for (int d : a.trunc.indices()) inputs[2 * d] = &a.at(d);
    for (int n : a.trunc.indices())
        out.coeffs[a.trunc.position(n)] =
            upoly_eval(universal_upoly(WittOp::Negation, n), a.ring, inputs);
    return out;
}

WittVector witt_sub(const WittVector& a, const WittVector& b) {
    return witt_add(a, witt_neg(b));
}

WittVector witt_scalar_mul(const BigInt& n, const WittVector& w) {
    if (n < 0) return witt_neg(witt_scalar_mul(-n, w));
    WittVector acc = witt_zero(w.trunc, w.ring);
    WittVector base = w;
    BigInt e = n;
    while (e > 0) {
        if ((e & 1) != 0) acc = witt_add(acc, base);
        e >>= 1;
        if (e > 0) base = witt_add(base, base);
    }
    return acc;
}

WittVector verschiebung(int n, const WittVector& w, const TruncationSet& target) {
    if (n < 1) throw DomainError("verschiebung requires n >= 1");
    if (!w.trunc.scaled(n).is_subset_of(target))
        throw DomainError("verschiebung: target set does not contain n*S");
    WittVector out = witt_zero(target, w.ring);
    for (int d : w.trunc.indices()) out.coeffs[target.position(n * d)] = w.at(d);
    return out;
}

WittVector frobenius(int n, const WittVector& w) {
    if (n < 1) throw DomainError("frobenius requires n >= 1");
    TruncationSet target = w.trunc.divided(n);
    WittVector out = witt_zero(target, w.ring);
    const int maxn = w.trunc.max_index();
    std::vector<const RingElement*> inputs(2 * maxn + 2, nullptr);
    for (int d : w.trunc.indices()) inputs[2 * d] = &w.at(d);
    for (int m : target.indices())
        out.coeffs[target.position(m)] = upoly_eval(frobenius_upoly(n, m), w.ring, inputs);
    return out;
}

WittVector restriction(const WittVector& w, const TruncationSet& sub) {
    if (!sub.is_subset_of(w.trunc))
        throw DomainError("restriction target is not a subset");
    WittVector out = witt_zero(sub, w.ring);
    for (int d : sub.indices()) out.coeffs[sub.position(d)] = w.at(d);
    return out;
}

std::uint64_t witt_count(const TruncationSet& t, const RingDescriptor& ring,
                         std::uint64_t cap) {
    if (!ring.is_finite()) throw DomainError("enumerate_witt: infinite ring");
    BigInt total = pow_big(ring.cardinality(), static_cast<unsigned long>(t.size()));
    if (total > cap) throw CapExceeded("Witt vector enumeration exceeds cap");
    return total.convert_to<std::uint64_t>();
}

WittVector witt_decode(const TruncationSet& t, const RingDescriptor& ring,
                       std::uint64_t index) {
    const std::uint64_t card = ring.cardinality().convert_to<std::uint64_t>();
    WittVector w = witt_zero(t, ring);
    for (size_t i = 0; i < t.size(); ++i) {
        w.coeffs[i] = ring_decode(ring, index % card);
        index /= card;
    }
    return w;
}

void enumerate_witt(const TruncationSet& t, const RingDescriptor& ring,
                    const std::function<void(const WittVector&)>& fn, std::uint64_t cap) {
    const std::uint64_t n = witt_count(t, ring, cap);
    for (std::uint64_t i = 0; i < n; ++i) fn(witt_decode(t, ring, i));
}

// ---------------------------------------------------------------------------
// Plain-integer fast path

namespace zfast {

namespace {

BigInt upoly_eval_z(const UPoly& p, const std::vector<const BigInt*>& inputs) {
    std::vector<std::vector<BigInt>> powers(inputs.size());
    auto power = [&](int var, int e) -> const BigInt& {
        auto& tab = powers[var];
        if (tab.empty()) tab.push_back(BigInt(1));
        while (static_cast<int>(tab.size()) <= e) tab.push_back(tab.back() * (*inputs[var]));
        return tab[e];
    };
    BigInt acc = 0;
    for (auto& t : p) {
        BigInt term = t.coef;
        for (auto& [v, e] : t.vars) term *= power(v, e);
        acc += term;
    }
    return acc;
}

std::vector<const BigInt*> bind_xy(const TruncationSet& t, const std::vector<BigInt>& a,
                                   const std::vector<BigInt>& b) {
    std::vector<const BigInt*> inputs(2 * t.max_index() + 2, nullptr);
    const auto& idx = t.indices();
    for (size_t i = 0; i < idx.size(); ++i) {
        inputs[2 * idx[i]] = &a[i];
        if (!b.empty()) inputs[2 * idx[i] + 1] = &b[i];
    }
    return inputs;
}

}  // namespace

std::vector<BigInt> witt_add(const TruncationSet& t, const std::vector<BigInt>& a,
                             const std::vector<BigInt>& b) {
    auto inputs = bind_xy(t, a, b);
    std::vector<BigInt> out(t.size());
    const auto& idx = t.indices();
    for (size_t i = 0; i < idx.size(); ++i)
        out[i] = upoly_eval_z(universal_upoly(WittOp::Sum, idx[i]), inputs);
    return out;
}

std::vector<BigInt> witt_mul(const TruncationSet& t, const std::vector<BigInt>& a,
                             const std::vector<BigInt>& b) {
    auto inputs = bind_xy(t, a, b);
    std::vector<BigInt> out(t.size());
    const auto& idx = t.indices();
    for (size_t i = 0; i < idx.size(); ++i)
        out[i] = upoly_eval_z(universal_upoly(WittOp::Product, idx[i]), inputs);
    return out;
}

std::vector<BigInt> ghost(const TruncationSet& t, const std::vector<BigInt>& x) {
    const auto& idx = t.indices();
    std::vector<BigInt> out(t.size());
    for (size_t i = 0; i < idx.size(); ++i) {
        BigInt acc = 0;
        for (size_t j = 0; j <= i; ++j) {
            if (idx[i] % idx[j]) continue;
            BigInt pw = 1;
            for (int k = 0; k < idx[i] / idx[j]; ++k) pw *= x[j];
            acc += idx[j] * pw;
        }
        out[i] = acc;
    }
    return out;
}

std::vector<BigInt> frobenius(const TruncationSet& t, int n, const std::vector<BigInt>& x) {
    auto inputs = bind_xy(t, x, {});
    TruncationSet target = t.divided(n);
    std::vector<BigInt> out(target.size());
    const auto& idx = target.indices();
    for (size_t i = 0; i < idx.size(); ++i)
        out[i] = upoly_eval_z(frobenius_upoly(n, idx[i]), inputs);
    return out;
}

std::vector<BigInt> verschiebung(const TruncationSet& t, int n, const std::vector<BigInt>& x,
                                 const TruncationSet& target) {
    if (!t.scaled(n).is_subset_of(target))
        throw DomainError("verschiebung: target set does not contain n*S");
    std::vector<BigInt> out(target.size(), BigInt(0));
    const auto& idx = t.indices();
    for (size_t i = 0; i < idx.size(); ++i) out[target.position(n * idx[i])] = x[i];
    return out;
}

}  // namespace zfast

// ---------------------------------------------------------------------------
// Serialization

std::vector<std::uint64_t> WittVector::code() const {
    std::vector<std::uint64_t> c;
    c.reserve(coeffs.size());
    for (auto& e : coeffs) c.push_back(e.code());
    return c;
}

json WittVector::to_json() const {
    json coeffs_json = json::object();
    for (int n : trunc.indices()) coeffs_json[std::to_string(n)] = at(n).to_json();
    return json{{"trunc", trunc.indices()}, {"ring", ring.to_json()}, {"coeffs", coeffs_json}};
}

WittVector WittVector::from_json(const json& j) {
    TruncationSet t = TruncationSet::from_indices(j.at("trunc").get<std::vector<int>>());
    RingDescriptor ring = RingDescriptor::from_json(j.at("ring"));
    WittVector w = witt_zero(t, ring);
    for (int n : t.indices())
        w.coeffs[t.position(n)] =
            RingElement::from_json(ring, j.at("coeffs").at(std::to_string(n)));
    return w;
}

std::string WittVector::to_string() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (i) os << ", ";
        os << coeffs[i].to_string();
    }
    os << ")";
    return os.str();
}

json GhostVector::to_json() const {
    json comp = json::object();
    for (int n : trunc.indices()) comp[std::to_string(n)] = at(n).to_json();
    return json{{"trunc", trunc.indices()}, {"ring", ring.to_json()}, {"components", comp}};
}

std::string GhostVector::to_string() const {
    std::ostringstream os;
    os << "<";
    for (size_t i = 0; i < components.size(); ++i) {
        if (i) os << ", ";
        os << components[i].to_string();
    }
    os << ">";
    return os.str();
}

}  // namespace wittk
