#include "wittk/rings.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

namespace wittk {

using nlohmann::json;

// ---------------------------------------------------------------------------
// RingDescriptor

RingDescriptor::RingDescriptor()
    : data_(std::make_shared<detail::RingData>()) {}

RingDescriptor RingDescriptor::integers() { return RingDescriptor(); }

RingDescriptor RingDescriptor::integers_mod(const BigInt& m) {
    if (m < 2) throw DomainError("IntegersMod requires m >= 2");
    auto d = std::make_shared<detail::RingData>();
    d->kind = RingKind::IntegersMod;
    d->modulus = m;
    if (m < (1ll << 40)) d->prime_modulus = is_prime_u64(m.convert_to<std::uint64_t>());
    return RingDescriptor(std::move(d));
}

RingDescriptor RingDescriptor::prime_field(long p) {
    if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p)))
        throw DomainError("PrimeField requires a prime");
    return integers_mod(BigInt(p));
}

RingDescriptor RingDescriptor::finite_field(long p, int f, std::vector<int> modulus) {
    if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p)))
        throw DomainError("FiniteField characteristic must be prime");
    if (f < 1) throw DomainError("FiniteField degree must be >= 1");
    double size = std::pow(static_cast<double>(p), f);
    if (size > static_cast<double>(1 << 20))
        throw CapExceeded("FiniteField supports p^f <= 2^20");
    if (modulus.empty()) modulus = default_ff_modulus(p, f);
    if (static_cast<int>(modulus.size()) != f + 1 || modulus[f] != 1)
        throw DomainError("FiniteField modulus must be monic of degree f");
    for (int& c : modulus) c = ((c % static_cast<int>(p)) + static_cast<int>(p)) % static_cast<int>(p);
    modulus[f] = 1;
    if (!poly_is_irreducible_mod_p(modulus, p))
        throw DomainError("FiniteField modulus is reducible over F_p");
    auto d = std::make_shared<detail::RingData>();
    d->kind = RingKind::FiniteField;
    d->p = p;
    d->f = f;
    d->ff_modulus = std::move(modulus);
    return RingDescriptor(std::move(d));
}

RingDescriptor RingDescriptor::multivar_poly(const RingDescriptor& base,
                                             std::vector<std::string> vars) {
    if (base.kind() == RingKind::MultivarPoly)
        throw DomainError("nested polynomial rings are not supported");
    auto d = std::make_shared<detail::RingData>();
    d->kind = RingKind::MultivarPoly;
    d->base = base.data_;
    d->vars = std::move(vars);
    return RingDescriptor(std::move(d));
}

long RingDescriptor::char_p() const {
    switch (kind()) {
        case RingKind::FiniteField:
            return data_->p;
        case RingKind::IntegersMod: {
            // characteristic of Z/m as a prime only when m is a prime power
            BigInt m = data_->modulus;
            for (long p = 2; BigInt(p) * p <= m; ++p) {
                if (m % p == 0) {
                    BigInt q = m;
                    while (q % p == 0) q /= p;
                    return q == 1 ? p : 0;
                }
            }
            return data_->prime_modulus ? data_->modulus.convert_to<long>() : 0;
        }
        default:
            return 0;
    }
}

RingDescriptor RingDescriptor::poly_base() const {
    if (kind() != RingKind::MultivarPoly) throw DomainError("not a polynomial ring");
    return RingDescriptor(data_->base);
}

bool RingDescriptor::is_finite() const {
    return kind() == RingKind::IntegersMod || kind() == RingKind::FiniteField;
}

BigInt RingDescriptor::cardinality() const {
    switch (kind()) {
        case RingKind::IntegersMod:
            return data_->modulus;
        case RingKind::FiniteField:
            return pow_big(BigInt(data_->p), static_cast<unsigned long>(data_->f));
        default:
            throw DomainError("infinite ring has no cardinality");
    }
}

bool RingDescriptor::operator==(const RingDescriptor& o) const {
    if (data_ == o.data_) return true;
    if (kind() != o.kind()) return false;
    switch (kind()) {
        case RingKind::Integers:
            return true;
        case RingKind::IntegersMod:
            return data_->modulus == o.data_->modulus;
        case RingKind::FiniteField:
            return data_->p == o.data_->p && data_->f == o.data_->f &&
                   data_->ff_modulus == o.data_->ff_modulus;
        case RingKind::MultivarPoly:
            return RingDescriptor(data_->base) == RingDescriptor(o.data_->base) &&
                   data_->vars == o.data_->vars;
    }
    return false;
}

std::string RingDescriptor::to_string() const {
    switch (kind()) {
        case RingKind::Integers:
            return "Z";
        case RingKind::IntegersMod:
            return "Z/" + data_->modulus.str();
        case RingKind::FiniteField:
            return "GF(" + std::to_string(data_->p) +
                   (data_->f > 1 ? "^" + std::to_string(data_->f) : "") + ")";
        case RingKind::MultivarPoly: {
            std::string s = RingDescriptor(data_->base).to_string() + "[";
            for (size_t i = 0; i < data_->vars.size(); ++i) {
                if (i) s += ",";
                s += data_->vars[i];
            }
            return s + "]";
        }
    }
    return "?";
}

json RingDescriptor::to_json() const {
    switch (kind()) {
        case RingKind::Integers:
            return json{{"ring", "Z"}};
        case RingKind::IntegersMod:
            if (data_->modulus <= BigInt((1ll << 53)))
                return json{{"ring", "Zmod"}, {"m", data_->modulus.convert_to<std::int64_t>()}};
            return json{{"ring", "Zmod"}, {"m", data_->modulus.str()}};
        case RingKind::FiniteField:
            return json{{"ring", "GF"},
                        {"p", data_->p},
                        {"f", data_->f},
                        {"modulus", data_->ff_modulus}};
        case RingKind::MultivarPoly: {
            json base = RingDescriptor(data_->base).to_json();
            return json{{"ring", "Poly"}, {"base", base}, {"vars", data_->vars}};
        }
    }
    return {};
}

RingDescriptor RingDescriptor::from_json(const json& j) {
    const std::string kind = j.at("ring").get<std::string>();
    if (kind == "Z") return integers();
    if (kind == "Zmod") {
        const auto& m = j.at("m");
        if (m.is_string()) return integers_mod(BigInt(m.get<std::string>()));
        return integers_mod(BigInt(m.get<std::int64_t>()));
    }
    if (kind == "GF") {
        std::vector<int> modulus;
        if (j.contains("modulus")) modulus = j.at("modulus").get<std::vector<int>>();
        return finite_field(j.at("p").get<long>(), j.at("f").get<int>(), modulus);
    }
    if (kind == "Poly") {
        return multivar_poly(from_json(j.at("base")),
                             j.at("vars").get<std::vector<std::string>>());
    }
    throw DomainError("unknown ring kind: " + kind);
}

// ---------------------------------------------------------------------------
// Monomials

long Monomial::total_degree() const {
    long d = 0;
    for (auto& [v, e] : factors) d += e;
    return d;
}

bool MonomialCmp::operator()(const Monomial& a, const Monomial& b) const {
    long da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    return a.factors < b.factors;
}

// ---------------------------------------------------------------------------
// Finite field internals (coeff vectors mod p, reduced by the monic modulus)

namespace {

std::vector<int> ff_add(const std::vector<int>& a, const std::vector<int>& b, long p) {
    std::vector<int> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<int>((a[i] + b[i]) % p);
    return r;
}

std::vector<int> ff_sub(const std::vector<int>& a, const std::vector<int>& b, long p) {
    std::vector<int> r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = static_cast<int>(((a[i] - b[i]) % p + p) % p);
    return r;
}

std::vector<int> ff_mul(const std::vector<int>& a, const std::vector<int>& b, long p,
                        const std::vector<int>& modulus) {
    const int f = static_cast<int>(a.size());
    std::vector<long long> prod(2 * f - 1, 0);
    for (int i = 0; i < f; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j < f; ++j) prod[i + j] += static_cast<long long>(a[i]) * b[j];
    }
    for (auto& c : prod) c %= p;
    // reduce by the monic modulus: x^f = -(m_0 + ... + m_{f-1} x^{f-1})
    for (int d = 2 * f - 2; d >= f; --d) {
        long long lead = prod[d] % p;
        if (!lead) continue;
        prod[d] = 0;
        for (int j = 0; j < f; ++j)
            prod[d - f + j] = (prod[d - f + j] - lead * modulus[j]) % p;
    }
    std::vector<int> r(f);
    for (int i = 0; i < f; ++i) r[i] = static_cast<int>(((prod[i] % p) + p) % p);
    return r;
}

bool ff_is_zero(const std::vector<int>& a) {
    return std::all_of(a.begin(), a.end(), [](int c) { return c == 0; });
}

// Monic-divisor remainder over F_p; used by the exhaustive factor check.
std::vector<int> polymod_rem(std::vector<int> a, const std::vector<int>& m, long p) {
    // m monic
    const int dm = static_cast<int>(m.size()) - 1;
    while (static_cast<int>(a.size()) - 1 >= dm && !a.empty()) {
        if (a.back() == 0) {
            a.pop_back();
            continue;
        }
        long long lead = a.back();
        int shift = static_cast<int>(a.size()) - 1 - dm;
        for (int j = 0; j <= dm; ++j)
            a[shift + j] = static_cast<int>((((a[shift + j] - lead * m[j]) % p) + p) % p);
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    return a;
}

}  // namespace

bool poly_is_irreducible_mod_p(const std::vector<int>& monic, long p) {
    const int f = static_cast<int>(monic.size()) - 1;
    if (f < 1) return false;
    if (f == 1) return true;
    // no roots in F_p
    for (long a = 0; a < p; ++a) {
        long long v = 0, pw = 1;
        for (int j = 0; j <= f; ++j) {
            v = (v + monic[j] * pw) % p;
            pw = (pw * a) % p;
        }
        if (v == 0) return false;
    }
    if (f <= 3) return true;  // no roots and degree <= 3 implies irreducible
    // trial division by every monic polynomial of degree 2..f/2
    for (int d = 2; d <= f / 2; ++d) {
        std::uint64_t count = 1;
        for (int i = 0; i < d; ++i) count *= static_cast<std::uint64_t>(p);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::vector<int> div(d + 1);
            std::uint64_t t = idx;
            for (int i = 0; i < d; ++i) {
                div[i] = static_cast<int>(t % p);
                t /= p;
            }
            div[d] = 1;
            if (polymod_rem(monic, div, p).empty()) return false;
        }
    }
    return true;
}

std::vector<int> default_ff_modulus(long p, int f) {
    static std::mutex mu;
    static std::map<std::pair<long, int>, std::vector<int>> table;
    std::lock_guard<std::mutex> lock(mu);
    auto it = table.find({p, f});
    if (it != table.end()) return it->second;
    // smallest monic polynomial (low coefficients read as a base-p integer)
    // that is irreducible; deterministic and cheap to regenerate
    std::uint64_t count = 1;
    for (int i = 0; i < f; ++i) count *= static_cast<std::uint64_t>(p);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<int> cand(f + 1);
        std::uint64_t t = idx;
        for (int i = 0; i < f; ++i) {
            cand[i] = static_cast<int>(t % p);
            t /= p;
        }
        cand[f] = 1;
        if (poly_is_irreducible_mod_p(cand, p)) {
            table[{p, f}] = cand;
            return cand;
        }
    }
    throw DomainError("no irreducible polynomial found");  // unreachable
}

// ---------------------------------------------------------------------------
// RingElement

RingElement RingElement::from_integer(const RingDescriptor& ring, const BigInt& v) {
    RingElement e;
    e.ring_ = ring;
    switch (ring.kind()) {
        case RingKind::Integers:
            e.payload_ = v;
            return e;
        case RingKind::IntegersMod: {
            BigInt r = v % ring.modulus();
            if (r < 0) r += ring.modulus();
            e.payload_ = r;
            return e;
        }
        case RingKind::FiniteField: {
            BigInt r = v % ring.ff_p();
            if (r < 0) r += ring.ff_p();
            std::vector<int> c(ring.ff_f(), 0);
            c[0] = r.convert_to<int>();
            e.payload_ = std::move(c);
            return e;
        }
        case RingKind::MultivarPoly: {
            PolyTerms t;
            RingElement cv = RingElement::from_integer(ring.poly_base(), v);
            if (!cv.is_zero()) t[Monomial{}] = cv.integer_value();
            e.payload_ = std::move(t);
            return e;
        }
    }
    throw DomainError("bad ring");
}

RingElement RingElement::ff_from_coeffs(const RingDescriptor& ring, std::vector<int> coeffs) {
    if (ring.kind() != RingKind::FiniteField) throw DescriptorMismatch("not a finite field");
    const long p = ring.ff_p();
    coeffs.resize(ring.ff_f(), 0);
    for (int& c : coeffs) c = static_cast<int>(((c % p) + p) % p);
    RingElement e;
    e.ring_ = ring;
    e.payload_ = std::move(coeffs);
    return e;
}

RingElement RingElement::poly_from_terms(const RingDescriptor& ring, PolyTerms terms) {
    if (ring.kind() != RingKind::MultivarPoly) throw DescriptorMismatch("not a poly ring");
    RingDescriptor base = ring.poly_base();
    for (auto it = terms.begin(); it != terms.end();) {
        if (base.kind() == RingKind::IntegersMod) {
            BigInt r = it->second % base.modulus();
            if (r < 0) r += base.modulus();
            it->second = r;
        }
        if (it->second == 0)
            it = terms.erase(it);
        else
            ++it;
    }
    RingElement e;
    e.ring_ = ring;
    e.payload_ = std::move(terms);
    return e;
}

RingElement RingElement::zero(const RingDescriptor& ring) {
    return from_integer(ring, 0);
}
RingElement RingElement::one(const RingDescriptor& ring) {
    return from_integer(ring, 1);
}

bool RingElement::is_zero() const {
    switch (ring_.kind()) {
        case RingKind::Integers:
        case RingKind::IntegersMod:
            return std::get<BigInt>(payload_) == 0;
        case RingKind::FiniteField:
            return ff_is_zero(std::get<std::vector<int>>(payload_));
        case RingKind::MultivarPoly:
            return std::get<PolyTerms>(payload_).empty();
    }
    return false;
}

bool RingElement::is_one() const { return *this == one(ring_); }

const BigInt& RingElement::integer_value() const {
    if (!std::holds_alternative<BigInt>(payload_))
        throw DescriptorMismatch("element has no integer payload");
    return std::get<BigInt>(payload_);
}

const std::vector<int>& RingElement::ff_coeffs() const {
    if (!std::holds_alternative<std::vector<int>>(payload_))
        throw DescriptorMismatch("element has no field payload");
    return std::get<std::vector<int>>(payload_);
}

const PolyTerms& RingElement::poly_terms() const {
    if (!std::holds_alternative<PolyTerms>(payload_))
        throw DescriptorMismatch("element has no polynomial payload");
    return std::get<PolyTerms>(payload_);
}

bool RingElement::operator==(const RingElement& o) const {
    return ring_ == o.ring_ && payload_ == o.payload_;
}

std::uint64_t RingElement::code() const {
    switch (ring_.kind()) {
        case RingKind::IntegersMod:
            return integer_value().convert_to<std::uint64_t>();
        case RingKind::FiniteField: {
            const auto& c = ff_coeffs();
            std::uint64_t v = 0;
            for (int i = ring_.ff_f() - 1; i >= 0; --i)
                v = v * static_cast<std::uint64_t>(ring_.ff_p()) + c[i];
            return v;
        }
        default:
            throw DomainError("code() requires a finite ring");
    }
}

// ---------------------------------------------------------------------------
// Arithmetic

namespace {

PolyTerms poly_add(const PolyTerms& a, const PolyTerms& b, const RingDescriptor& base, int sign) {
    PolyTerms r = a;
    for (auto& [m, c] : b) {
        BigInt& slot = r[m];
        slot += sign > 0 ? c : -c;
        if (base.kind() == RingKind::IntegersMod) {
            slot %= base.modulus();
            if (slot < 0) slot += base.modulus();
        }
        if (slot == 0) r.erase(m);
    }
    return r;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() ||
            (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
            r.factors.push_back(a.factors[i++]);
        } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
            r.factors.push_back(b.factors[j++]);
        } else {
            r.factors.push_back({a.factors[i].first, a.factors[i].second + b.factors[j].second});
            ++i;
            ++j;
        }
    }
    return r;
}

PolyTerms poly_mul(const PolyTerms& a, const PolyTerms& b, const RingDescriptor& base) {
    PolyTerms r;
    for (auto& [ma, ca] : a) {
        for (auto& [mb, cb] : b) {
            Monomial m = mono_mul(ma, mb);
            BigInt& slot = r[m];
            slot += ca * cb;
            if (base.kind() == RingKind::IntegersMod) {
                slot %= base.modulus();
                if (slot < 0) slot += base.modulus();
            }
            if (slot == 0) r.erase(m);
        }
    }
    return r;
}

}  // namespace

RingElement arith(ArithOp op, const RingElement& a, const RingElement& b) {
    if (op == ArithOp::Pow) throw DomainError("use arith_pow for exponentiation");
    if (op != ArithOp::Neg && a.ring() != b.ring())
        throw DescriptorMismatch("operands in different rings: " + a.ring().to_string() +
                                 " vs " + b.ring().to_string());
    const RingDescriptor& ring = a.ring();
    switch (ring.kind()) {
        case RingKind::Integers: {
            const BigInt& x = a.integer_value();
            switch (op) {
                case ArithOp::Add: return RingElement::from_integer(ring, x + b.integer_value());
                case ArithOp::Sub: return RingElement::from_integer(ring, x - b.integer_value());
                case ArithOp::Mul: return RingElement::from_integer(ring, x * b.integer_value());
                case ArithOp::Neg: return RingElement::from_integer(ring, -x);
                default: break;
            }
            break;
        }
        case RingKind::IntegersMod: {
            const BigInt& m = ring.modulus();
            const BigInt& x = a.integer_value();
            switch (op) {
                case ArithOp::Add: return RingElement::from_integer(ring, x + b.integer_value());
                case ArithOp::Sub: return RingElement::from_integer(ring, x - b.integer_value() + m);
                case ArithOp::Mul: return RingElement::from_integer(ring, x * b.integer_value());
                case ArithOp::Neg: return RingElement::from_integer(ring, m - x);
                default: break;
            }
            break;
        }
        case RingKind::FiniteField: {
            const long p = ring.ff_p();
            const auto& x = a.ff_coeffs();
            switch (op) {
                case ArithOp::Add:
                    return RingElement::ff_from_coeffs(ring, ff_add(x, b.ff_coeffs(), p));
                case ArithOp::Sub:
                    return RingElement::ff_from_coeffs(ring, ff_sub(x, b.ff_coeffs(), p));
                case ArithOp::Mul:
                    return RingElement::ff_from_coeffs(
                        ring, ff_mul(x, b.ff_coeffs(), p, ring.ff_modulus()));
                case ArithOp::Neg:
                    return RingElement::ff_from_coeffs(ring, ff_sub(std::vector<int>(x.size(), 0), x, p));
                default: break;
            }
            break;
        }
        case RingKind::MultivarPoly: {
            RingDescriptor base = ring.poly_base();
            switch (op) {
                case ArithOp::Add:
                    return RingElement::poly_from_terms(ring, poly_add(a.poly_terms(), b.poly_terms(), base, +1));
                case ArithOp::Sub:
                    return RingElement::poly_from_terms(ring, poly_add(a.poly_terms(), b.poly_terms(), base, -1));
                case ArithOp::Mul:
                    return RingElement::poly_from_terms(ring, poly_mul(a.poly_terms(), b.poly_terms(), base));
                case ArithOp::Neg:
                    return RingElement::poly_from_terms(ring, poly_add(PolyTerms{}, a.poly_terms(), base, -1));
                default: break;
            }
            break;
        }
    }
    throw DomainError("unsupported arithmetic operation");
}

RingElement arith_pow(const RingElement& a, const BigInt& exp) {
    if (exp < 0) throw DomainError("pow requires a non-negative exponent");
    RingElement r = RingElement::one(a.ring());
    RingElement base = a;
    BigInt e = exp;
    while (e > 0) {
        if ((e & 1) != 0) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

RingElement divide_exact(const RingElement& a, const BigInt& n) {
    if (n <= 0) throw DomainError("divide_exact requires n >= 1");
    switch (a.ring().kind()) {
        case RingKind::Integers: {
            const BigInt& v = a.integer_value();
            if (v % n != 0) throw NonIntegral("divide_exact: " + v.str() + " not divisible by " + n.str());
            return RingElement::from_integer(a.ring(), v / n);
        }
        case RingKind::MultivarPoly: {
            if (a.ring().poly_base().kind() != RingKind::Integers)
                throw DomainError("divide_exact requires a torsion-free ring");
            PolyTerms out;
            for (auto& [m, c] : a.poly_terms()) {
                if (c % n != 0)
                    throw NonIntegral("divide_exact: coefficient " + c.str() + " not divisible by " + n.str());
                out[m] = c / n;
            }
            return RingElement::poly_from_terms(a.ring(), std::move(out));
        }
        default:
            throw DomainError("divide_exact requires a torsion-free ring");
    }
}

std::optional<long> p_valuation(const RingElement& a, long p) {
    if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p)))
        throw DomainError("p_valuation requires a prime");
    switch (a.ring().kind()) {
        case RingKind::Integers:
            return p_valuation_of(a.integer_value(), p);
        case RingKind::IntegersMod: {
            BigInt m = a.ring().modulus();
            long M = 0;
            while (m % p == 0) {
                m /= p;
                ++M;
            }
            if (m != 1) throw DomainError("p_valuation: modulus is not a power of p");
            if (a.is_zero()) return std::nullopt;
            auto v = p_valuation_of(a.integer_value(), p);
            return std::min<long>(*v, M);
        }
        default:
            throw DomainError("p_valuation needs Integers or IntegersMod(p^M)");
    }
}

std::uint64_t ring_cardinality_u64(const RingDescriptor& ring, std::uint64_t cap) {
    if (!ring.is_finite()) throw DomainError("enumerate: infinite ring");
    BigInt n = ring.cardinality();
    if (n > cap) throw CapExceeded("ring cardinality exceeds cap");
    return n.convert_to<std::uint64_t>();
}

RingElement ring_decode(const RingDescriptor& ring, std::uint64_t index) {
    switch (ring.kind()) {
        case RingKind::IntegersMod:
            return RingElement::from_integer(ring, BigInt(index));
        case RingKind::FiniteField: {
            std::vector<int> c(ring.ff_f());
            for (int i = 0; i < ring.ff_f(); ++i) {
                c[i] = static_cast<int>(index % ring.ff_p());
                index /= ring.ff_p();
            }
            return RingElement::ff_from_coeffs(ring, std::move(c));
        }
        default:
            throw DomainError("decode: infinite ring");
    }
}

void enumerate_ring(const RingDescriptor& ring,
                    const std::function<void(const RingElement&)>& fn,
                    std::uint64_t cap) {
    std::uint64_t n = ring_cardinality_u64(ring, cap);
    for (std::uint64_t i = 0; i < n; ++i) fn(ring_decode(ring, i));
}

// ---------------------------------------------------------------------------
// Printing / JSON

std::string RingElement::to_string() const {
    switch (ring_.kind()) {
        case RingKind::Integers:
        case RingKind::IntegersMod:
            return integer_value().str();
        case RingKind::FiniteField: {
            const auto& c = ff_coeffs();
            std::ostringstream os;
            bool first = true;
            for (size_t i = 0; i < c.size(); ++i) {
                if (!c[i]) continue;
                if (!first) os << "+";
                first = false;
                if (i == 0 || c[i] != 1) os << c[i];
                if (i >= 1) os << "a";
                if (i >= 2) os << "^" << i;
            }
            return first ? "0" : os.str();
        }
        case RingKind::MultivarPoly: {
            const auto& vars = ring_.poly_vars();
            std::ostringstream os;
            bool first = true;
            for (auto& [m, c] : poly_terms()) {
                if (!first) os << (c > 0 ? " + " : " - ");
                else if (c < 0) os << "-";
                first = false;
                BigInt ac = abs(c);
                bool printed = false;
                if (ac != 1 || m.factors.empty()) {
                    os << ac.str();
                    printed = true;
                }
                for (auto& [v, e] : m.factors) {
                    if (printed) os << "*";
                    os << (v < vars.size() ? vars[v] : "v" + std::to_string(v));
                    if (e > 1) os << "^" << e;
                    printed = true;
                }
            }
            return first ? "0" : os.str();
        }
    }
    return "?";
}

namespace {

json bigint_to_json(const BigInt& v) {
    if (v <= BigInt((1ll << 53)) && v >= BigInt(-(1ll << 53)))
        return json(v.convert_to<std::int64_t>());
    return json(v.str());
}

BigInt bigint_from_json(const json& j) {
    if (j.is_string()) return BigInt(j.get<std::string>());
    return BigInt(j.get<std::int64_t>());
}

}  // namespace

json RingElement::to_json() const {
    switch (ring_.kind()) {
        case RingKind::Integers:
        case RingKind::IntegersMod:
            return bigint_to_json(integer_value());
        case RingKind::FiniteField:
            return json(ff_coeffs());
        case RingKind::MultivarPoly: {
            json terms = json::array();
            for (auto& [m, c] : poly_terms()) {
                json mono = json::array();
                for (auto& [v, e] : m.factors) mono.push_back(json::array({v, e}));
                terms.push_back(json::array({bigint_to_json(c), mono}));
            }
            return terms;
        }
    }
    return {};
}

RingElement RingElement::from_json(const RingDescriptor& ring, const json& j) {
    switch (ring.kind()) {
        case RingKind::Integers:
        case RingKind::IntegersMod:
            return from_integer(ring, bigint_from_json(j));
        case RingKind::FiniteField:
            if (j.is_number()) return from_integer(ring, bigint_from_json(j));
            return ff_from_coeffs(ring, j.get<std::vector<int>>());
        case RingKind::MultivarPoly: {
            PolyTerms terms;
            for (auto& t : j) {
                Monomial m;
                for (auto& fe : t.at(1))
                    m.factors.push_back({fe.at(0).get<std::uint32_t>(), fe.at(1).get<std::uint32_t>()});
                terms[m] = bigint_from_json(t.at(0));
            }
            return poly_from_terms(ring, std::move(terms));
        }
    }
    throw DomainError("bad ring");
}

}  // namespace wittk
