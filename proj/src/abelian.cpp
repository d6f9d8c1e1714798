#include "wittk/abelian.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace wittk {

using nlohmann::json;

AbelianPGroup AbelianPGroup::cyclic(long p, int exponent, int copies) {
    AbelianPGroup g{p, {}, 0};
    for (int i = 0; i < copies; ++i)
        if (exponent > 0) g.exponents.push_back(exponent);
    return g;
}

void AbelianPGroup::canonicalize() {
    exponents.erase(std::remove_if(exponents.begin(), exponents.end(),
                                   [](int e) { return e <= 0; }),
                    exponents.end());
    std::sort(exponents.begin(), exponents.end(), std::greater<int>());
}

long AbelianPGroup::order_valuation() const {
    long v = 0;
    for (int e : exponents) v += e;
    return v;
}

BigInt AbelianPGroup::order() const {
    return pow_big(BigInt(p), static_cast<unsigned long>(order_valuation()));
}

AbelianPGroup& AbelianPGroup::operator+=(const AbelianPGroup& o) {
    if (!o.exponents.empty() && !exponents.empty() && p != o.p)
        throw DomainError("direct sum of groups at different primes");
    if (exponents.empty() && !o.exponents.empty()) p = o.p;
    exponents.insert(exponents.end(), o.exponents.begin(), o.exponents.end());
    free_rank += o.free_rank;
    canonicalize();
    return *this;
}

bool AbelianPGroup::operator==(const AbelianPGroup& o) const {
    if (free_rank != o.free_rank) return false;
    if (exponents != o.exponents) return false;
    if (exponents.empty()) return true;
    return p == o.p;
}

std::string AbelianPGroup::to_string() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    int i = 0;
    while (i < static_cast<int>(exponents.size())) {
        int j = i;
        while (j < static_cast<int>(exponents.size()) && exponents[j] == exponents[i]) ++j;
        if (!first) os << " + ";
        first = false;
        os << "Z/" << pow_big(BigInt(p), exponents[i]).str();
        if (j - i > 1) os << "^" << (j - i);
        i = j;
    }
    if (free_rank > 0) {
        if (!first) os << " + ";
        os << "Z^" << free_rank;
    }
    return os.str();
}

json AbelianPGroup::to_json() const {
    return json{{"p", p}, {"exponents", exponents}, {"free_rank", free_rank}};
}

AbelianPGroup AbelianPGroup::from_json(const json& j) {
    AbelianPGroup g;
    g.p = j.at("p").get<long>();
    g.exponents = j.at("exponents").get<std::vector<int>>();
    g.free_rank = j.at("free_rank").get<int>();
    g.canonicalize();
    return g;
}

AbelianPGroup AbelianPGroup::from_torsion_valuations(long p, const std::vector<long>& counts) {
    // c_k := counts[k] - counts[k-1] is the number of cyclic factors of
    // exponent >= k; the exponent list is the conjugate partition.
    AbelianPGroup g{p, {}, 0};
    for (size_t k = 1; k < counts.size(); ++k) {
        long ck = counts[k] - counts[k - 1];
        if (ck < 0) throw DomainError("torsion counts are not monotone");
        if (ck == 0) break;
        while (static_cast<long>(g.exponents.size()) < ck) g.exponents.push_back(0);
        for (long j = 0; j < ck; ++j) g.exponents[j] = static_cast<int>(k);
    }
    g.canonicalize();
    return g;
}

}  // namespace wittk
