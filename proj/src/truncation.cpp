#include "wittk/truncation.hpp"

#include <algorithm>
#include <string>

namespace wittk {

namespace {

// Is the set {1, q, q^2, ...} for some q >= 2?
bool is_power_chain(const std::vector<int>& v) {
    if (v.empty()) return true;
    if (v[0] != 1) return false;
    if (v.size() == 1) return true;
    const long q = v[1];
    if (q < 2) return false;
    long expect = 1;
    for (int x : v) {
        if (x != expect) return false;
        expect *= q;
    }
    return true;
}

}  // namespace

void TruncationSet::validate() const {
    for (size_t i = 0; i + 1 < indices_.size(); ++i)
        if (indices_[i] >= indices_[i + 1])
            throw DomainError("truncation indices must be sorted and distinct");
    for (int n : indices_) {
        if (n < 1) throw DomainError("truncation indices must be positive");
        for (int d = 1; d * d <= n; ++d) {
            if (n % d) continue;
            if (!contains(d) || !contains(n / d))
                throw DomainError("truncation set is not divisor-closed");
        }
    }
    if (is_power_chain(indices_)) {
        if (indices_.size() > static_cast<size_t>(kPTypicalCap))
            throw CapExceeded("p-typical truncation length exceeds cap " +
                              std::to_string(kPTypicalCap));
    } else if (max_index() > kFullCap) {
        throw CapExceeded("truncation max index exceeds cap " + std::to_string(kFullCap));
    }
}

TruncationSet TruncationSet::full(int m) {
    if (m < 0) throw DomainError("full(m) requires m >= 0");
    if (m > kFullCap) throw CapExceeded("full(m) supports m <= " + std::to_string(kFullCap));
    TruncationSet t;
    for (int i = 1; i <= m; ++i) t.indices_.push_back(i);
    return t;
}

TruncationSet TruncationSet::p_typical(long p, int length) {
    if (p < 2) throw DomainError("p_typical requires p >= 2");
    if (length < 0) throw DomainError("p_typical requires length >= 0");
    if (length > kPTypicalCap)
        throw CapExceeded("p-typical length supports <= " + std::to_string(kPTypicalCap));
    TruncationSet t;
    long idx = 1;
    for (int i = 0; i < length; ++i) {
        t.indices_.push_back(static_cast<int>(idx));
        idx *= p;
    }
    return t;
}

TruncationSet TruncationSet::from_indices(std::vector<int> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    TruncationSet t;
    t.indices_ = std::move(indices);
    t.validate();
    return t;
}

bool TruncationSet::contains(int n) const {
    return std::binary_search(indices_.begin(), indices_.end(), n);
}

std::size_t TruncationSet::position(int n) const {
    auto it = std::lower_bound(indices_.begin(), indices_.end(), n);
    if (it == indices_.end() || *it != n)
        throw DomainError("index " + std::to_string(n) + " not in truncation set");
    return static_cast<std::size_t>(it - indices_.begin());
}

TruncationSet TruncationSet::scaled(int n) const {
    TruncationSet t;
    for (int d : indices_) t.indices_.push_back(n * d);
    return t;  // not divisor-closed in general; only used for subset checks
}

TruncationSet TruncationSet::divided(int n) const {
    TruncationSet t;
    for (int d : indices_)
        if (d % n == 0) t.indices_.push_back(d / n);
    return t;
}

bool TruncationSet::is_subset_of(const TruncationSet& o) const {
    return std::includes(o.indices_.begin(), o.indices_.end(), indices_.begin(),
                         indices_.end());
}

}  // namespace wittk
