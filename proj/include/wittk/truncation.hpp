#pragma once

#include <vector>

#include "wittk/errors.hpp"

namespace wittk {

// A finite divisor-closed set of positive integers. The empty set is allowed
// and yields the zero ring of Witt vectors.
//
// Caps: full(m) supports m <= 24; p-typical sets support length <= 8. A
// custom set must either fit under max <= 24 or be a p-power chain of
// length <= 8. Exceeding a cap is a hard error.
class TruncationSet {
  public:
    TruncationSet() = default;  // empty

    static TruncationSet full(int m);
    static TruncationSet p_typical(long p, int length);
    static TruncationSet from_indices(std::vector<int> indices);

    const std::vector<int>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    bool contains(int n) const;
    int max_index() const { return indices_.empty() ? 0 : indices_.back(); }
    // position of n in the sorted index list; throws if absent
    std::size_t position(int n) const;

    // {n*d : d in this}
    TruncationSet scaled(int n) const;
    // T/n = {d : n*d in T}
    TruncationSet divided(int n) const;
    bool is_subset_of(const TruncationSet& o) const;

    bool operator==(const TruncationSet& o) const { return indices_ == o.indices_; }
    bool operator!=(const TruncationSet& o) const { return !(*this == o); }

  private:
    std::vector<int> indices_;  // sorted, distinct
    void validate() const;      // divisor-closed + caps
};

inline constexpr int kFullCap = 24;
inline constexpr int kPTypicalCap = 8;

}  // namespace wittk
