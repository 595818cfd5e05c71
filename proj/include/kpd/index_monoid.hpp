#pragma once

#include <cstdint>
#include <vector>

#include "kpd/errors.hpp"

// Index bookkeeping for multi-indexed data laid out in alphabetic
// (lexicographic) order.  All indices in this interface are 1-based; the
// composition rule for a pair of indices i in [1,m], j in [1,n] is
// k = (i-1)*n + j, which is associative and has the empty profile as
// identity.

namespace kpd {

using index_t = std::int64_t;

// Multiplies two nonnegative 64-bit values, throwing OverflowError instead of
// wrapping.
index_t checked_mul(index_t a, index_t b);

// An ordered list of axis dimensions (n_1,...,n_d).  d = 0 is the empty
// profile (the dummy index), whose total is 1.
class DimProfile {
 public:
  DimProfile() = default;
  explicit DimProfile(std::vector<index_t> dims);

  const std::vector<index_t>& dims() const { return dims_; }
  std::size_t order() const { return dims_.size(); }
  // 1-based axis access.
  index_t dim(std::size_t axis) const;
  index_t total() const { return total_; }
  bool empty() const { return dims_.empty(); }

  DimProfile concat(const DimProfile& other) const;

  bool operator==(const DimProfile&) const = default;

 private:
  std::vector<index_t> dims_;
  index_t total_ = 1;
};

struct MultiIndex {
  std::vector<index_t> values;  // 1-based, one per axis
  DimProfile profile;

  bool valid() const;
};

// k = (i-1)*n + j for i in [1,m], j in [1,n].
index_t idx_product(index_t i, index_t m, index_t j, index_t n);

// Position of a multi-index in alphabetic order (1-based; the empty profile
// maps to 1).
index_t multi_to_linear(const std::vector<index_t>& values,
                        const DimProfile& profile);
index_t multi_to_linear(const MultiIndex& idx);

// Exact inverse of multi_to_linear, by repeated integer division from the
// last axis inward.
std::vector<index_t> linear_to_multi_values(index_t j, const DimProfile& profile);
MultiIndex linear_to_multi(index_t j, const DimProfile& profile);

// Strides of the alphabetic layout: stride[k] = n_{k+2}*...*n_d (0-based
// vector, last axis has stride 1).
std::vector<index_t> alphabetic_strides(const DimProfile& profile);

}  // namespace kpd
