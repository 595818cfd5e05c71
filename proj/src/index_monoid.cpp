#include "kpd/index_monoid.hpp"

#include <limits>
#include <string>

namespace kpd {

index_t checked_mul(index_t a, index_t b) {
  if (a < 0 || b < 0) {
    throw std::invalid_argument("checked_mul: negative operand");
  }
  index_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("dimension product exceeds 64-bit range");
  }
  return out;
}

DimProfile::DimProfile(std::vector<index_t> dims) : dims_(std::move(dims)) {
  total_ = 1;
  for (index_t n : dims_) {
    if (n < 1) {
      throw std::invalid_argument("DimProfile: every dimension must be >= 1");
    }
    total_ = checked_mul(total_, n);
  }
}

index_t DimProfile::dim(std::size_t axis) const {
  if (axis < 1 || axis > dims_.size()) {
    throw std::invalid_argument("DimProfile::dim: axis out of range");
  }
  return dims_[axis - 1];
}

DimProfile DimProfile::concat(const DimProfile& other) const {
  std::vector<index_t> d = dims_;
  d.insert(d.end(), other.dims_.begin(), other.dims_.end());
  return DimProfile(std::move(d));
}

bool MultiIndex::valid() const {
  if (values.size() != profile.order()) return false;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] < 1 || values[k] > profile.dims()[k]) return false;
  }
  return true;
}

index_t idx_product(index_t i, index_t m, index_t j, index_t n) {
  if (i < 1 || i > m) throw std::invalid_argument("idx_product: i out of [1,m]");
  if (j < 1 || j > n) throw std::invalid_argument("idx_product: j out of [1,n]");
  return checked_mul(i - 1, n) + j;
}

index_t multi_to_linear(const std::vector<index_t>& values,
                        const DimProfile& profile) {
  if (values.size() != profile.order()) {
    throw std::invalid_argument("multi_to_linear: arity mismatch");
  }
  // Left fold of the index product: j <- (j-1)*n_k + i_k.
  index_t j = 1;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const index_t n = profile.dims()[k];
    if (values[k] < 1 || values[k] > n) {
      throw std::invalid_argument("multi_to_linear: index out of range on axis " +
                                  std::to_string(k + 1));
    }
    j = checked_mul(j - 1, n) + values[k];
  }
  return j;
}

std::vector<index_t> linear_to_multi_values(index_t j, const DimProfile& profile) {
  if (j < 1 || j > profile.total()) {
    throw std::invalid_argument("linear_to_multi: position out of range");
  }
  const std::size_t d = profile.order();
  std::vector<index_t> values(d, 1);
  index_t rem = j - 1;
  for (std::size_t k = d; k >= 1; --k) {
    const index_t n = profile.dims()[k - 1];
    values[k - 1] = rem - (rem / n) * n + 1;
    rem = rem / n;
    if (k == 1) break;
  }
  return values;
}

MultiIndex linear_to_multi(index_t j, const DimProfile& profile) {
  return MultiIndex{linear_to_multi_values(j, profile), profile};
}

index_t multi_to_linear(const MultiIndex& idx) {
  return multi_to_linear(idx.values, idx.profile);
}

std::vector<index_t> alphabetic_strides(const DimProfile& profile) {
  const std::size_t d = profile.order();
  std::vector<index_t> strides(d, 1);
  for (std::size_t k = d; k >= 2; --k) {
    strides[k - 2] = checked_mul(strides[k - 1], profile.dims()[k - 1]);
  }
  return strides;
}

}  // namespace kpd
