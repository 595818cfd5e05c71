#include "kpd/stp_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kpd {

DenseMatrix::DenseMatrix(index_t rows, index_t cols)
    : rows_(rows), cols_(cols), data_(checked_mul(rows, cols), 0.0) {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("DenseMatrix: negative dimension");
  }
}

DenseMatrix::DenseMatrix(index_t rows, index_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (rows < 0 || cols < 0 ||
      static_cast<index_t>(data_.size()) != checked_mul(rows, cols)) {
    throw std::invalid_argument("DenseMatrix: data length != rows*cols");
  }
}

DenseMatrix DenseMatrix::identity(index_t n) {
  DenseMatrix m(n, n);
  for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (index_t r = 0; r < rows_; ++r)
    for (index_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions disagree");
  }
  DenseMatrix c(a.rows(), b.cols());
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (index_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("operator+: shape mismatch");
  }
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("operator-: shape mismatch");
  }
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  const index_t rows = checked_mul(a.rows(), b.rows());
  const index_t cols = checked_mul(a.cols(), b.cols());
  DenseMatrix c(rows, cols);
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (index_t r = 0; r < b.rows(); ++r) {
        for (index_t s = 0; s < b.cols(); ++s) {
          c(i * b.rows() + r, j * b.cols() + s) = aij * b(r, s);
        }
      }
    }
  }
  return c;
}

namespace {

// A (x) I_k without forming the identity.
DenseMatrix kron_identity_right(const DenseMatrix& a, index_t k) {
  if (k == 1) return a;
  DenseMatrix c(checked_mul(a.rows(), k), checked_mul(a.cols(), k));
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (index_t t = 0; t < k; ++t) c(i * k + t, j * k + t) = aij;
    }
  }
  return c;
}

}  // namespace

DenseMatrix stp(const DenseMatrix& a, const DenseMatrix& b) {
  const index_t n = a.cols();
  const index_t p = b.rows();
  if (n == p) return matmul(a, b);
  const index_t t = std::lcm(n, p);
  return matmul(kron_identity_right(a, t / n), kron_identity_right(b, t / p));
}

PermSpec::PermSpec(DimProfile profile, std::vector<std::size_t> sigma)
    : profile_(std::move(profile)), sigma_(std::move(sigma)) {
  const std::size_t d = profile_.order();
  if (sigma_.size() != d) {
    throw std::invalid_argument("PermSpec: sigma arity != profile order");
  }
  std::vector<bool> seen(d, false);
  for (std::size_t v : sigma_) {
    if (v < 1 || v > d || seen[v - 1]) {
      throw std::invalid_argument("PermSpec: sigma is not a bijection on 1..d");
    }
    seen[v - 1] = true;
  }
}

PermSpec PermSpec::identity(DimProfile profile) {
  std::vector<std::size_t> sigma(profile.order());
  std::iota(sigma.begin(), sigma.end(), std::size_t{1});
  return PermSpec(std::move(profile), std::move(sigma));
}

DimProfile PermSpec::permuted_profile() const {
  std::vector<index_t> dims(profile_.order());
  for (std::size_t k = 0; k < sigma_.size(); ++k) {
    dims[k] = profile_.dims()[sigma_[k] - 1];
  }
  return DimProfile(std::move(dims));
}

PermSpec PermSpec::inverse() const {
  // The inverse permutation acts on the permuted profile and undoes sigma.
  std::vector<std::size_t> inv(sigma_.size());
  for (std::size_t k = 0; k < sigma_.size(); ++k) inv[sigma_[k] - 1] = k + 1;
  return PermSpec(permuted_profile(), std::move(inv));
}

std::vector<index_t> PermSpec::target_of_source() const {
  const std::size_t d = profile_.order();
  const index_t total = profile_.total();
  // Strides of the original layout, and of the permuted layout per axis of
  // the original: walking the original multi-index (i_1..i_d) in alphabetic
  // order, the target position moves by the permuted-layout stride of the
  // position where axis k lands.
  const std::vector<index_t> src_strides = alphabetic_strides(profile_);
  const DimProfile perm = permuted_profile();
  const std::vector<index_t> dst_strides_by_pos = alphabetic_strides(perm);
  std::vector<index_t> dst_stride_of_axis(d, 0);
  for (std::size_t k = 0; k < d; ++k) {
    dst_stride_of_axis[sigma_[k] - 1] = dst_strides_by_pos[k];
  }

  std::vector<index_t> target(total, 0);
  std::vector<index_t> counter(d, 0);  // 0-based multi over the original
  index_t dst = 0;
  for (index_t src = 0; src < total; ++src) {
    target[src] = dst;
    // Mixed-radix increment of the original multi-index.
    for (std::size_t k = d; k >= 1; --k) {
      const std::size_t ax = k - 1;
      if (++counter[ax] < profile_.dims()[ax]) {
        dst += dst_stride_of_axis[ax];
        break;
      }
      counter[ax] = 0;
      dst -= dst_stride_of_axis[ax] * (profile_.dims()[ax] - 1);
      if (k == 1) break;
    }
  }
  return target;
}

std::vector<index_t> PermSpec::delta_columns() const {
  std::vector<index_t> t = target_of_source();
  for (index_t& v : t) v += 1;
  return t;
}

std::vector<index_t> PermSpec::delta_rows() const {
  const std::vector<index_t> t = target_of_source();
  std::vector<index_t> rows(t.size(), 0);
  for (std::size_t p = 0; p < t.size(); ++p) rows[t[p]] = static_cast<index_t>(p) + 1;
  return rows;
}

std::vector<double> apply_perm(std::span<const double> x, const PermSpec& spec) {
  if (static_cast<index_t>(x.size()) != spec.total()) {
    throw std::invalid_argument("apply_perm: length != profile total");
  }
  const std::vector<index_t> target = spec.target_of_source();
  std::vector<double> y(x.size());
  for (std::size_t p = 0; p < x.size(); ++p) y[target[p]] = x[p];
  return y;
}

std::vector<double> apply_perm_transpose(std::span<const double> x,
                                         const PermSpec& spec) {
  if (static_cast<index_t>(x.size()) != spec.total()) {
    throw std::invalid_argument("apply_perm_transpose: length != profile total");
  }
  const std::vector<index_t> target = spec.target_of_source();
  std::vector<double> y(x.size());
  for (std::size_t p = 0; p < x.size(); ++p) y[p] = x[target[p]];
  return y;
}

DenseMatrix perm_matrix(const PermSpec& spec) {
  const index_t total = spec.total();
  const std::vector<index_t> target = spec.target_of_source();
  DenseMatrix w(total, total);
  for (index_t p = 0; p < total; ++p) w(target[p], p) = 1.0;
  return w;
}

PermSpec swap_spec(index_t m, index_t n) {
  return PermSpec(DimProfile({m, n}), {2, 1});
}

DenseMatrix swap_matrix(index_t m, index_t n) {
  return perm_matrix(swap_spec(m, n));
}

std::vector<double> col_stack(const DenseMatrix& m) {
  std::vector<double> v;
  v.reserve(m.data().size());
  for (index_t c = 0; c < m.cols(); ++c)
    for (index_t r = 0; r < m.rows(); ++r) v.push_back(m(r, c));
  return v;
}

DenseMatrix from_col_stack(std::span<const double> v, index_t rows, index_t cols) {
  if (static_cast<index_t>(v.size()) != checked_mul(rows, cols)) {
    throw std::invalid_argument("from_col_stack: length != rows*cols");
  }
  DenseMatrix m(rows, cols);
  std::size_t k = 0;
  for (index_t c = 0; c < cols; ++c)
    for (index_t r = 0; r < rows; ++r) m(r, c) = v[k++];
  return m;
}

}  // namespace kpd
