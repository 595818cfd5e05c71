#pragma once

#include <span>
#include <vector>

#include "kpd/index_monoid.hpp"

// Dense kernel: Kronecker product, semi-tensor product, swap matrices and
// axis-permutation matrices.  Permutations are held as index maps and only
// materialized into 0/1 matrices on request.

namespace kpd {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(index_t rows, index_t cols);
  DenseMatrix(index_t rows, index_t cols, std::vector<double> row_major);

  static DenseMatrix identity(index_t n);

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }

  // 0-based element access.
  double operator()(index_t r, index_t c) const { return data_[r * cols_ + c]; }
  double& operator()(index_t r, index_t c) { return data_[r * cols_ + c]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  DenseMatrix transposed() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& a);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

// Kronecker product: block (i,j) of the result is a_ij * B.
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

// Semi-tensor product (A (x) I_{t/n}) (B (x) I_{t/p}) with t = lcm(n, p).
// Coincides with the ordinary product when the inner dimensions match.
DenseMatrix stp(const DenseMatrix& a, const DenseMatrix& b);

// An axis permutation of a multi-index space.  sigma is the one-line image
// list: position k of the permuted arrangement takes axis sigma[k] of the
// original, so the permuted profile is (n_sigma(1),...,n_sigma(d)).  The
// realized matrix W satisfies, for the hypermatrix A over `profile`,
//   V(A^sigma) = W V(A),
// where entry (j_1,...,j_d) of A^sigma is the entry of A whose axis-sigma(k)
// index equals j_k.
class PermSpec {
 public:
  PermSpec(DimProfile profile, std::vector<std::size_t> sigma);

  static PermSpec identity(DimProfile profile);

  const DimProfile& profile() const { return profile_; }
  const std::vector<std::size_t>& sigma() const { return sigma_; }
  DimProfile permuted_profile() const;
  index_t total() const { return profile_.total(); }

  PermSpec inverse() const;

  // target_of_source()[p] = r means the matrix has its 1 for column p in
  // row r (0-based); i.e. column p of W is the r-th basis vector.
  std::vector<index_t> target_of_source() const;

  // 1-based basis listings of the realized matrix W: delta_columns()[p] is
  // the row of the 1 in column p+1 (the "W = delta_n[...]" column listing);
  // delta_rows()[r] is the column of the 1 in row r+1.
  std::vector<index_t> delta_columns() const;
  std::vector<index_t> delta_rows() const;

 private:
  DimProfile profile_;
  std::vector<std::size_t> sigma_;  // 1-based images
};

// y = W x by index relabeling; bit-identical to perm_matrix(spec) * x.
std::vector<double> apply_perm(std::span<const double> x, const PermSpec& spec);
// y = W^T x (equivalently apply_perm with the inverse spec).
std::vector<double> apply_perm_transpose(std::span<const double> x,
                                         const PermSpec& spec);

// Materialized 0/1 matrix of the permutation.
DenseMatrix perm_matrix(const PermSpec& spec);

// Swap matrix W_[m,n]: the mn x mn permutation with W (x (x) y) = y (x) x for
// x in R^m, y in R^n.
PermSpec swap_spec(index_t m, index_t n);
DenseMatrix swap_matrix(index_t m, index_t n);

// Column stacking and its inverse (rows x cols, column-major read).
std::vector<double> col_stack(const DenseMatrix& m);
DenseMatrix from_col_stack(std::span<const double> v, index_t rows, index_t cols);

}  // namespace kpd
