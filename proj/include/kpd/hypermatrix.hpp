#pragma once

#include <span>
#include <vector>

#include "kpd/stp_linalg.hpp"

// An order-d hypermatrix is a dimension profile plus flat data in alphabetic
// (lexicographic multi-index) order.  Matrices, stackings and the normal form
// are derived views of that data, never its identity.

namespace kpd {

class Hypermatrix {
 public:
  // Order-0 scalar zero.
  Hypermatrix() : data_(1, 0.0) {}
  Hypermatrix(DimProfile profile, std::vector<double> alphabetic_data);

  static Hypermatrix zeros(DimProfile profile);

  const DimProfile& profile() const { return profile_; }
  std::size_t order() const { return profile_.order(); }
  index_t total() const { return profile_.total(); }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  // Element at a 1-based multi-index.
  double at(const std::vector<index_t>& multi) const;
  double& at(const std::vector<index_t>& multi);

  bool operator==(const Hypermatrix&) const = default;

 private:
  DimProfile profile_;
  std::vector<double> data_;
};

// A two-group arrangement of the axes 1..d: row_axes and col_axes are
// disjoint, ordered, and together cover every axis.  Either may be empty.
struct IndexSplit {
  std::vector<std::size_t> row_axes;
  std::vector<std::size_t> col_axes;
};

// Rows = axes 1..row_count in order, columns = the rest.
IndexSplit prefix_split(std::size_t order, std::size_t row_count);

void validate_split(const IndexSplit& split, std::size_t order);

// The matrix whose rows are ordered by the product index over row_axes and
// whose columns are ordered by the product index over col_axes.  The order of
// axes inside each group matters.
DenseMatrix matrix_expression(const Hypermatrix& a, const IndexSplit& split);

// Inverse of matrix_expression for a given split and profile.
Hypermatrix from_matrix_expression(const DenseMatrix& m, const IndexSplit& split,
                                   const DimProfile& profile);

// The all-rows expression: flat data in alphabetic order.
std::vector<double> vector_form(const Hypermatrix& a);
Hypermatrix from_vector(DimProfile profile, std::vector<double> data);

// Axis reordering A^sigma; satisfies vector_form(A^sigma) ==
// apply_perm(vector_form(A), PermSpec(A.profile(), sigma)).
Hypermatrix sigma_transpose(const Hypermatrix& a,
                            const std::vector<std::size_t>& sigma);

// Row-axis count of the default matrix form: ceil(d/2), so an order-2
// hypermatrix is the ordinary matrix and a cubic one stacks its axis-1
// slices.
std::size_t normal_form_row_count(std::size_t order);
DenseMatrix normal_form(const Hypermatrix& a);

// Concatenation of rows top-to-bottom / columns left-to-right.
std::vector<double> row_stack(const DenseMatrix& m);
// col_stack(const DenseMatrix&) lives in stp_linalg.hpp.

}  // namespace kpd
