#include "kpd/hypermatrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace kpd {

Hypermatrix::Hypermatrix(DimProfile profile, std::vector<double> alphabetic_data)
    : profile_(std::move(profile)), data_(std::move(alphabetic_data)) {
  if (static_cast<index_t>(data_.size()) != profile_.total()) {
    throw std::invalid_argument("Hypermatrix: data length != profile total");
  }
}

Hypermatrix Hypermatrix::zeros(DimProfile profile) {
  std::vector<double> d(static_cast<std::size_t>(profile.total()), 0.0);
  return Hypermatrix(std::move(profile), std::move(d));
}

double Hypermatrix::at(const std::vector<index_t>& multi) const {
  return data_[multi_to_linear(multi, profile_) - 1];
}

double& Hypermatrix::at(const std::vector<index_t>& multi) {
  return data_[multi_to_linear(multi, profile_) - 1];
}

IndexSplit prefix_split(std::size_t order, std::size_t row_count) {
  if (row_count > order) {
    throw std::invalid_argument("prefix_split: row count exceeds order");
  }
  IndexSplit s;
  for (std::size_t k = 1; k <= row_count; ++k) s.row_axes.push_back(k);
  for (std::size_t k = row_count + 1; k <= order; ++k) s.col_axes.push_back(k);
  return s;
}

void validate_split(const IndexSplit& split, std::size_t order) {
  std::vector<bool> seen(order, false);
  auto mark = [&](const std::vector<std::size_t>& axes) {
    for (std::size_t a : axes) {
      if (a < 1 || a > order || seen[a - 1]) {
        throw std::invalid_argument("IndexSplit: axes must partition 1..d");
      }
      seen[a - 1] = true;
    }
  };
  mark(split.row_axes);
  mark(split.col_axes);
  if (split.row_axes.size() + split.col_axes.size() != order) {
    throw std::invalid_argument("IndexSplit: axes must partition 1..d");
  }
}

namespace {

// For one axis group, the contribution of each original axis to the group's
// product index, as a stride on the group side.
struct GroupLayout {
  std::vector<std::size_t> axes;   // 1-based original axes, group order
  std::vector<index_t> strides;    // stride of each group slot
  index_t total = 1;
};

GroupLayout group_layout(const std::vector<std::size_t>& axes,
                         const DimProfile& profile) {
  GroupLayout g;
  g.axes = axes;
  g.strides.assign(axes.size(), 1);
  for (std::size_t k = axes.size(); k >= 2; --k) {
    g.strides[k - 2] =
        checked_mul(g.strides[k - 1], profile.dims()[axes[k - 1] - 1]);
  }
  for (std::size_t a : axes) g.total = checked_mul(g.total, profile.dims()[a - 1]);
  return g;
}

}  // namespace

DenseMatrix matrix_expression(const Hypermatrix& a, const IndexSplit& split) {
  validate_split(split, a.order());
  const GroupLayout rows = group_layout(split.row_axes, a.profile());
  const GroupLayout cols = group_layout(split.col_axes, a.profile());

  DenseMatrix m(rows.total, cols.total);
  const index_t total = a.total();
  const std::size_t d = a.order();
  // Row/column position of each original axis value is accumulated while the
  // alphabetic multi-index walks the data once.
  std::vector<index_t> row_stride_of_axis(d, 0), col_stride_of_axis(d, 0);
  for (std::size_t k = 0; k < rows.axes.size(); ++k)
    row_stride_of_axis[rows.axes[k] - 1] = rows.strides[k];
  for (std::size_t k = 0; k < cols.axes.size(); ++k)
    col_stride_of_axis[cols.axes[k] - 1] = cols.strides[k];

  std::vector<index_t> counter(d, 0);
  index_t r = 0, c = 0;
  for (index_t pos = 0; pos < total; ++pos) {
    m(r, c) = a.data()[pos];
    for (std::size_t k = d; k >= 1; --k) {
      const std::size_t ax = k - 1;
      if (++counter[ax] < a.profile().dims()[ax]) {
        r += row_stride_of_axis[ax];
        c += col_stride_of_axis[ax];
        break;
      }
      counter[ax] = 0;
      r -= row_stride_of_axis[ax] * (a.profile().dims()[ax] - 1);
      c -= col_stride_of_axis[ax] * (a.profile().dims()[ax] - 1);
      if (k == 1) break;
    }
  }
  return m;
}

Hypermatrix from_matrix_expression(const DenseMatrix& m, const IndexSplit& split,
                                   const DimProfile& profile) {
  validate_split(split, profile.order());
  const GroupLayout rows = group_layout(split.row_axes, profile);
  const GroupLayout cols = group_layout(split.col_axes, profile);
  if (m.rows() != rows.total || m.cols() != cols.total) {
    throw std::invalid_argument(
        "from_matrix_expression: matrix shape does not match split");
  }

  const std::size_t d = profile.order();
  std::vector<index_t> row_stride_of_axis(d, 0), col_stride_of_axis(d, 0);
  for (std::size_t k = 0; k < rows.axes.size(); ++k)
    row_stride_of_axis[rows.axes[k] - 1] = rows.strides[k];
  for (std::size_t k = 0; k < cols.axes.size(); ++k)
    col_stride_of_axis[cols.axes[k] - 1] = cols.strides[k];

  Hypermatrix a = Hypermatrix::zeros(profile);
  std::vector<index_t> counter(d, 0);
  index_t r = 0, c = 0;
  for (index_t pos = 0; pos < profile.total(); ++pos) {
    a.data()[pos] = m(r, c);
    for (std::size_t k = d; k >= 1; --k) {
      const std::size_t ax = k - 1;
      if (++counter[ax] < profile.dims()[ax]) {
        r += row_stride_of_axis[ax];
        c += col_stride_of_axis[ax];
        break;
      }
      counter[ax] = 0;
      r -= row_stride_of_axis[ax] * (profile.dims()[ax] - 1);
      c -= col_stride_of_axis[ax] * (profile.dims()[ax] - 1);
      if (k == 1) break;
    }
  }
  return a;
}

std::vector<double> vector_form(const Hypermatrix& a) { return a.data(); }

Hypermatrix from_vector(DimProfile profile, std::vector<double> data) {
  return Hypermatrix(std::move(profile), std::move(data));
}

Hypermatrix sigma_transpose(const Hypermatrix& a,
                            const std::vector<std::size_t>& sigma) {
  const PermSpec spec(a.profile(), sigma);
  return Hypermatrix(spec.permuted_profile(), apply_perm(a.data(), spec));
}

std::size_t normal_form_row_count(std::size_t order) {
  return (order + 1) / 2;
}

DenseMatrix normal_form(const Hypermatrix& a) {
  return matrix_expression(a, prefix_split(a.order(), normal_form_row_count(a.order())));
}

std::vector<double> row_stack(const DenseMatrix& m) { return m.data(); }

}  // namespace kpd
