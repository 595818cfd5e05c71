#include "kpd/hyper_kpd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kpd {

namespace {

Hypermatrix pad_to_order(const Hypermatrix& a, std::size_t order) {
  if (a.order() >= order) return a;
  std::vector<index_t> dims = a.profile().dims();
  dims.resize(order, 1);  // trailing dummy axes keep the vector form unchanged
  return Hypermatrix(DimProfile(std::move(dims)), a.data());
}

IndexSplit shifted_concat(const IndexSplit& a, const IndexSplit& b,
                          std::size_t shift) {
  IndexSplit s;
  s.row_axes = a.row_axes;
  for (std::size_t ax : b.row_axes) s.row_axes.push_back(ax + shift);
  s.col_axes = a.col_axes;
  for (std::size_t ax : b.col_axes) s.col_axes.push_back(ax + shift);
  return s;
}

DimProfile head_profile(const DimProfile& p, std::size_t count) {
  std::vector<index_t> dims(p.dims().begin(), p.dims().begin() + count);
  return DimProfile(std::move(dims));
}

DimProfile tail_profile(const DimProfile& p, std::size_t skip) {
  std::vector<index_t> dims(p.dims().begin() + skip, p.dims().end());
  return DimProfile(std::move(dims));
}

HyperKpdResult from_vector_solve(const std::vector<double>& v,
                                 const DimProfile& profile_a,
                                 const DimProfile& profile_b,
                                 const SolverConfig& cfg, bool approximate) {
  const DimProfile pair_profile({profile_a.total(), profile_b.total()});
  HyperKpdResult result;
  if (approximate) {
    ApproxKpdResult ar = approx_kpd(v, pair_profile, cfg);
    result.decomposable =
        ar.factorization.residual_norm <= cfg.exact_tol * euclidean_norm(v);
    result.coefficient = ar.factorization.coefficient;
    result.a_monic = Hypermatrix(profile_a, ar.factorization.components[0]);
    result.b_monic = Hypermatrix(profile_b, ar.factorization.components[1]);
    result.residual_norm = ar.factorization.residual_norm;
    result.squared_error = ar.squared_error;
    result.initial_squared_error = ar.initial_squared_error;
    result.iterations = ar.iterations;
  } else {
    ExactKpdResult er = exact_kpd(v, pair_profile, cfg);
    result.decomposable = er.decomposable;
    result.coefficient = er.factorization.coefficient;
    result.a_monic = Hypermatrix(profile_a, er.factorization.components[0]);
    result.b_monic = Hypermatrix(profile_b, er.factorization.components[1]);
    result.residual_norm = er.factorization.residual_norm;
    result.squared_error = er.squared_error;
  }
  return result;
}

}  // namespace

Hypermatrix HyperKpdResult::a() const {
  Hypermatrix scaled = a_monic;
  for (double& v : scaled.data()) v *= coefficient;
  return scaled;
}

Hypermatrix outer_product(const Hypermatrix& a, const Hypermatrix& b) {
  const DimProfile profile = a.profile().concat(b.profile());
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(profile.total()));
  for (double av : a.data())
    for (double bv : b.data()) data.push_back(av * bv);
  return Hypermatrix(profile, std::move(data));
}

HyperKpdResult outer_kpd(const Hypermatrix& c, std::size_t lead_order,
                         const SolverConfig& cfg) {
  if (lead_order > c.order()) {
    throw std::invalid_argument("outer_kpd: split exceeds order");
  }
  const DimProfile profile_a = head_profile(c.profile(), lead_order);
  const DimProfile profile_b = tail_profile(c.profile(), lead_order);
  // The alphabetic order of the concatenated profile is already the nesting
  // V(C) = V(A) (x) V(B); no permutation is needed.
  return from_vector_solve(c.data(), profile_a, profile_b, cfg,
                           /*approximate=*/false);
}

Hypermatrix partition_product(const Hypermatrix& a, const IndexSplit& split_a,
                              const Hypermatrix& b, const IndexSplit& split_b) {
  validate_split(split_a, a.order());
  validate_split(split_b, b.order());
  const DenseMatrix ma = matrix_expression(a, split_a);
  const DenseMatrix mb = matrix_expression(b, split_b);
  const IndexSplit combined = shifted_concat(split_a, split_b, a.order());
  return from_matrix_expression(kron(ma, mb), combined,
                                a.profile().concat(b.profile()));
}

namespace {

HyperKpdResult partition_solve(const Hypermatrix& c, const IndexSplit& split,
                               const FactorLayout& fa, const FactorLayout& fb,
                               const SolverConfig& cfg, bool approximate) {
  validate_split(split, c.order());
  validate_split(fa.split, fa.profile.order());
  validate_split(fb.split, fb.profile.order());
  const DenseMatrix m = matrix_expression(c, split);

  auto group_total = [](const DimProfile& p, const std::vector<std::size_t>& axes) {
    index_t t = 1;
    for (std::size_t ax : axes) t = checked_mul(t, p.dims()[ax - 1]);
    return t;
  };
  const MatrixShape shape{group_total(fa.profile, fa.split.row_axes),
                          group_total(fa.profile, fa.split.col_axes),
                          group_total(fb.profile, fb.split.row_axes),
                          group_total(fb.profile, fb.split.col_axes)};
  if (m.rows() != checked_mul(shape.m, shape.p) ||
      m.cols() != checked_mul(shape.n, shape.q)) {
    throw std::invalid_argument("partition_kpd: factor layouts incompatible with split");
  }

  MatrixKpdResult mr = approximate ? matrix_approx_kpd(m, shape, cfg)
                                   : matrix_exact_kpd(m, shape, cfg);
  HyperKpdResult result;
  result.decomposable = mr.decomposable;
  result.coefficient = mr.coefficient;
  result.a_monic = from_matrix_expression(mr.b_monic, fa.split, fa.profile);
  result.b_monic = from_matrix_expression(mr.c_monic, fb.split, fb.profile);
  result.residual_norm = mr.residual_frobenius;
  result.squared_error = mr.squared_error;
  result.initial_squared_error = mr.initial_squared_error;
  result.iterations = mr.iterations;
  return result;
}

}  // namespace

HyperKpdResult partition_kpd(const Hypermatrix& c, const IndexSplit& split,
                             const FactorLayout& factor_a,
                             const FactorLayout& factor_b,
                             const SolverConfig& cfg) {
  return partition_solve(c, split, factor_a, factor_b, cfg, /*approximate=*/false);
}

HyperKpdResult partition_approx_kpd(const Hypermatrix& c, const IndexSplit& split,
                                    const FactorLayout& factor_a,
                                    const FactorLayout& factor_b,
                                    const SolverConfig& cfg) {
  return partition_solve(c, split, factor_a, factor_b, cfg, /*approximate=*/true);
}

Hypermatrix paired_product(const Hypermatrix& a_in, const Hypermatrix& b_in) {
  const std::size_t d = std::max(a_in.order(), b_in.order());
  const Hypermatrix a = pad_to_order(a_in, d);
  const Hypermatrix b = pad_to_order(b_in, d);

  std::vector<index_t> target_dims(d);
  for (std::size_t k = 0; k < d; ++k) {
    target_dims[k] = checked_mul(a.profile().dims()[k], b.profile().dims()[k]);
  }
  Hypermatrix c = Hypermatrix::zeros(DimProfile(std::move(target_dims)));

  // k_s = (i_s - 1) n_s + j_s axiswise.
  std::vector<index_t> ai(d, 1), bj(d, 1), ck(d, 1);
  const index_t a_total = a.total();
  const index_t b_total = b.total();
  for (index_t pa = 1; pa <= a_total; ++pa) {
    ai = linear_to_multi_values(pa, a.profile());
    for (index_t pb = 1; pb <= b_total; ++pb) {
      bj = linear_to_multi_values(pb, b.profile());
      for (std::size_t s = 0; s < d; ++s) {
        ck[s] = (ai[s] - 1) * b.profile().dims()[s] + bj[s];
      }
      c.at(ck) = a.data()[pa - 1] * b.data()[pb - 1];
    }
  }
  return c;
}

DenseMatrix paired_product_via_forms(const Hypermatrix& a, const Hypermatrix& b,
                                     std::size_t row_count) {
  if (a.order() != b.order()) {
    throw std::invalid_argument("paired_product_via_forms: orders must match");
  }
  const std::size_t d = a.order();
  if (row_count > d) {
    throw std::invalid_argument("paired_product_via_forms: split exceeds order");
  }
  const DenseMatrix ma = matrix_expression(a, prefix_split(d, row_count));
  const DenseMatrix mb = matrix_expression(b, prefix_split(d, row_count));
  const DenseMatrix e = kron(ma, mb);

  const PermSpec wl = interleave_spec(head_profile(a.profile(), row_count),
                                      head_profile(b.profile(), row_count));
  const PermSpec wr = interleave_spec(tail_profile(a.profile(), row_count),
                                      tail_profile(b.profile(), row_count));
  const std::vector<index_t> row_target = wl.target_of_source();
  const std::vector<index_t> col_target = wr.target_of_source();

  // C = W_L E W_R^T moves entry (r, c) to (row_target[r], col_target[c]).
  DenseMatrix c(e.rows(), e.cols());
  for (index_t r = 0; r < e.rows(); ++r)
    for (index_t col = 0; col < e.cols(); ++col)
      c(row_target[r], col_target[col]) = e(r, col);
  return c;
}

DimProfile PairedShape::target() const {
  if (factor_a.order() != factor_b.order()) {
    throw std::invalid_argument("PairedShape: factor orders must match");
  }
  std::vector<index_t> dims(factor_a.order());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    dims[k] = checked_mul(factor_a.dims()[k], factor_b.dims()[k]);
  }
  return DimProfile(std::move(dims));
}

PermSpec interleave_spec(const DimProfile& profile_a, const DimProfile& profile_b) {
  if (profile_a.order() != profile_b.order()) {
    throw std::invalid_argument("interleave_spec: orders must match");
  }
  const std::size_t d = profile_a.order();
  std::vector<std::size_t> sigma;
  sigma.reserve(2 * d);
  for (std::size_t i = 1; i <= d; ++i) {
    sigma.push_back(i);
    sigma.push_back(d + i);
  }
  return PermSpec(profile_a.concat(profile_b), std::move(sigma));
}

PermSpec paired_psi(const PairedShape& shape) {
  return interleave_spec(shape.factor_a, shape.factor_b);
}

namespace {

std::vector<double> paired_reduced_vector(const Hypermatrix& c,
                                          const PairedShape& shape) {
  if (c.profile() != shape.target()) {
    throw std::invalid_argument("paired_kpd: shape does not match the input profile");
  }
  return apply_perm_transpose(c.data(), paired_psi(shape));
}

}  // namespace

HyperKpdResult paired_kpd(const Hypermatrix& c, const PairedShape& shape,
                          const SolverConfig& cfg) {
  return from_vector_solve(paired_reduced_vector(c, shape), shape.factor_a,
                           shape.factor_b, cfg, /*approximate=*/false);
}

HyperKpdResult paired_approx_kpd(const Hypermatrix& c, const PairedShape& shape,
                                 const SolverConfig& cfg) {
  return from_vector_solve(paired_reduced_vector(c, shape), shape.factor_a,
                           shape.factor_b, cfg, /*approximate=*/true);
}

Hypermatrix HyperSumKpd::reconstruction(const DimProfile& target) const {
  Hypermatrix acc = Hypermatrix::zeros(target);
  for (const Term& t : terms) {
    Hypermatrix p = paired_product(t.a, t.b);
    for (std::size_t k = 0; k < acc.data().size(); ++k) {
      acc.data()[k] += t.coefficient * p.data()[k];
    }
  }
  return acc;
}

HyperSumKpd paired_sum_kpd(const Hypermatrix& c, const PairedShape& shape,
                           const SolverConfig& cfg) {
  const std::vector<double> v = paired_reduced_vector(c, shape);
  const DimProfile pair_profile({shape.factor_a.total(), shape.factor_b.total()});
  const SumKpd sum = finite_sum_kpd(v, pair_profile, cfg);

  HyperSumKpd out;
  for (const KpdFactorization& term : sum.terms) {
    HyperSumKpd::Term t;
    t.coefficient = term.coefficient;
    t.a = Hypermatrix(shape.factor_a, term.components[0]);
    t.b = Hypermatrix(shape.factor_b, term.components[1]);
    out.terms.push_back(std::move(t));
  }
  out.residual_norm = sum.residual_norm;
  return out;
}

HyperMultifoldResult paired_multifold_kpd(const Hypermatrix& c,
                                          const std::vector<DimProfile>& profiles,
                                          const SolverConfig& cfg) {
  if (profiles.size() < 2) {
    throw std::invalid_argument("paired_multifold_kpd: need at least two factors");
  }
  const std::size_t d = c.order();
  for (const DimProfile& p : profiles) {
    if (p.order() != d) {
      throw std::invalid_argument("paired_multifold_kpd: factor order mismatch");
    }
  }

  HyperMultifoldResult result;
  result.coefficient = 1.0;
  Hypermatrix rest = c;
  for (std::size_t stage = 0; stage + 1 < profiles.size(); ++stage) {
    std::vector<index_t> rest_dims(d, 1);
    for (std::size_t k = 0; k < d; ++k) {
      index_t t = 1;
      for (std::size_t later = stage + 1; later < profiles.size(); ++later) {
        t = checked_mul(t, profiles[later].dims()[k]);
      }
      rest_dims[k] = t;
    }
    const PairedShape shape{profiles[stage], DimProfile(rest_dims)};
    if (rest.profile() != shape.target()) {
      throw std::invalid_argument("paired_multifold_kpd: profile products mismatch");
    }
    HyperKpdResult r = paired_kpd(rest, shape, cfg);
    if (!r.decomposable) {
      result.ok = false;
      result.failed_stage = stage + 1;
      return result;
    }
    result.coefficient *= r.coefficient;
    result.factors.push_back(std::move(r.a_monic));
    rest = std::move(r.b_monic);
  }
  result.factors.push_back(std::move(rest));
  result.ok = true;
  return result;
}

}  // namespace kpd
