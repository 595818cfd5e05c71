#include "kpd/matrix_kpd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kpd {

PermSpec psi_spec(index_t m, index_t n, index_t p, index_t q) {
  // Vc(B) (x) Vc(C) runs over axes (n, m, q, p); swapping the middle pair
  // reorders it into the column stacking of B (x) C.
  return PermSpec(DimProfile({n, m, q, p}), {1, 3, 2, 4});
}

DenseMatrix psi_matrix(index_t m, index_t n, index_t p, index_t q) {
  return perm_matrix(psi_spec(m, n, p, q));
}

namespace {

void check_shape(const DenseMatrix& N, const MatrixShape& s, const char* who) {
  if (s.m < 1 || s.n < 1 || s.p < 1 || s.q < 1) {
    throw std::invalid_argument(std::string(who) + ": factor dimensions must be >= 1");
  }
  if (N.rows() != checked_mul(s.m, s.p) || N.cols() != checked_mul(s.n, s.q)) {
    throw std::invalid_argument(std::string(who) +
                                ": factor shape does not divide the matrix shape");
  }
}

// Shared reduction: permuted column stacking, vector solve, factor reshape.
MatrixKpdResult reduce_and_solve(const DenseMatrix& N, const MatrixShape& s,
                                 const SolverConfig& cfg, bool approximate) {
  const PermSpec psi = psi_spec(s.m, s.n, s.p, s.q);
  const std::vector<double> v = apply_perm_transpose(col_stack(N), psi);
  const DimProfile pair_profile({checked_mul(s.m, s.n), checked_mul(s.p, s.q)});

  MatrixKpdResult result;
  if (approximate) {
    ApproxKpdResult ar = approx_kpd(v, pair_profile, cfg);
    result.decomposable = ar.factorization.residual_norm <=
                          cfg.exact_tol * euclidean_norm(v);
    result.coefficient = ar.factorization.coefficient;
    result.b_monic = from_col_stack(ar.factorization.components[0], s.m, s.n);
    result.c_monic = from_col_stack(ar.factorization.components[1], s.p, s.q);
    result.squared_error = ar.squared_error;
    result.initial_squared_error = ar.initial_squared_error;
    result.iterations = ar.iterations;
    result.residual_frobenius = ar.factorization.residual_norm;
  } else {
    ExactKpdResult er = exact_kpd(v, pair_profile, cfg);
    result.decomposable = er.decomposable;
    result.coefficient = er.factorization.coefficient;
    result.b_monic = from_col_stack(er.factorization.components[0], s.m, s.n);
    result.c_monic = from_col_stack(er.factorization.components[1], s.p, s.q);
    result.squared_error = er.squared_error;
    result.residual_frobenius = er.factorization.residual_norm;
  }
  // The permutation is orthogonal, so the vector residual is the Frobenius
  // residual of the matrix reconstruction.
  return result;
}

}  // namespace

MatrixKpdResult matrix_exact_kpd(const DenseMatrix& N, const MatrixShape& shape,
                                 const SolverConfig& cfg) {
  check_shape(N, shape, "matrix_exact_kpd");
  return reduce_and_solve(N, shape, cfg, /*approximate=*/false);
}

MatrixKpdResult matrix_approx_kpd(const DenseMatrix& N, const MatrixShape& shape,
                                  const SolverConfig& cfg) {
  check_shape(N, shape, "matrix_approx_kpd");
  return reduce_and_solve(N, shape, cfg, /*approximate=*/true);
}

DenseMatrix MatrixSumKpd::reconstruction(index_t rows, index_t cols) const {
  DenseMatrix acc(rows, cols);
  for (const Term& t : terms) {
    acc = acc + t.coefficient * kron(t.b, t.c);
  }
  return acc;
}

MatrixSumKpd matrix_sum_kpd(const DenseMatrix& N, const MatrixShape& shape,
                            const SolverConfig& cfg) {
  check_shape(N, shape, "matrix_sum_kpd");
  const PermSpec psi = psi_spec(shape.m, shape.n, shape.p, shape.q);
  const std::vector<double> v = apply_perm_transpose(col_stack(N), psi);
  const DimProfile pair_profile(
      {checked_mul(shape.m, shape.n), checked_mul(shape.p, shape.q)});

  const SumKpd sum = finite_sum_kpd(v, pair_profile, cfg);
  MatrixSumKpd out;
  for (const KpdFactorization& term : sum.terms) {
    MatrixSumKpd::Term t;
    t.coefficient = term.coefficient;
    t.b = from_col_stack(term.components[0], shape.m, shape.n);
    t.c = from_col_stack(term.components[1], shape.p, shape.q);
    out.terms.push_back(std::move(t));
  }
  out.residual_frobenius = sum.residual_norm;
  return out;
}

MatrixMultifoldResult matrix_multifold_kpd(
    const DenseMatrix& N, const std::vector<std::pair<index_t, index_t>>& shapes,
    const SolverConfig& cfg) {
  if (shapes.size() < 2) {
    throw std::invalid_argument("matrix_multifold_kpd: need at least two factors");
  }
  index_t rows = 1, cols = 1;
  for (const auto& [mi, ni] : shapes) {
    rows = checked_mul(rows, mi);
    cols = checked_mul(cols, ni);
  }
  if (rows != N.rows() || cols != N.cols()) {
    throw std::invalid_argument("matrix_multifold_kpd: shape product mismatch");
  }

  MatrixMultifoldResult result;
  result.coefficient = 1.0;
  DenseMatrix rest = N;
  index_t rest_rows = N.rows(), rest_cols = N.cols();
  for (std::size_t stage = 0; stage + 1 < shapes.size(); ++stage) {
    const auto [mi, ni] = shapes[stage];
    rest_rows /= mi;
    rest_cols /= ni;
    const MatrixShape s{mi, ni, rest_rows, rest_cols};
    MatrixKpdResult r = matrix_exact_kpd(rest, s, cfg);
    if (!r.decomposable) {
      result.ok = false;
      result.failed_stage = stage + 1;
      return result;
    }
    result.coefficient *= r.coefficient;
    result.factors.push_back(std::move(r.b_monic));
    rest = std::move(r.c_monic);
  }
  result.factors.push_back(std::move(rest));
  result.ok = true;
  return result;
}

std::vector<ShapeCandidate> enumerate_matrix_shapes(const DenseMatrix& N,
                                                    const SolverConfig& cfg) {
  std::vector<ShapeCandidate> out;
  for (index_t m = 1; m <= N.rows(); ++m) {
    if (N.rows() % m != 0) continue;
    for (index_t n = 1; n <= N.cols(); ++n) {
      if (N.cols() % n != 0) continue;
      ShapeCandidate c;
      c.shape = MatrixShape{m, n, N.rows() / m, N.cols() / n};
      MatrixKpdResult r = matrix_exact_kpd(N, c.shape, cfg);
      c.residual_frobenius = r.residual_frobenius;
      c.decomposable = r.decomposable;
      out.push_back(c);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ShapeCandidate& a, const ShapeCandidate& b) {
                     return a.residual_frobenius < b.residual_frobenius;
                   });
  return out;
}

}  // namespace kpd
