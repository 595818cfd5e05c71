#pragma once

#include <utility>
#include <vector>

#include "kpd/vector_kpd.hpp"
#include "kpd/stp_linalg.hpp"

// Matrix Kronecker product decomposition N = B (x) C with B m-by-n and
// C p-by-q, reduced to vector decomposition: with Psi = I_n (x) W_[m,q] (x) I_p,
// the column stacking satisfies Vc(B (x) C) = Psi (Vc(B) (x) Vc(C)), so
// Psi^T Vc(N) is decomposable over [mn, pq] exactly when N decomposes.

namespace kpd {

struct MatrixShape {
  index_t m = 0, n = 0, p = 0, q = 0;  // B is m x n, C is p x q
};

// The permutation realizing I_n (x) W_[m,q] (x) I_p on length-mnpq vectors.
PermSpec psi_spec(index_t m, index_t n, index_t p, index_t q);
DenseMatrix psi_matrix(index_t m, index_t n, index_t p, index_t q);

struct MatrixKpdResult {
  bool decomposable = false;
  double coefficient = 0.0;
  DenseMatrix b_monic;  // m x n, head entry 1 in column-stacking order
  DenseMatrix c_monic;  // p x q
  double residual_frobenius = 0.0;     // ||N - coefficient * Bm (x) Cm||_F
  double squared_error = 0.0;          // vector-level E
  double initial_squared_error = 0.0;  // approx mode only
  long iterations = 0;                 // approx mode only

  // The canonical factor pair with the coefficient folded into B.
  DenseMatrix b() const { return coefficient * b_monic; }
  const DenseMatrix& c() const { return c_monic; }
};

MatrixKpdResult matrix_exact_kpd(const DenseMatrix& N, const MatrixShape& shape,
                                 const SolverConfig& cfg = {});
MatrixKpdResult matrix_approx_kpd(const DenseMatrix& N, const MatrixShape& shape,
                                  const SolverConfig& cfg = {});

struct MatrixSumKpd {
  struct Term {
    double coefficient = 0.0;
    DenseMatrix b;  // monic
    DenseMatrix c;  // monic
  };
  std::vector<Term> terms;
  double residual_frobenius = 0.0;

  DenseMatrix reconstruction(index_t rows, index_t cols) const;
};

MatrixSumKpd matrix_sum_kpd(const DenseMatrix& N, const MatrixShape& shape,
                            const SolverConfig& cfg = {});

struct MatrixMultifoldResult {
  bool ok = false;
  std::size_t failed_stage = 0;  // 1-based, meaningful when !ok
  double coefficient = 0.0;
  std::vector<DenseMatrix> factors;  // monic; coefficient * (x)_i factors = N
};

// Left-to-right two-fold decomposition: N = B_1 (x) rest, then rest, ...
// shapes[i] = (m_i, n_i); the products over i must match N's dimensions.
MatrixMultifoldResult matrix_multifold_kpd(
    const DenseMatrix& N, const std::vector<std::pair<index_t, index_t>>& shapes,
    const SolverConfig& cfg = {});

// Every way to split (rows, cols) into (m, n, p, q) with m*p = rows and
// n*q = cols, together with the exact-candidate residual for each.  Shapes
// are ordered by residual; used by shape searches and the info command.
struct ShapeCandidate {
  MatrixShape shape;
  double residual_frobenius = 0.0;
  bool decomposable = false;
};
std::vector<ShapeCandidate> enumerate_matrix_shapes(const DenseMatrix& N,
                                                    const SolverConfig& cfg = {});

}  // namespace kpd
