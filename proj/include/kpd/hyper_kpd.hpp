#pragma once

#include <vector>

#include "kpd/hypermatrix.hpp"
#include "kpd/matrix_kpd.hpp"
#include "kpd/vector_kpd.hpp"

// Kronecker products of hypermatrices and their decompositions.  Three
// products are supported:
//   outer      - concatenated axes, c_{i,j} = a_i * b_j;
//   partition  - Kronecker product of chosen matrix expressions;
//   paired     - axiswise index interleaving k_s = (i_s - 1) n_s + j_s, the
//                generalization of the matrix Kronecker product.
// Each decomposition is a reduction to the vector (or matrix) solver through
// a permutation of coordinates.

namespace kpd {

Hypermatrix outer_product(const Hypermatrix& a, const Hypermatrix& b);

struct HyperKpdResult {
  bool decomposable = false;
  double coefficient = 0.0;
  Hypermatrix a_monic;
  Hypermatrix b_monic;
  double residual_norm = 0.0;
  double squared_error = 0.0;
  double initial_squared_error = 0.0;  // approx modes only
  long iterations = 0;                 // approx modes only

  // First factor with the coefficient folded in.
  Hypermatrix a() const;
  const Hypermatrix& b() const { return b_monic; }
};

// Exact outer decomposition: the first lead_order axes form A, the rest B.
HyperKpdResult outer_kpd(const Hypermatrix& c, std::size_t lead_order,
                         const SolverConfig& cfg = {});

// Kronecker product of the matrix expressions chosen by the two splits,
// reinterpreted as the order r+s hypermatrix whose combined expression it is.
Hypermatrix partition_product(const Hypermatrix& a, const IndexSplit& split_a,
                              const Hypermatrix& b, const IndexSplit& split_b);

struct FactorLayout {
  DimProfile profile;
  IndexSplit split;
};

// Decomposes the split's matrix expression of C as a matrix Kronecker
// product and folds both factors back into hypermatrices with the given
// layouts.
HyperKpdResult partition_kpd(const Hypermatrix& c, const IndexSplit& split,
                             const FactorLayout& factor_a,
                             const FactorLayout& factor_b,
                             const SolverConfig& cfg = {});
HyperKpdResult partition_approx_kpd(const Hypermatrix& c, const IndexSplit& split,
                                    const FactorLayout& factor_a,
                                    const FactorLayout& factor_b,
                                    const SolverConfig& cfg = {});

// Paired product; operands of different orders are padded with trailing
// dimension-1 axes.
Hypermatrix paired_product(const Hypermatrix& a, const Hypermatrix& b);

// The same product computed through matrix forms: with prefix splits of
// row_count axes, the product's expression is W_L (A (x) B) W_R^T for the
// interleaving permutations of the row and column axis groups.
DenseMatrix paired_product_via_forms(const Hypermatrix& a, const Hypermatrix& b,
                                     std::size_t row_count);

struct PairedShape {
  DimProfile factor_a;  // (m_1,...,m_d)
  DimProfile factor_b;  // (n_1,...,n_d)

  DimProfile target() const;  // (m_1 n_1, ..., m_d n_d)
};

// Interleaving permutation over profile_a ++ profile_b sending grouped axis
// order (a_1..a_d, b_1..b_d) to (a_1, b_1, ..., a_d, b_d).
PermSpec interleave_spec(const DimProfile& profile_a, const DimProfile& profile_b);

// Psi with V(A paired B) = Psi (V(A) (x) V(B)).
PermSpec paired_psi(const PairedShape& shape);

HyperKpdResult paired_kpd(const Hypermatrix& c, const PairedShape& shape,
                          const SolverConfig& cfg = {});
HyperKpdResult paired_approx_kpd(const Hypermatrix& c, const PairedShape& shape,
                                 const SolverConfig& cfg = {});

struct HyperSumKpd {
  struct Term {
    double coefficient = 0.0;
    Hypermatrix a;  // monic
    Hypermatrix b;  // monic
  };
  std::vector<Term> terms;
  double residual_norm = 0.0;

  Hypermatrix reconstruction(const DimProfile& target) const;
};

HyperSumKpd paired_sum_kpd(const Hypermatrix& c, const PairedShape& shape,
                           const SolverConfig& cfg = {});

struct HyperMultifoldResult {
  bool ok = false;
  std::size_t failed_stage = 0;
  double coefficient = 0.0;
  std::vector<Hypermatrix> factors;  // monic
};

// Left-to-right paired two-fold decomposition into the listed profiles
// (elementwise products must match C's profile).
HyperMultifoldResult paired_multifold_kpd(const Hypermatrix& c,
                                          const std::vector<DimProfile>& profiles,
                                          const SolverConfig& cfg = {});

}  // namespace kpd
