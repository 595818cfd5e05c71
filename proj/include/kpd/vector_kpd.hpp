#pragma once

#include <span>
#include <vector>

#include "kpd/index_monoid.hpp"

// Kronecker product decomposition of vectors.
//
// A vector x over a profile (n_1,...,n_d) is decomposable when it equals the
// iterated Kronecker product of component vectors x_i in R^{n_i}.  The monic
// decomposition algorithm (MDA) extracts candidate components by slicing: the
// head index e of x determines per-axis head positions (e_1,...,e_d), and
// component i is read off by pinning every other axis at its head position.
// The reconstruction either matches x (decomposable, and the monic
// factorization is unique) or its error certifies non-decomposability, in
// which case gradient descent on the free trailing entries of the candidates
// gives the least-square approximation, and repeating on residuals gives a
// finite-sum decomposition.

namespace kpd {

struct SolverConfig {
  double zero_tol = 1e-12;   // |entry| <= zero_tol * max(1, ||x||_inf) reads as zero
  double exact_tol = 1e-9;   // ||x - rec|| <= exact_tol * ||x|| accepts exactness
  double step = 0.05;        // fixed gradient-descent step length
  long max_iters = 100000;
  double grad_tol = 1e-10;   // stop when ||grad||_2 <= grad_tol
  double sum_epsilon = 1e-9; // finite-sum stop: ||residual|| <= sum_epsilon
  long max_terms = 0;        // 0 means profile.total()
  bool halve_on_increase = false;  // off: stop at the first non-decreasing step
};

struct HeadInfo {
  index_t e = 0;      // 1-based linear head index
  double h0 = 0.0;    // head value
  std::vector<index_t> component_heads;  // e_i = per-axis head positions
};

struct KpdFactorization {
  double coefficient = 0.0;
  std::vector<std::vector<double>> components;  // monic, zeros before the head
  DimProfile target;
  double residual_norm = 0.0;  // ||x - coefficient * (x)_i components||_2
  index_t head_index = 0;      // e of the decomposed vector (0 for the zero vector)

  // coefficient * (x)_i components, length target.total().
  std::vector<double> reconstruction() const;
};

struct ExactKpdResult {
  bool decomposable = false;
  KpdFactorization factorization;  // the MDA candidate even when not decomposable
  double squared_error = 0.0;      // E = ||x/h0 - (x)_i components||^2
};

struct ApproxKpdResult {
  KpdFactorization factorization;
  double squared_error = 0.0;          // final E
  double initial_squared_error = 0.0;  // E at the MDA initialization
  long iterations = 0;                 // accepted descent steps
  bool converged = false;              // stopped by grad_tol or no-decrease, not max_iters
};

struct SumKpd {
  std::vector<KpdFactorization> terms;
  double residual_norm = 0.0;

  std::vector<double> reconstruction(const DimProfile& profile) const;
};

struct StepwiseComparison {
  double coefficient = 0.0;
  double simultaneous_squared_error = 0.0;
  double stepwise_squared_error = 0.0;
  std::vector<std::vector<double>> simultaneous_components;
  std::vector<std::vector<double>> stepwise_components;
};

// Head index, head value and the per-axis head positions (the alphabetic
// coordinates of e).  Throws ZeroVectorError when x is numerically zero.
HeadInfo head_info(std::span<const double> x, const DimProfile& profile,
                   double zero_tol = 1e-12);

// Slice of the monic-normalized x0 along axis `axis` (1-based) with every
// other axis pinned at its head position.  Equals the action of the
// delta-selector row matrix without materializing it.
std::vector<double> mda_project(std::span<const double> x0, const DimProfile& profile,
                                const std::vector<index_t>& component_heads,
                                std::size_t axis);

// MDA: candidate components by projection, verdict by reconstruction error.
// The zero vector yields the conventional factorization (coefficient 0,
// components delta_1) and counts as decomposable.
ExactKpdResult exact_kpd(std::span<const double> x, const DimProfile& profile,
                         const SolverConfig& cfg = {});

// Least-square approximation: candidates (0,...,0,1,u_1,...) per axis, free
// parameters initialized from the MDA projections, fixed-step gradient
// descent on E(u) = ||x0 - (x)_i x_i||^2 with closed-form gradients.
// Throws ZeroVectorError / NonFiniteError.
ApproxKpdResult approx_kpd(std::span<const double> x, const DimProfile& profile,
                           const SolverConfig& cfg = {});

// Repeated approximation on residuals.  The head index of the residual grows
// strictly each round, so at most profile.total() terms are produced; an
// exactly decomposable residual contributes a final exact term.
SumKpd finite_sum_kpd(std::span<const double> x, const DimProfile& profile,
                      const SolverConfig& cfg = {});

// Runs the simultaneous d-factor approximation and the two-factor cascade
// x = x_1 (x) rest, rest = x_2 (x) rest', ...; reports both squared errors on
// the monic-normalized input.  Requires order >= 3.
StepwiseComparison stepwise_vs_simultaneous(std::span<const double> x,
                                            const DimProfile& profile,
                                            const SolverConfig& cfg = {});

// E(u) and its gradient with respect to the free entries, exposed for the
// finite-difference cross-checks.  `components` must be in candidate form.
double squared_error(std::span<const double> x0, const DimProfile& profile,
                     const std::vector<std::vector<double>>& components);
std::vector<double> squared_error_gradient(
    std::span<const double> x0, const DimProfile& profile,
    const std::vector<std::vector<double>>& components,
    const std::vector<index_t>& component_heads);

double euclidean_norm(std::span<const double> x);

}  // namespace kpd
