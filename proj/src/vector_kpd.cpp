#include "kpd/vector_kpd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpd/errors.hpp"

namespace kpd {

double euclidean_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

namespace {

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

// Iterated Kronecker product of the components (all column vectors).
std::vector<double> kron_chain(const std::vector<std::vector<double>>& components) {
  std::vector<double> out{1.0};
  for (const auto& c : components) {
    std::vector<double> next;
    next.reserve(out.size() * c.size());
    for (double a : out)
      for (double b : c) next.push_back(a * b);
    out = std::move(next);
  }
  return out;
}

void check_length(std::span<const double> x, const DimProfile& profile,
                  const char* who) {
  if (static_cast<index_t>(x.size()) != profile.total()) {
    throw std::invalid_argument(std::string(who) + ": length != profile total");
  }
}

// Candidate components: exact zeros before the head, exact 1 at it, the MDA
// slice values after it.
std::vector<std::vector<double>> candidate_components(
    std::span<const double> x0, const DimProfile& profile,
    const std::vector<index_t>& heads) {
  std::vector<std::vector<double>> comps(profile.order());
  for (std::size_t i = 1; i <= profile.order(); ++i) {
    std::vector<double> slice = mda_project(x0, profile, heads, i);
    for (index_t j = 0; j + 1 < heads[i - 1]; ++j) slice[j] = 0.0;
    slice[heads[i - 1] - 1] = 1.0;
    comps[i - 1] = std::move(slice);
  }
  return comps;
}

}  // namespace

std::vector<double> KpdFactorization::reconstruction() const {
  std::vector<double> r = kron_chain(components);
  for (double& v : r) v *= coefficient;
  return r;
}

std::vector<double> SumKpd::reconstruction(const DimProfile& profile) const {
  std::vector<double> out(static_cast<std::size_t>(profile.total()), 0.0);
  for (const auto& term : terms) {
    const std::vector<double> r = term.reconstruction();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += r[k];
  }
  return out;
}

HeadInfo head_info(std::span<const double> x, const DimProfile& profile,
                   double zero_tol) {
  check_length(x, profile, "head_info");
  const double threshold = zero_tol * std::max(1.0, max_abs(x));
  for (std::size_t s = 0; s < x.size(); ++s) {
    if (std::abs(x[s]) > threshold) {
      HeadInfo info;
      info.e = static_cast<index_t>(s) + 1;
      info.h0 = x[s];
      info.component_heads = linear_to_multi_values(info.e, profile);
      return info;
    }
  }
  throw ZeroVectorError("head_info: vector is numerically zero");
}

std::vector<double> mda_project(std::span<const double> x0, const DimProfile& profile,
                                const std::vector<index_t>& component_heads,
                                std::size_t axis) {
  check_length(x0, profile, "mda_project");
  if (axis < 1 || axis > profile.order()) {
    throw std::invalid_argument("mda_project: axis out of range");
  }
  if (component_heads.size() != profile.order()) {
    throw std::invalid_argument("mda_project: head arity mismatch");
  }
  std::vector<index_t> multi = component_heads;
  const index_t n = profile.dims()[axis - 1];
  std::vector<double> slice(static_cast<std::size_t>(n), 0.0);
  for (index_t j = 1; j <= n; ++j) {
    multi[axis - 1] = j;
    slice[j - 1] = x0[multi_to_linear(multi, profile) - 1];
  }
  return slice;
}

double squared_error(std::span<const double> x0, const DimProfile& profile,
                     const std::vector<std::vector<double>>& components) {
  check_length(x0, profile, "squared_error");
  const std::vector<double> r = kron_chain(components);
  double e = 0.0;
  for (std::size_t k = 0; k < x0.size(); ++k) {
    const double d = x0[k] - r[k];
    e += d * d;
  }
  return e;
}

std::vector<double> squared_error_gradient(
    std::span<const double> x0, const DimProfile& profile,
    const std::vector<std::vector<double>>& components,
    const std::vector<index_t>& component_heads) {
  check_length(x0, profile, "squared_error_gradient");
  const std::size_t d = profile.order();
  const std::vector<double> r = kron_chain(components);

  // Accumulate dE/d(component_i[j]) for every entry, then keep the free ones.
  std::vector<std::vector<double>> g(d);
  for (std::size_t i = 0; i < d; ++i)
    g[i].assign(components[i].size(), 0.0);

  std::vector<index_t> counter(d, 0);  // 0-based multi-index
  std::vector<double> prefix(d + 1, 1.0), suffix(d + 1, 1.0);
  for (std::size_t pos = 0; pos < x0.size(); ++pos) {
    const double diff = x0[pos] - r[pos];
    if (diff != 0.0) {
      for (std::size_t k = 0; k < d; ++k)
        prefix[k + 1] = prefix[k] * components[k][counter[k]];
      suffix[d] = 1.0;
      for (std::size_t k = d; k >= 1; --k)
        suffix[k - 1] = components[k - 1][counter[k - 1]] * suffix[k];
      for (std::size_t i = 0; i < d; ++i) {
        const double loo = prefix[i] * suffix[i + 1];
        g[i][counter[i]] += -2.0 * diff * loo;
      }
    }
    for (std::size_t k = d; k >= 1; --k) {
      if (++counter[k - 1] < profile.dims()[k - 1]) break;
      counter[k - 1] = 0;
      if (k == 1) break;
    }
  }

  std::vector<double> grad;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = static_cast<std::size_t>(component_heads[i]);
         j < g[i].size(); ++j)
      grad.push_back(g[i][j]);
  return grad;
}

ExactKpdResult exact_kpd(std::span<const double> x, const DimProfile& profile,
                         const SolverConfig& cfg) {
  check_length(x, profile, "exact_kpd");
  ExactKpdResult result;

  const double x_norm = euclidean_norm(x);
  if (max_abs(x) <= cfg.zero_tol) {
    // Conventional zero factorization: coefficient 0, components delta_1.
    result.decomposable = true;
    result.factorization.coefficient = 0.0;
    result.factorization.target = profile;
    for (index_t n : profile.dims()) {
      std::vector<double> c(static_cast<std::size_t>(n), 0.0);
      c[0] = 1.0;
      result.factorization.components.push_back(std::move(c));
    }
    return result;
  }

  const HeadInfo head = head_info(x, profile, cfg.zero_tol);
  std::vector<double> x0(x.begin(), x.end());
  for (double& v : x0) v /= head.h0;

  KpdFactorization& f = result.factorization;
  f.coefficient = head.h0;
  f.target = profile;
  f.head_index = head.e;
  f.components = candidate_components(x0, profile, head.component_heads);

  const std::vector<double> rec = f.reconstruction();
  double rss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - rec[k];
    rss += diff * diff;
  }
  f.residual_norm = std::sqrt(rss);
  result.squared_error = squared_error(x0, profile, f.components);
  result.decomposable = f.residual_norm <= cfg.exact_tol * x_norm;
  return result;
}

ApproxKpdResult approx_kpd(std::span<const double> x, const DimProfile& profile,
                           const SolverConfig& cfg) {
  check_length(x, profile, "approx_kpd");
  if (max_abs(x) <= cfg.zero_tol) {
    throw ZeroVectorError("approx_kpd: vector is numerically zero");
  }
  const HeadInfo head = head_info(x, profile, cfg.zero_tol);
  std::vector<double> x0(x.begin(), x.end());
  for (double& v : x0) v /= head.h0;

  const std::size_t d = profile.order();
  std::vector<std::vector<double>> comps =
      candidate_components(x0, profile, head.component_heads);

  // Location of each free parameter inside its component.
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = static_cast<std::size_t>(head.component_heads[i]);
         j < comps[i].size(); ++j)
      slots.emplace_back(i, j);

  ApproxKpdResult result;
  double e_current = squared_error(x0, profile, comps);
  result.initial_squared_error = e_current;

  double h = cfg.step;
  long iters = 0;
  bool converged = slots.empty();
  while (!slots.empty() && iters < cfg.max_iters) {
    const std::vector<double> grad =
        squared_error_gradient(x0, profile, comps, head.component_heads);
    double gn = 0.0;
    for (double v : grad) gn += v * v;
    gn = std::sqrt(gn);
    if (!std::isfinite(gn)) {
      throw NonFiniteError("approx_kpd: gradient is not finite");
    }
    if (gn <= cfg.grad_tol) {
      converged = true;
      break;
    }

    std::vector<std::vector<double>> trial = comps;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      trial[slots[s].first][slots[s].second] -= h * grad[s];
    }
    const double e_trial = squared_error(x0, profile, trial);
    if (!std::isfinite(e_trial)) {
      if (!cfg.halve_on_increase) {
        throw NonFiniteError("approx_kpd: squared error diverged (step too large)");
      }
      h *= 0.5;
      if (h < 1e-18) { converged = true; break; }
      continue;
    }
    if (e_trial < e_current) {
      comps = std::move(trial);
      e_current = e_trial;
      ++iters;
      continue;
    }
    // The step no longer decreases E.
    if (cfg.halve_on_increase && h >= 1e-18) {
      h *= 0.5;
      continue;
    }
    converged = true;
    break;
  }

  KpdFactorization& f = result.factorization;
  f.coefficient = head.h0;
  f.components = std::move(comps);
  f.target = profile;
  f.head_index = head.e;
  const std::vector<double> rec = f.reconstruction();
  double rss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - rec[k];
    rss += diff * diff;
  }
  f.residual_norm = std::sqrt(rss);
  result.squared_error = squared_error(x0, profile, f.components);
  result.iterations = iters;
  result.converged = converged;
  return result;
}

SumKpd finite_sum_kpd(std::span<const double> x, const DimProfile& profile,
                      const SolverConfig& cfg) {
  check_length(x, profile, "finite_sum_kpd");
  const long max_terms =
      cfg.max_terms > 0 ? cfg.max_terms : static_cast<long>(profile.total());

  SumKpd sum;
  std::vector<double> residual(x.begin(), x.end());
  while (static_cast<long>(sum.terms.size()) < max_terms) {
    if (euclidean_norm(residual) <= cfg.sum_epsilon || max_abs(residual) <= cfg.zero_tol) {
      break;
    }
    ExactKpdResult exact = exact_kpd(residual, profile, cfg);
    if (exact.decomposable) {
      const std::vector<double> rec = exact.factorization.reconstruction();
      for (std::size_t k = 0; k < residual.size(); ++k) residual[k] -= rec[k];
      sum.terms.push_back(std::move(exact.factorization));
      break;
    }
    ApproxKpdResult approx = approx_kpd(residual, profile, cfg);
    const std::vector<double> rec = approx.factorization.reconstruction();
    for (std::size_t k = 0; k < residual.size(); ++k) residual[k] -= rec[k];
    sum.terms.push_back(std::move(approx.factorization));
  }
  sum.residual_norm = euclidean_norm(residual);
  return sum;
}

StepwiseComparison stepwise_vs_simultaneous(std::span<const double> x,
                                            const DimProfile& profile,
                                            const SolverConfig& cfg) {
  check_length(x, profile, "stepwise_vs_simultaneous");
  if (profile.order() < 3) {
    throw std::invalid_argument("stepwise_vs_simultaneous: order must be >= 3");
  }

  StepwiseComparison cmp;
  const ApproxKpdResult sim = approx_kpd(x, profile, cfg);
  cmp.simultaneous_squared_error = sim.squared_error;
  cmp.simultaneous_components = sim.factorization.components;
  cmp.coefficient = sim.factorization.coefficient;

  // Two-factor cascade: peel one leading axis at a time.
  const std::size_t d = profile.order();
  std::vector<double> rest(x.begin(), x.end());
  std::vector<std::vector<double>> comps;
  double coefficient = 1.0;
  for (std::size_t stage = 1; stage <= d - 1; ++stage) {
    index_t tail = 1;
    for (std::size_t k = stage + 1; k <= d; ++k)
      tail = checked_mul(tail, profile.dims()[k - 1]);
    const DimProfile two({profile.dims()[stage - 1], tail});
    ApproxKpdResult ap = approx_kpd(rest, two, cfg);
    coefficient *= ap.factorization.coefficient;
    comps.push_back(ap.factorization.components[0]);
    rest = ap.factorization.components[1];
  }
  comps.push_back(rest);

  std::vector<double> x0(x.begin(), x.end());
  for (double& v : x0) v /= coefficient;
  cmp.stepwise_squared_error = squared_error(x0, profile, comps);
  cmp.stepwise_components = std::move(comps);
  return cmp;
}

}  // namespace kpd
