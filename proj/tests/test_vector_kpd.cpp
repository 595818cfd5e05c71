#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kpd/errors.hpp"
#include "kpd/stp_linalg.hpp"
#include "kpd/vector_kpd.hpp"

using namespace kpd;

namespace {

std::mt19937 rng(424242);

std::vector<double> random_vector(std::size_t n) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

// A random component with a nonzero head somewhere in the first half.
std::vector<double> random_component(index_t n) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::uniform_int_distribution<index_t> head(1, std::max<index_t>(1, n / 2));
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  const index_t e = head(rng);
  for (index_t j = e; j <= n; ++j) v[j - 1] = dist(rng);
  if (std::abs(v[e - 1]) < 0.25) v[e - 1] = v[e - 1] < 0 ? -1.0 : 1.0;
  return v;
}

std::vector<double> kron_chain(const std::vector<std::vector<double>>& comps) {
  std::vector<double> out{1.0};
  for (const auto& c : comps) {
    std::vector<double> next;
    next.reserve(out.size() * c.size());
    for (double a : out)
      for (double b : c) next.push_back(a * b);
    out = std::move(next);
  }
  return out;
}

// The sparse test vector over [3,4,2]: entries 14,16,22,24 (1-based).
std::vector<double> sparse_example(double sixteenth) {
  std::vector<double> x(24, 0.0);
  x[13] = 2.0;
  x[15] = sixteenth;
  x[21] = -2.0;
  x[23] = -1.0;
  return x;
}

const DimProfile kProfile342({3, 4, 2});

}  // namespace

TEST_CASE("head info of the sparse example") {
  const std::vector<double> x = sparse_example(1.0);
  const HeadInfo head = head_info(x, kProfile342);
  CHECK(head.e == 14);
  CHECK(head.h0 == 2.0);
  CHECK(head.component_heads == std::vector<index_t>{2, 3, 2});
}

TEST_CASE("head info of a basis vector") {
  std::vector<double> x(12, 0.0);
  x[0] = 1.0;
  const HeadInfo head = head_info(x, DimProfile({3, 4}));
  CHECK(head.e == 1);
  CHECK(head.h0 == 1.0);
  CHECK(head.component_heads == std::vector<index_t>{1, 1});
}

TEST_CASE("head info matches construction on decomposable vectors") {
  for (int trial = 0; trial < 50; ++trial) {
    const DimProfile p({3, 4, 2});
    std::vector<std::vector<double>> comps = {
        random_component(3), random_component(4), random_component(2)};
    const std::vector<double> x = kron_chain(comps);
    const HeadInfo head = head_info(x, p);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      index_t e_i = 1;
      while (comps[i][e_i - 1] == 0.0) ++e_i;
      CHECK(head.component_heads[i] == e_i);
    }
  }
}

TEST_CASE("head info rejects the zero vector") {
  const std::vector<double> zero(24, 0.0);
  CHECK_THROWS_AS(head_info(zero, kProfile342), ZeroVectorError);
}

TEST_CASE("mda projections of the worked example") {
  std::vector<double> x0 = sparse_example(1.0);
  for (double& v : x0) v /= 2.0;
  const std::vector<index_t> heads{2, 3, 2};
  CHECK(mda_project(x0, kProfile342, heads, 1) ==
        std::vector<double>{0.0, 1.0, -1.0});
  CHECK(mda_project(x0, kProfile342, heads, 2) ==
        std::vector<double>{0.0, 0.0, 1.0, 0.5});
  CHECK(mda_project(x0, kProfile342, heads, 3) == std::vector<double>{0.0, 1.0});

  CHECK_THROWS_AS(mda_project(x0, kProfile342, heads, 0), std::invalid_argument);
  CHECK_THROWS_AS(mda_project(x0, kProfile342, heads, 4), std::invalid_argument);
}

TEST_CASE("mda projection on a single-axis profile returns the input") {
  const std::vector<double> x0 = random_vector(6);
  CHECK(mda_project(x0, DimProfile({6}), {1}, 1) == x0);
}

TEST_CASE("mda projection equals the delta-selector matrix product") {
  std::vector<double> x0 = sparse_example(1.0);
  for (double& v : x0) v /= 2.0;
  const std::vector<index_t> heads{2, 3, 2};
  const std::vector<index_t> dims{3, 4, 2};
  for (std::size_t axis = 1; axis <= 3; ++axis) {
    DenseMatrix xi = DenseMatrix::identity(1);
    for (std::size_t k = 1; k <= 3; ++k) {
      if (k == axis) {
        xi = kron(xi, DenseMatrix::identity(dims[k - 1]));
      } else {
        DenseMatrix row(1, dims[k - 1]);
        row(0, heads[k - 1] - 1) = 1.0;
        xi = kron(xi, row);
      }
    }
    const DenseMatrix product =
        matmul(xi, DenseMatrix(24, 1, x0));
    const std::vector<double> slice = mda_project(x0, kProfile342, heads, axis);
    REQUIRE(product.rows() == static_cast<index_t>(slice.size()));
    for (std::size_t j = 0; j < slice.size(); ++j) CHECK(product(j, 0) == slice[j]);
  }
}

TEST_CASE("exact decomposition of the worked example") {
  const std::vector<double> x = sparse_example(1.0);
  const ExactKpdResult r = exact_kpd(x, kProfile342);
  CHECK(r.decomposable);
  CHECK(r.factorization.coefficient == 2.0);
  CHECK(r.factorization.components[0] == std::vector<double>{0.0, 1.0, -1.0});
  CHECK(r.factorization.components[1] == std::vector<double>{0.0, 0.0, 1.0, 0.5});
  CHECK(r.factorization.components[2] == std::vector<double>{0.0, 1.0});
  CHECK(r.factorization.residual_norm <= 1e-12);
  CHECK(r.factorization.head_index == 14);
}

TEST_CASE("exact decomposition recovers random monic factors") {
  for (int trial = 0; trial < 100; ++trial) {
    const DimProfile p({2, 3, 2, 2});
    std::vector<std::vector<double>> comps = {
        random_component(2), random_component(3), random_component(2),
        random_component(2)};
    const std::vector<double> x = kron_chain(comps);
    const ExactKpdResult r = exact_kpd(x, p);
    REQUIRE(r.decomposable);

    // The monic factorization is unique: components must equal the
    // monic-normalized inputs and the coefficient the product of heads.
    double head_product = 1.0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      index_t e_i = 1;
      while (comps[i][e_i - 1] == 0.0) ++e_i;
      const double h = comps[i][e_i - 1];
      head_product *= h;
      for (std::size_t j = 0; j < comps[i].size(); ++j) {
        CHECK(r.factorization.components[i][j] ==
              doctest::Approx(comps[i][j] / h).epsilon(1e-12));
      }
    }
    CHECK(r.factorization.coefficient == doctest::Approx(head_product).epsilon(1e-12));
  }
}

TEST_CASE("exact decomposition rejects the perturbed example with error 2.25") {
  const std::vector<double> x = sparse_example(4.0);
  const ExactKpdResult r = exact_kpd(x, kProfile342);
  CHECK_FALSE(r.decomposable);
  CHECK(r.squared_error == doctest::Approx(2.25).epsilon(1e-12));
  // Candidate components are still reported.
  CHECK(r.factorization.components[0] == std::vector<double>{0.0, 1.0, -1.0});
  CHECK(r.factorization.components[1] == std::vector<double>{0.0, 0.0, 1.0, 2.0});
  CHECK(r.factorization.components[2] == std::vector<double>{0.0, 1.0});
}

TEST_CASE("exact decomposition of the zero vector uses the convention") {
  const std::vector<double> zero(24, 0.0);
  const ExactKpdResult r = exact_kpd(zero, kProfile342);
  CHECK(r.decomposable);
  CHECK(r.factorization.coefficient == 0.0);
  CHECK(r.factorization.components[0] == std::vector<double>{1.0, 0.0, 0.0});
  CHECK(r.factorization.components[1] == std::vector<double>{1.0, 0.0, 0.0, 0.0});
  CHECK(r.factorization.components[2] == std::vector<double>{1.0, 0.0});
  CHECK(r.factorization.residual_norm == 0.0);
}

TEST_CASE("approximate decomposition of the perturbed example") {
  const std::vector<double> x = sparse_example(4.0);
  SolverConfig cfg;
  cfg.step = 0.05;
  cfg.max_iters = 500;
  const ApproxKpdResult r = approx_kpd(x, kProfile342, cfg);

  CHECK(r.initial_squared_error == doctest::Approx(2.25).epsilon(1e-12));
  const double u = r.factorization.components[0][2];
  const double v = r.factorization.components[1][3];
  CHECK(u == doctest::Approx(-0.4306).epsilon(1e-3));
  CHECK(v == doctest::Approx(1.8688).epsilon(1e-3));
  CHECK(r.squared_error == doctest::Approx(0.4343).epsilon(1e-3));
  CHECK(r.factorization.components[2] == std::vector<double>{0.0, 1.0});
  CHECK(r.iterations <= 500);
  // Residual norm relates to E through the head coefficient.
  CHECK(r.factorization.residual_norm ==
        doctest::Approx(2.0 * std::sqrt(r.squared_error)).epsilon(1e-12));
}

TEST_CASE("approximate decomposition is immediate on decomposable input") {
  const std::vector<double> x = sparse_example(1.0);
  const ApproxKpdResult r = approx_kpd(x, kProfile342);
  CHECK(r.squared_error <= 1e-18);
  CHECK(r.iterations == 0);
  CHECK(r.converged);
  CHECK(r.factorization.components[0] == std::vector<double>{0.0, 1.0, -1.0});
}

TEST_CASE("approximate decomposition throws on zero and non-finite input") {
  const std::vector<double> zero(24, 0.0);
  CHECK_THROWS_AS(approx_kpd(zero, kProfile342), ZeroVectorError);

  SolverConfig cfg;
  cfg.step = 1e300;  // guarantees overflow on the first trial step
  const std::vector<double> x = sparse_example(4.0);
  CHECK_THROWS_AS(approx_kpd(x, kProfile342, cfg), NonFiniteError);
}

TEST_CASE("descent error is monotone in the iteration budget") {
  const std::vector<double> x = sparse_example(4.0);
  double previous = 1e300;
  for (long k = 0; k <= 40; k += 5) {
    SolverConfig cfg;
    cfg.max_iters = k;
    const ApproxKpdResult r = approx_kpd(x, kProfile342, cfg);
    CHECK(r.squared_error <= previous + 1e-15);
    previous = r.squared_error;
  }
}

TEST_CASE("closed-form gradient matches central differences") {
  for (int trial = 0; trial < 100; ++trial) {
    const DimProfile p({3, 4, 2});
    const std::vector<double> x = random_vector(24);
    HeadInfo head;
    try {
      head = head_info(x, p);
    } catch (const ZeroVectorError&) {
      continue;
    }
    std::vector<double> x0 = x;
    for (double& v : x0) v /= head.h0;

    // Candidate components with random free entries.
    std::vector<std::vector<double>> comps(3);
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < 3; ++i) {
      comps[i].assign(static_cast<std::size_t>(p.dims()[i]), 0.0);
      comps[i][head.component_heads[i] - 1] = 1.0;
      for (std::size_t j = static_cast<std::size_t>(head.component_heads[i]);
           j < comps[i].size(); ++j) {
        comps[i][j] = random_vector(1)[0];
        slots.emplace_back(i, j);
      }
    }

    const std::vector<double> grad =
        squared_error_gradient(x0, p, comps, head.component_heads);
    REQUIRE(grad.size() == slots.size());

    const double h = 1e-6;
    double worst = 0.0;
    double scale = 1.0;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      auto plus = comps, minus = comps;
      plus[slots[s].first][slots[s].second] += h;
      minus[slots[s].first][slots[s].second] -= h;
      const double fd =
          (squared_error(x0, p, plus) - squared_error(x0, p, minus)) / (2 * h);
      worst = std::max(worst, std::abs(fd - grad[s]));
      scale = std::max(scale, std::abs(grad[s]));
    }
    CHECK(worst / scale <= 1e-6);
  }
}

TEST_CASE("finite sum of the worked example needs three terms") {
  const std::vector<double> x = sparse_example(4.0);
  SolverConfig cfg;
  cfg.step = 0.05;
  const SumKpd sum = finite_sum_kpd(x, kProfile342, cfg);

  REQUIRE(sum.terms.size() == 3);
  CHECK(sum.terms[0].coefficient == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sum.terms[1].coefficient == doctest::Approx(0.2624).epsilon(1e-3));
  CHECK(sum.terms[2].coefficient == doctest::Approx(-1.1388).epsilon(1e-3));

  // The final term is an exact factorization of the remaining residual.
  CHECK(sum.terms[2].components[0] == std::vector<double>{0.0, 0.0, 1.0});
  CHECK(sum.terms[2].components[1] == std::vector<double>{0.0, 0.0, 1.0, 0.0});
  CHECK(sum.terms[2].components[2] == std::vector<double>{0.0, 1.0});

  CHECK(sum.residual_norm <= 1e-6 * euclidean_norm(x));

  // Heads strictly increase across the residual sequence.
  CHECK(sum.terms[0].head_index == 14);
  CHECK(sum.terms[1].head_index == 16);
  CHECK(sum.terms[2].head_index == 22);

  // Reconstruction matches the input within the reported residual.
  const std::vector<double> rec = sum.reconstruction(kProfile342);
  double err = 0.0;
  for (std::size_t k = 0; k < rec.size(); ++k) {
    err += (x[k] - rec[k]) * (x[k] - rec[k]);
  }
  CHECK(std::sqrt(err) == doctest::Approx(sum.residual_norm).epsilon(1e-12));
}

TEST_CASE("step halving recovers from an oversized step") {
  const std::vector<double> x = sparse_example(4.0);
  SolverConfig cfg;
  cfg.step = 50.0;  // diverges immediately at a fixed step
  cfg.halve_on_increase = true;
  const ApproxKpdResult r = approx_kpd(x, kProfile342, cfg);
  CHECK(r.converged);
  CHECK(r.squared_error <= r.initial_squared_error);
  CHECK(r.squared_error == doctest::Approx(0.4343).epsilon(1e-3));
}

TEST_CASE("max_terms truncates the finite sum") {
  const std::vector<double> x = sparse_example(4.0);
  SolverConfig cfg;
  cfg.max_terms = 1;
  const SumKpd sum = finite_sum_kpd(x, kProfile342, cfg);
  CHECK(sum.terms.size() == 1);
  CHECK(sum.residual_norm > 0.0);
}

TEST_CASE("finite sum of a decomposable vector is a single term") {
  const std::vector<double> x = sparse_example(1.0);
  const SumKpd sum = finite_sum_kpd(x, kProfile342);
  REQUIRE(sum.terms.size() == 1);
  CHECK(sum.residual_norm <= 1e-12);
}

TEST_CASE("finite sum of the zero vector is empty") {
  const std::vector<double> zero(24, 0.0);
  const SumKpd sum = finite_sum_kpd(zero, kProfile342);
  CHECK(sum.terms.empty());
  CHECK(sum.residual_norm == 0.0);
}

TEST_CASE("finite sum terminates exactly on random small vectors") {
  const DimProfile p({2, 2});
  SolverConfig cfg;
  cfg.sum_epsilon = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> x = random_vector(4);
    const SumKpd sum = finite_sum_kpd(x, p, cfg);
    CHECK(sum.terms.size() <= 4);
    index_t previous = 0;
    for (const auto& term : sum.terms) {
      CHECK(term.head_index > previous);
      previous = term.head_index;
    }
    const std::vector<double> rec = sum.reconstruction(p);
    double err = 0.0;
    for (std::size_t k = 0; k < 4; ++k) err += (x[k] - rec[k]) * (x[k] - rec[k]);
    CHECK(std::sqrt(err) <= 1e-9 * euclidean_norm(x));
  }
}

TEST_CASE("decomposability over [2,2] agrees with the rank-one oracle") {
  const DimProfile p({2, 2});
  const double vals[3] = {-1.0, 0.0, 1.0};
  for (double a : vals)
    for (double b : vals)
      for (double c : vals)
        for (double d : vals) {
          const std::vector<double> x{a, b, c, d};
          // x = (p,q) (x) (r,s) exists iff ad = bc.
          const bool oracle = (a * d - b * c) == 0.0;
          const ExactKpdResult r = exact_kpd(x, p);
          CHECK(r.decomposable == oracle);
        }
}

TEST_CASE("step by step decomposition reproduces the worked example") {
  const std::vector<double> x = sparse_example(1.0);
  const StepwiseComparison cmp = stepwise_vs_simultaneous(x, kProfile342);
  CHECK(cmp.coefficient == doctest::Approx(2.0));
  CHECK(cmp.simultaneous_squared_error <= 1e-18);
  CHECK(cmp.stepwise_squared_error <= 1e-18);
  REQUIRE(cmp.stepwise_components.size() == 3);
  CHECK(cmp.stepwise_components[0] == std::vector<double>{0.0, 1.0, -1.0});
  CHECK(cmp.stepwise_components[1] == std::vector<double>{0.0, 0.0, 1.0, 0.5});
  CHECK(cmp.stepwise_components[2] == std::vector<double>{0.0, 1.0});
}

TEST_CASE("step by step comparison reports both errors on perturbed input") {
  std::vector<double> x = sparse_example(1.0);
  std::mt19937 local(99);
  std::uniform_real_distribution<double> dist(-0.05, 0.05);
  for (double& v : x) v += dist(local);
  const StepwiseComparison cmp = stepwise_vs_simultaneous(x, kProfile342);
  CHECK(std::isfinite(cmp.simultaneous_squared_error));
  CHECK(std::isfinite(cmp.stepwise_squared_error));
  CHECK(cmp.simultaneous_squared_error >= 0.0);
  CHECK(cmp.stepwise_squared_error >= 0.0);

  CHECK_THROWS_AS(stepwise_vs_simultaneous(x, DimProfile({4, 6}), SolverConfig{}),
                  std::invalid_argument);
}

TEST_CASE("head multiplicativity on decomposable input") {
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> comps = {random_component(3),
                                              random_component(4),
                                              random_component(2)};
    const std::vector<double> x = kron_chain(comps);
    const HeadInfo head = head_info(x, kProfile342);
    double product = 1.0;
    for (const auto& c : comps) {
      for (double v : c) {
        if (v != 0.0) {
          product *= v;
          break;
        }
      }
    }
    CHECK(head.h0 == doctest::Approx(product).epsilon(1e-12));
  }
}
