#include <cmath>
#include <numeric>

#include "doctest.h"
#include "s2r2/alignment.hpp"
#include "s2r2/rng.hpp"

using namespace s2r2;

namespace {

CostMatrix random_cost(SplitMix64& rng, std::size_t m, std::size_t n) {
  CostMatrix c;
  c.c = Matrix(m, n);
  for (double& v : c.c.data()) v = 2.0 * rng.next_double();
  return c;
}

Distribution random_marginal(SplitMix64& rng, std::size_t n) {
  Distribution d;
  d.mass.resize(n);
  double s = 0.0;
  for (double& x : d.mass) {
    x = 0.05 + rng.next_double();
    s += x;
  }
  for (double& x : d.mass) x /= s;
  return d;
}

// Random feasible plan: alternating row/column rescaling of a random
// positive matrix onto the prescribed marginals.
Matrix random_feasible_plan(SplitMix64& rng, const Distribution& mu,
                            const Distribution& nu) {
  const std::size_t m = mu.size(), n = nu.size();
  Matrix t(m, n);
  for (double& v : t.data()) v = 0.05 + rng.next_double();
  for (int round = 0; round < 200; ++round) {
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += t(i, j);
      for (std::size_t j = 0; j < n; ++j) t(i, j) *= mu[i] / s;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += t(i, j);
      for (std::size_t i = 0; i < m; ++i) t(i, j) *= nu[j] / s;
    }
  }
  return t;
}

double plan_cost(const Matrix& t, const Matrix& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t.data()[i] * c.data()[i];
  return s;
}

SegmentEmbeddings embeddings_from(const Matrix& m) {
  SegmentEmbeddings e;
  e.matrix = m;
  e.lengths.assign(m.rows(), 1);
  return e;
}

}  // namespace

TEST_SUITE("alignment") {

TEST_CASE("cost_matrix basic geometry") {
  auto e = embeddings_from(Matrix::from_rows({{1, 0}, {0, 1}}));
  auto c_same = cost_matrix(e, e);
  CHECK(c_same.c(0, 0) == 0.0);  // identical rows: exactly zero diagonal
  CHECK(c_same.c(1, 1) == 0.0);
  CHECK(c_same.c(0, 1) == doctest::Approx(1.0));  // orthogonal

  auto anti = embeddings_from(Matrix::from_rows({{-1, 0}}));
  auto e1 = embeddings_from(Matrix::from_rows({{1, 0}}));
  auto c_anti = cost_matrix(e1, anti);
  CHECK(c_anti.c(0, 0) == doctest::Approx(2.0));  // antipodal upper bound
}

TEST_CASE("solve_exact on the 2x2 vertex-enumeration oracle") {
  Distribution half{{0.5, 0.5}};

  CostMatrix c0;
  c0.c = Matrix::from_rows({{0, 1}, {1, 0}});
  auto p0 = solve_exact(c0, half, half);
  CHECK(p0.t(0, 0) == doctest::Approx(0.5));
  CHECK(p0.t(0, 1) == doctest::Approx(0.0));
  CHECK(p0.t(1, 0) == doctest::Approx(0.0));
  CHECK(p0.t(1, 1) == doctest::Approx(0.5));
  CHECK(p0.objective == doctest::Approx(0.0));

  // the 2x2 polytope with uniform marginals has the two vertices t=0 and
  // t=0.5 on the diagonal; enumerate both and keep the cheaper
  CostMatrix c1;
  c1.c = Matrix::from_rows({{0.2, 0.8}, {0.9, 0.1}});
  const double vertex_diag = 0.5 * (0.2 + 0.1);   // t = 0.5
  const double vertex_anti = 0.5 * (0.8 + 0.9);   // t = 0
  const double oracle = std::min(vertex_diag, vertex_anti);
  auto p1 = solve_exact(c1, half, half);
  CHECK(p1.objective == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(p1.t(0, 0) == doctest::Approx(0.5));
  CHECK(p1.t(1, 1) == doctest::Approx(0.5));

  // drift for the derived instance
  auto d = segment_drift(p1, c1);
  CHECK(d.d[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(d.d[1] == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("solve_exact forced single-row plan") {
  SplitMix64 rng(2);
  auto c = random_cost(rng, 1, 5);
  Distribution mu{{1.0}};
  auto nu = random_marginal(rng, 5);
  auto p = solve_exact(c, mu, nu);
  for (std::size_t v = 0; v < 5; ++v) CHECK(p.t(0, v) == doctest::Approx(nu[v]));
}

TEST_CASE("solve_exact guards") {
  SplitMix64 rng(3);
  auto c = random_cost(rng, 70, 70);
  auto m = random_marginal(rng, 70);
  CHECK_THROWS_AS((void)solve_exact(c, m, m), UseSinkhorn);

  auto c2 = random_cost(rng, 2, 2);
  Distribution bad{{0.6, 0.6}};
  Distribution half{{0.5, 0.5}};
  CHECK_THROWS_AS((void)solve_exact(c2, bad, half), MarginalMismatch);
}

TEST_CASE("exact solver beats random feasible plans") {
  SplitMix64 rng(101);
  for (int inst = 0; inst < 40; ++inst) {
    const std::size_t m = 2 + rng.next_below(7), n = 2 + rng.next_below(7);
    auto c = random_cost(rng, m, n);
    auto mu = random_marginal(rng, m);
    auto nu = random_marginal(rng, n);
    auto best = solve_exact(c, mu, nu);
    CHECK(best.residual < 1e-9);
    for (int k = 0; k < 100; ++k) {
      auto t = random_feasible_plan(rng, mu, nu);
      CHECK(best.objective <= plan_cost(t, c.c) + 1e-9);
    }
  }
}

TEST_CASE("sinkhorn matches exact on small instances") {
  SplitMix64 rng(7);

  // near-zero-cost 2x2 case at epsilon = 1e-3
  CostMatrix c0;
  c0.c = Matrix::from_rows({{0, 1}, {1, 0}});
  Distribution half{{0.5, 0.5}};
  auto s0 = solve_sinkhorn(c0, half, half, {1e-3, 50000, 1e-10});
  CHECK(s0.converged);
  CHECK(s0.objective <= 1e-3);

  // random 6x5 instance
  auto c = random_cost(rng, 6, 5);
  auto mu = random_marginal(rng, 6);
  auto nu = random_marginal(rng, 5);
  auto exact = solve_exact(c, mu, nu);
  auto sink = solve_sinkhorn(c, mu, nu, {1e-3, 200000, 1e-10});
  CHECK(sink.converged);
  CHECK(std::abs(sink.objective - exact.objective) < 1e-3);
  CHECK(sink.objective >= exact.objective - 1e-9);
}

TEST_CASE("sinkhorn entropy-dominated limit is the product coupling") {
  SplitMix64 rng(19);
  auto c = random_cost(rng, 4, 3);
  auto mu = random_marginal(rng, 4);
  auto nu = random_marginal(rng, 3);
  auto p = solve_sinkhorn(c, mu, nu, {10.0, 20000, 1e-12});
  for (std::size_t u = 0; u < 4; ++u)
    for (std::size_t v = 0; v < 3; ++v)
      CHECK(p.t(u, v) == doctest::Approx(mu[u] * nu[v]).epsilon(0.05));
}

TEST_CASE("sinkhorn marginal feasibility within reported residual") {
  SplitMix64 rng(23);
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t m = 2 + rng.next_below(6), n = 2 + rng.next_below(6);
    auto c = random_cost(rng, m, n);
    auto mu = random_marginal(rng, m);
    auto nu = random_marginal(rng, n);
    auto p = solve_sinkhorn(c, mu, nu, {0.05, 20000, 1e-9});
    CHECK(p.converged);
    CHECK(p.residual < 1e-9);
    for (double v : p.t.data()) CHECK(v >= 0.0);
  }
}

TEST_CASE("sinkhorn non-convergence is reported, not thrown") {
  SplitMix64 rng(29);
  auto c = random_cost(rng, 5, 5);
  auto mu = random_marginal(rng, 5);
  auto nu = random_marginal(rng, 5);
  auto p = solve_sinkhorn(c, mu, nu, {1e-3, 3, 1e-12});
  CHECK_FALSE(p.converged);
  CHECK(p.residual > 0.0);
}

TEST_CASE("drift sums to the objective bit for bit") {
  SplitMix64 rng(31);
  for (int inst = 0; inst < 30; ++inst) {
    const std::size_t m = 1 + rng.next_below(8), n = 1 + rng.next_below(8);
    auto c = random_cost(rng, m, n);
    auto mu = random_marginal(rng, m);
    auto nu = random_marginal(rng, n);
    for (bool exact : {true, false}) {
      auto p = exact ? solve_exact(c, mu, nu)
                     : solve_sinkhorn(c, mu, nu, {0.05, 20000, 1e-9});
      auto d = segment_drift(p, c);
      double total = 0.0;
      for (double x : d.d) total += x;
      CHECK(total == p.objective);  // identical accumulation order
      for (std::size_t u = 0; u < m; ++u) CHECK(d.d[u] <= 2.0 * mu[u] + 1e-9);
    }
  }
}

TEST_CASE("segment_drift trivial cases") {
  Distribution half{{0.5, 0.5}};
  CostMatrix zero;
  zero.c = Matrix(2, 2);
  auto p = solve_exact(zero, half, half);
  auto d = segment_drift(p, zero);
  CHECK(d.d[0] == 0.0);
  CHECK(d.d[1] == 0.0);

  // U = 1: the whole objective lands on the single row
  CostMatrix c1;
  c1.c = Matrix::from_rows({{0.4, 0.9}});
  Distribution one{{1.0}};
  Distribution nu{{0.25, 0.75}};
  auto p1 = solve_exact(c1, one, nu);
  auto d1 = segment_drift(p1, c1);
  CHECK(d1.d[0] == p1.objective);

  CostMatrix mismatched;
  mismatched.c = Matrix(3, 2);
  CHECK_THROWS_AS((void)segment_drift(p1, mismatched), ShapeError);
}

TEST_CASE("permutation equivariance of the drift") {
  SplitMix64 rng(37);
  const std::size_t m = 5, n = 4;
  auto c = random_cost(rng, m, n);
  auto mu = random_marginal(rng, m);
  auto nu = random_marginal(rng, n);
  auto d = segment_drift(solve_exact(c, mu, nu), c);

  // rotate clean segments by one
  CostMatrix cp;
  cp.c = Matrix(m, n);
  Distribution mup;
  mup.mass.resize(m);
  for (std::size_t u = 0; u < m; ++u) {
    const std::size_t src = (u + 1) % m;
    mup.mass[u] = mu[src];
    for (std::size_t v = 0; v < n; ++v) cp.c(u, v) = c.c(src, v);
  }
  auto dp = segment_drift(solve_exact(cp, mup, nu), cp);
  for (std::size_t u = 0; u < m; ++u)
    CHECK(dp.d[u] == doctest::Approx(d.d[(u + 1) % m]).epsilon(1e-9));
}

TEST_CASE("sinkhorn objective gap shrinks with epsilon") {
  SplitMix64 rng(43);
  for (int inst = 0; inst < 10; ++inst) {
    const std::size_t m = 3 + rng.next_below(4), n = 3 + rng.next_below(4);
    auto c = random_cost(rng, m, n);
    auto mu = random_marginal(rng, m);
    auto nu = random_marginal(rng, n);
    const double exact = solve_exact(c, mu, nu).objective;
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double eps : {1.0, 0.1, 0.01, 0.001}) {
      auto p = solve_sinkhorn(c, mu, nu, {eps, 300000, 1e-10});
      const double gap = p.objective - exact;
      CHECK(gap >= -1e-9);
      CHECK(gap <= prev_gap + 1e-9);  // monotone nonincreasing in epsilon
      prev_gap = gap;
    }
  }
}

TEST_CASE("drift for an empty perturbed output") {
  Distribution mu{{0.25, 0.75}};
  auto d = drift_for_empty_perturbed(mu);
  CHECK(d.d[0] == doctest::Approx(0.5));
  CHECK(d.d[1] == doctest::Approx(1.5));
}

}  // TEST_SUITE
