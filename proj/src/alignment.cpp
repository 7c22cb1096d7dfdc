#include "s2r2/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace s2r2 {

CostMatrix cost_matrix(const SegmentEmbeddings& clean, const SegmentEmbeddings& pert) {
  if (clean.matrix.cols() != pert.matrix.cols())
    throw ShapeError("cost_matrix: embedding dimensions differ");
  CostMatrix out;
  out.c = Matrix(clean.matrix.rows(), pert.matrix.rows());
  for (std::size_t u = 0; u < clean.matrix.rows(); ++u)
    for (std::size_t v = 0; v < pert.matrix.rows(); ++v) {
      const double c = 1.0 - cosine_sim(clean.matrix.row(u), pert.matrix.row(v));
      out.c(u, v) = std::clamp(c, 0.0, 2.0);
    }
  return out;
}

namespace {

void check_marginals(const CostMatrix& cost, const Distribution& mu,
                     const Distribution& nu) {
  if (cost.c.rows() != mu.size() || cost.c.cols() != nu.size())
    throw ShapeError("transport: marginal lengths do not match the cost matrix");
  double sa = 0.0, sb = 0.0;
  for (double x : mu.mass) {
    if (x < 0.0) throw InvalidParameter("transport: negative row marginal");
    sa += x;
  }
  for (double x : nu.mass) {
    if (x < 0.0) throw InvalidParameter("transport: negative column marginal");
    sb += x;
  }
  if (std::abs(sa - sb) > 1e-9)
    throw MarginalMismatch("transport: marginal totals differ by " +
                           std::to_string(std::abs(sa - sb)));
}

// Row-dot accumulation shared with segment_drift so that the drift
// components sum to the objective bit for bit.
double plan_objective(const Matrix& t, const Matrix& c) {
  double total = 0.0;
  for (std::size_t u = 0; u < t.rows(); ++u) {
    double row = 0.0;
    for (std::size_t v = 0; v < t.cols(); ++v) row += t(u, v) * c(u, v);
    total += row;
  }
  return total;
}

double max_marginal_violation(const Matrix& t, const Distribution& mu,
                              const Distribution& nu) {
  double worst = 0.0;
  for (std::size_t u = 0; u < t.rows(); ++u) {
    double s = 0.0;
    for (std::size_t v = 0; v < t.cols(); ++v) s += t(u, v);
    worst = std::max(worst, std::abs(s - mu[u]));
  }
  for (std::size_t v = 0; v < t.cols(); ++v) {
    double s = 0.0;
    for (std::size_t u = 0; u < t.rows(); ++u) s += t(u, v);
    worst = std::max(worst, std::abs(s - nu[v]));
  }
  return worst;
}

// Tableau transportation simplex. Basic cells are kept as a spanning
// tree over row nodes [0,m) and column nodes [m, m+n); the entering
// cell's cycle is recovered by a BFS through that tree.
class TransportSimplex {
 public:
  TransportSimplex(const Matrix& c, const std::vector<double>& a,
                   const std::vector<double>& b)
      : c_(c), m_(c.rows()), n_(c.cols()), t_(c.rows(), c.cols()),
        basic_(c.rows() * c.cols(), 0) {
    northwest_corner(a, b);
  }

  Matrix solve() {
    const std::size_t dantzig_cap = 10 * m_ * n_ + 1000;
    std::size_t iters = 0;
    while (true) {
      compute_duals();
      const auto enter = (iters < dantzig_cap) ? most_negative_cell() : bland_cell();
      if (enter.first == m_) break;  // optimal
      pivot(enter.first, enter.second);
      ++iters;
    }
    return t_;
  }

 private:
  static constexpr double kReducedCostTol = 1e-11;

  void northwest_corner(std::vector<double> a, std::vector<double> b) {
    std::size_t i = 0, j = 0;
    for (std::size_t step = 0; step + 1 < m_ + n_; ++step) {
      basic_[i * n_ + j] = 1;
      basis_cells_.push_back(i * n_ + j);
      const double q = std::min(a[i], b[j]);
      t_(i, j) = q;
      a[i] -= q;
      b[j] -= q;
      if (i + 1 == m_) {
        ++j;
      } else if (j + 1 == n_) {
        ++i;
      } else if (a[i] <= 0.0) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void compute_duals() {
    u_.assign(m_, 0.0);
    v_.assign(n_, 0.0);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::vector<std::size_t>> adj(m_ + n_);
    for (std::size_t cell : basis_cells_) {
      const std::size_t i = cell / n_, j = cell % n_;
      adj[i].push_back(m_ + j);
      adj[m_ + j].push_back(i);
    }
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      const std::size_t node = q.front();
      q.pop();
      for (std::size_t next : adj[node]) {
        if (seen[next]) continue;
        seen[next] = 1;
        if (node < m_)  // row known: v_j = c_ij - u_i
          v_[next - m_] = c_(node, next - m_) - u_[node];
        else  // column known: u_i = c_ij - v_j
          u_[next] = c_(next, node - m_) - v_[node - m_];
        q.push(next);
      }
    }
  }

  std::pair<std::size_t, std::size_t> most_negative_cell() const {
    double best = -kReducedCostTol;
    std::pair<std::size_t, std::size_t> cell{m_, n_};
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (basic_[i * n_ + j]) continue;
        const double rc = c_(i, j) - u_[i] - v_[j];
        if (rc < best) {
          best = rc;
          cell = {i, j};
        }
      }
    return cell;
  }

  // Bland's rule (first negative cell in index order) as the anti-cycling
  // fallback once the Dantzig iteration budget is spent.
  std::pair<std::size_t, std::size_t> bland_cell() const {
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (basic_[i * n_ + j]) continue;
        if (c_(i, j) - u_[i] - v_[j] < -kReducedCostTol) return {i, j};
      }
    return {m_, n_};
  }

  void pivot(std::size_t ei, std::size_t ej) {
    // path from column node ej back to row node ei through the tree
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(m_ + n_);
    for (std::size_t cell : basis_cells_) {
      const std::size_t i = cell / n_, j = cell % n_;
      adj[i].push_back({m_ + j, cell});
      adj[m_ + j].push_back({i, cell});
    }
    std::vector<std::int64_t> parent(m_ + n_, -1);
    std::vector<std::size_t> parent_cell(m_ + n_, 0);
    std::queue<std::size_t> q;
    q.push(m_ + ej);
    parent[m_ + ej] = static_cast<std::int64_t>(m_ + ej);
    while (!q.empty()) {
      const std::size_t node = q.front();
      q.pop();
      if (node == ei) break;
      for (auto [next, cell] : adj[node]) {
        if (parent[next] != -1) continue;
        parent[next] = static_cast<std::int64_t>(node);
        parent_cell[next] = cell;
        q.push(next);
      }
    }

    // walk ei -> ej collecting basic cells; signs alternate starting with
    // -theta on the first edge out of ei (the entering cell takes +theta)
    std::vector<std::size_t> minus_cells, plus_cells;
    std::size_t node = ei;
    bool minus = true;
    while (node != m_ + ej) {
      const std::size_t cell = parent_cell[node];
      (minus ? minus_cells : plus_cells).push_back(cell);
      node = static_cast<std::size_t>(parent[node]);
      minus = !minus;
    }

    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = minus_cells.front();
    for (std::size_t cell : minus_cells) {
      const double val = t_.data()[cell];
      if (val < theta) {
        theta = val;
        leaving = cell;
      }
    }

    for (std::size_t cell : minus_cells) t_.data()[cell] -= theta;
    for (std::size_t cell : plus_cells) t_.data()[cell] += theta;
    t_(ei, ej) += theta;
    t_.data()[leaving] = 0.0;

    basic_[leaving] = 0;
    basic_[ei * n_ + ej] = 1;
    for (std::size_t& cell : basis_cells_)
      if (cell == leaving) {
        cell = ei * n_ + ej;
        break;
      }
  }

  const Matrix& c_;
  std::size_t m_, n_;
  Matrix t_;
  std::vector<char> basic_;
  std::vector<std::size_t> basis_cells_;
  std::vector<double> u_, v_;
};

}  // namespace

TransportPlan solve_exact(const CostMatrix& cost, const Distribution& mu,
                          const Distribution& nu) {
  check_marginals(cost, mu, nu);
  const std::size_t m = cost.c.rows(), n = cost.c.cols();
  if (std::min(m, n) > 64)
    throw UseSinkhorn("solve_exact: min(U,U') > 64, use solve_sinkhorn");
  if (m == 0 || n == 0) throw EmptyInput("solve_exact: empty marginal");

  TransportSimplex simplex(cost.c, mu.mass, nu.mass);
  TransportPlan plan;
  plan.t = simplex.solve();
  plan.mu = mu;
  plan.nu = nu;
  plan.objective = plan_objective(plan.t, cost.c);
  plan.converged = true;
  plan.residual = max_marginal_violation(plan.t, mu, nu);
  return plan;
}

TransportPlan solve_sinkhorn(const CostMatrix& cost, const Distribution& mu,
                             const Distribution& nu, const SinkhornOptions& opt) {
  if (opt.epsilon <= 0.0) throw InvalidParameter("solve_sinkhorn: epsilon must be > 0");
  if (opt.tol <= 0.0) throw InvalidParameter("solve_sinkhorn: tol must be > 0");
  check_marginals(cost, mu, nu);
  const std::size_t m = cost.c.rows(), n = cost.c.cols();
  if (m == 0 || n == 0) throw EmptyInput("solve_sinkhorn: empty marginal");

  const double inv_eps = 1.0 / opt.epsilon;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  auto log_or_neg_inf = [&](double x) { return x > 0.0 ? std::log(x) : neg_inf; };

  std::vector<double> log_mu(m), log_nu(n), alpha(m, 0.0), beta(n, 0.0);
  for (std::size_t u = 0; u < m; ++u) log_mu[u] = log_or_neg_inf(mu[u]);
  for (std::size_t v = 0; v < n; ++v) log_nu[v] = log_or_neg_inf(nu[v]);

  auto lse = [&](const std::vector<double>& terms) {
    double mx = neg_inf;
    for (double t : terms) mx = std::max(mx, t);
    if (mx == neg_inf) return neg_inf;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    return mx + std::log(s);
  };

  TransportPlan plan;
  plan.t = Matrix(m, n);
  plan.mu = mu;
  plan.nu = nu;
  plan.converged = false;

  std::vector<double> terms_n(n), terms_m(m);
  for (std::size_t it = 0; it < opt.max_iters; ++it) {
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t v = 0; v < n; ++v) terms_n[v] = beta[v] - cost.c(u, v) * inv_eps;
      alpha[u] = log_mu[u] - lse(terms_n);
    }
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t u = 0; u < m; ++u) terms_m[u] = alpha[u] - cost.c(u, v) * inv_eps;
      beta[v] = log_nu[v] - lse(terms_m);
    }

    for (std::size_t u = 0; u < m; ++u)
      for (std::size_t v = 0; v < n; ++v) {
        const double lt = alpha[u] + beta[v] - cost.c(u, v) * inv_eps;
        plan.t(u, v) = std::isfinite(lt) ? std::exp(lt) : 0.0;
      }
    plan.residual = max_marginal_violation(plan.t, mu, nu);
    if (plan.residual < opt.tol) {
      plan.converged = true;
      break;
    }
  }
  plan.objective = plan_objective(plan.t, cost.c);
  return plan;
}

DriftVector segment_drift(const TransportPlan& plan, const CostMatrix& cost) {
  if (plan.t.rows() != cost.c.rows() || plan.t.cols() != cost.c.cols())
    throw ShapeError("segment_drift: plan and cost shapes differ");
  DriftVector out;
  out.d.resize(plan.t.rows());
  for (std::size_t u = 0; u < plan.t.rows(); ++u) {
    double row = 0.0;
    for (std::size_t v = 0; v < plan.t.cols(); ++v) row += plan.t(u, v) * cost.c(u, v);
    out.d[u] = row;
  }
  return out;
}

DriftVector drift_for_empty_perturbed(const Distribution& mu) {
  DriftVector out;
  out.d.resize(mu.size());
  for (std::size_t u = 0; u < mu.size(); ++u) out.d[u] = 2.0 * mu[u];
  return out;
}

}  // namespace s2r2
