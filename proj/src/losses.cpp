#include "s2r2/losses.hpp"

#include <cmath>

namespace s2r2 {

namespace {
constexpr double kNormGuard = 1e-12;  // subgradient guard at zero-norm factors
}

std::string to_string(Projection p) {
  switch (p) {
    case Projection::Q: return "Q";
    case Projection::K: return "K";
    case Projection::V: return "V";
  }
  return "?";
}

Projection projection_from_string(const std::string& s) {
  if (s == "Q" || s == "q") return Projection::Q;
  if (s == "K" || s == "k") return Projection::K;
  if (s == "V" || s == "v") return Projection::V;
  throw InvalidParameter("unknown projection: " + s);
}

double sem_loss(const DriftVector& d, double beta) {
  if (beta <= 0.0) throw InvalidParameter("sem_loss: beta must be > 0");
  if (d.d.empty()) throw EmptyInput("sem_loss: empty drift vector");
  const double u_count = static_cast<double>(d.d.size());
  double mean = 0.0;
  std::vector<double> scaled(d.d.size());
  for (std::size_t u = 0; u < d.d.size(); ++u) {
    mean += d.d[u];
    scaled[u] = beta * d.d[u];
  }
  mean /= u_count;
  return mean + log_sum_exp(scaled) / beta;
}

std::vector<double> sem_loss_grad_d(const DriftVector& d, double beta) {
  if (beta <= 0.0) throw InvalidParameter("sem_loss_grad_d: beta must be > 0");
  if (d.d.empty()) throw EmptyInput("sem_loss_grad_d: empty drift vector");
  std::vector<double> scaled(d.d.size());
  for (std::size_t u = 0; u < d.d.size(); ++u) scaled[u] = beta * d.d[u];
  auto soft = softmax_row(scaled);
  std::vector<double> g(d.d.size());
  const double inv_u = 1.0 / static_cast<double>(d.d.size());
  for (std::size_t u = 0; u < d.d.size(); ++u) g[u] = inv_u + soft[u];
  return g;
}

double stab_loss(const std::vector<LoraAdapter>& adapters,
                 const std::set<Projection>& projections) {
  if (projections.empty()) throw InvalidParameter("stab_loss: empty projection set");
  double total = 0.0;
  for (const auto& ad : adapters)
    if (projections.count(ad.site))
      total += frobenius_norm(ad.b) * frobenius_norm(ad.a);
  return total;
}

std::vector<AdapterGrad> stab_loss_grad(const std::vector<LoraAdapter>& adapters,
                                        const std::set<Projection>& projections) {
  if (projections.empty())
    throw InvalidParameter("stab_loss_grad: empty projection set");
  std::vector<AdapterGrad> grads;
  grads.reserve(adapters.size());
  for (const auto& ad : adapters) {
    AdapterGrad g{Matrix(ad.a.rows(), ad.a.cols()), Matrix(ad.b.rows(), ad.b.cols())};
    if (projections.count(ad.site)) {
      const double na = frobenius_norm(ad.a);
      const double nb = frobenius_norm(ad.b);
      const double ca = nb / std::max(na, kNormGuard);
      const double cb = na / std::max(nb, kNormGuard);
      for (std::size_t i = 0; i < ad.a.size(); ++i)
        g.d_a.data()[i] = ca * ad.a.data()[i];
      for (std::size_t i = 0; i < ad.b.size(); ++i)
        g.d_b.data()[i] = cb * ad.b.data()[i];
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

double bal_loss(const std::vector<LoraAdapter>& adapters,
                const std::set<Projection>& projections) {
  if (projections.empty()) throw InvalidParameter("bal_loss: empty projection set");
  double total = 0.0;
  for (const auto& ad : adapters)
    if (projections.count(ad.site)) {
      const double diff = frobenius_norm(ad.b) - frobenius_norm(ad.a);
      total += diff * diff;
    }
  return total;
}

std::vector<AdapterGrad> bal_loss_grad(const std::vector<LoraAdapter>& adapters,
                                       const std::set<Projection>& projections) {
  if (projections.empty())
    throw InvalidParameter("bal_loss_grad: empty projection set");
  std::vector<AdapterGrad> grads;
  grads.reserve(adapters.size());
  for (const auto& ad : adapters) {
    AdapterGrad g{Matrix(ad.a.rows(), ad.a.cols()), Matrix(ad.b.rows(), ad.b.cols())};
    if (projections.count(ad.site)) {
      const double na = frobenius_norm(ad.a);
      const double nb = frobenius_norm(ad.b);
      const double diff = nb - na;
      // d/dA (nb - na)^2 = -2 diff * A / na, with the zero-norm guard
      const double ca = -2.0 * diff / std::max(na, kNormGuard);
      const double cb = 2.0 * diff / std::max(nb, kNormGuard);
      for (std::size_t i = 0; i < ad.a.size(); ++i)
        g.d_a.data()[i] = ca * ad.a.data()[i];
      for (std::size_t i = 0; i < ad.b.size(); ++i)
        g.d_b.data()[i] = cb * ad.b.data()[i];
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

LossBreakdown total_loss(double ce, double sem, double stab, double bal,
                         const LossWeights& lambdas, double beta) {
  if (lambdas.sem < 0 || lambdas.stab < 0 || lambdas.bal < 0)
    throw InvalidParameter("total_loss: lambdas must be nonnegative");
  LossBreakdown out;
  out.ce = ce;
  out.sem = sem;
  out.stab = stab;
  out.bal = bal;
  out.lambdas = lambdas;
  out.beta = beta;
  out.total = ce + lambdas.sem * sem + lambdas.stab * stab + lambdas.bal * bal;
  return out;
}

double kl_complexity(const std::vector<LoraAdapter>& adapters, double tau) {
  if (tau <= 0.0) throw InvalidParameter("kl_complexity: tau must be > 0");
  double total = 0.0;
  for (const auto& ad : adapters) {
    const double na = frobenius_norm(ad.a);
    const double nb = frobenius_norm(ad.b);
    total += nb * nb + na * na;
  }
  return total / (2.0 * tau * tau);
}

}  // namespace s2r2
