#pragma once

#include <set>
#include <string>
#include <vector>

#include "s2r2/alignment.hpp"
#include "s2r2/numerics.hpp"

namespace s2r2 {

enum class Projection { Q, K, V };

std::string to_string(Projection p);
Projection projection_from_string(const std::string& s);

// One low-rank update DeltaW = B A^T attached to an attention projection.
struct LoraAdapter {
  Matrix a;  // d_in x r
  Matrix b;  // d_out x r
  std::size_t layer = 0;
  Projection site = Projection::Q;
};

struct LossWeights {
  double sem = 1.0;
  double stab = 1e-3;
  double bal = 0.0;
};

struct LossBreakdown {
  double ce = 0.0;
  double sem = 0.0;
  double stab = 0.0;
  double bal = 0.0;
  double total = 0.0;
  LossWeights lambdas;
  double beta = 10.0;
};

// Per-site gradient pair for the norm-based regularisers.
struct AdapterGrad {
  Matrix d_a;
  Matrix d_b;
};

// mean(d) + (1/beta) log sum exp(beta d). Note the zero-drift floor:
// the value at d = 0 is (ln U)/beta, not 0.
double sem_loss(const DriftVector& d, double beta);

// g_u = 1/U + softmax(beta d)_u; the entries sum to 2.
std::vector<double> sem_loss_grad_d(const DriftVector& d, double beta);

// Sum over the selected sites of |B|_F |A|_F. Default sites {Q, K}.
double stab_loss(const std::vector<LoraAdapter>& adapters,
                 const std::set<Projection>& projections = {Projection::Q,
                                                            Projection::K});

// d/dA = |B|_F A / max(|A|_F, 1e-12), symmetric in B. Sites outside the
// selection get zero gradients.
std::vector<AdapterGrad> stab_loss_grad(
    const std::vector<LoraAdapter>& adapters,
    const std::set<Projection>& projections = {Projection::Q, Projection::K});

// Sum over selected sites of (|B|_F - |A|_F)^2 with its gradient.
double bal_loss(const std::vector<LoraAdapter>& adapters,
                const std::set<Projection>& projections = {Projection::Q,
                                                           Projection::K,
                                                           Projection::V});
std::vector<AdapterGrad> bal_loss_grad(
    const std::vector<LoraAdapter>& adapters,
    const std::set<Projection>& projections = {Projection::Q, Projection::K,
                                               Projection::V});

LossBreakdown total_loss(double ce, double sem, double stab, double bal,
                         const LossWeights& lambdas, double beta = 10.0);

// (1/(2 tau^2)) sum over all adapted sites of (|B|_F^2 + |A|_F^2).
double kl_complexity(const std::vector<LoraAdapter>& adapters, double tau);

}  // namespace s2r2
