#pragma once

#include <cstdint>
#include <vector>

#include "s2r2/numerics.hpp"
#include "s2r2/segmenter.hpp"

namespace s2r2 {

// Entries c_uv = 1 - cos(e_u, e'_v), clamped to [0, 2].
struct CostMatrix {
  Matrix c;  // U x U'
};

// Nonnegative coupling with prescribed marginals. objective is the
// transport cost of the plan, accumulated as the sum of the row dot
// products so that segment_drift reproduces it bit for bit.
struct TransportPlan {
  Matrix t;         // U x U'
  Distribution mu;  // row marginal
  Distribution nu;  // column marginal
  double objective = 0.0;
  bool converged = true;  // false only for an unconverged Sinkhorn run
  double residual = 0.0;  // max marginal violation of the returned plan
};

struct DriftVector {
  std::vector<double> d;  // U nonnegative reals, sum equals the objective
};

CostMatrix cost_matrix(const SegmentEmbeddings& clean, const SegmentEmbeddings& pert);

// Exact optimum of the linear transportation problem via the classic
// tableau simplex (northwest-corner start, MODI pivoting). Limited to
// min(U, U') <= 64; larger instances raise UseSinkhorn. Marginal totals
// differing by more than 1e-9 raise MarginalMismatch.
TransportPlan solve_exact(const CostMatrix& cost, const Distribution& mu,
                          const Distribution& nu);

struct SinkhornOptions {
  double epsilon = 1e-2;
  std::size_t max_iters = 20000;
  double tol = 1e-9;
};

// Log-domain Sinkhorn on K = exp(-C/epsilon): alternating marginal
// scaling until the worst marginal violation drops below tol. A run that
// exhausts max_iters returns converged=false and its residual; the caller
// decides what to do with it.
TransportPlan solve_sinkhorn(const CostMatrix& cost, const Distribution& mu,
                             const Distribution& nu, const SinkhornOptions& opt = {});

// d_u = sum_v T_uv c_uv. The components sum to the plan objective.
DriftVector segment_drift(const TransportPlan& plan, const CostMatrix& cost);

// Empty perturbed output (U' = 0): every clean segment is charged the
// maximal cost, d_u = 2 mu_u.
DriftVector drift_for_empty_perturbed(const Distribution& mu);

}  // namespace s2r2
