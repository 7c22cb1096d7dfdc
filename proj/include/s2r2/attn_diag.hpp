#pragma once

#include <vector>

#include "s2r2/numerics.hpp"
#include "s2r2/segmenter.hpp"

namespace s2r2 {

// Segment-to-segment attention mass for one (layer, head), rows
// renormalised over the source-key mass. Rows listed in excluded_rows
// carried no source mass and must be skipped by JS comparisons.
struct SegmentAttention {
  Matrix c;  // U x V, row-stochastic over the valid rows
  std::size_t layer = 0;
  std::size_t head = 0;
  std::vector<std::size_t> excluded_rows;
};

struct ReallocReport {
  std::vector<double> r;  // per output segment, in [0, ln 2]
  double mean_r = 0.0;
  double max_r = 0.0;
  std::size_t layer = 0;
  std::size_t head = 0;
};

struct ShiftDecomposition {
  Matrix realloc_term;  // U x d: sum_v (C'_uv - C_uv) vbar_v(x)
  Matrix value_term;    // U x d: sum_v C'_uv (vbar_v(x') - vbar_v(x))
  std::vector<double> residual;  // |(z_u(x') - z_u(x)) - (realloc+value)_u|
};

// C_uv = (1/|g_u|) sum_{i in g_u} sum_{j in s_v} A_ij, each row then
// divided by its source mass. out_segs index query rows of A; src_segs
// index key columns and may cover only a prefix of them (decoder-only
// prompts). A row whose source mass is zero lands in excluded_rows.
SegmentAttention aggregate_segment_attention(const Matrix& attention,
                                             const std::vector<Range>& out_segs,
                                             const std::vector<Range>& src_segs,
                                             std::size_t layer = 0,
                                             std::size_t head = 0);

// r_u = JS(row_u clean, row_u perturbed). Rows excluded on either side
// are skipped and reported as NaN-free zero-count entries (r_u omitted
// from mean/max).
ReallocReport realloc_js(const SegmentAttention& clean, const SegmentAttention& pert);

// Splits the segment-context shift into the attention-reallocation and
// value-drift terms, and reports the residual of the rank-one context
// approximation z_u = sum_v C_uv vbar_v against the true token-level
// aggregate built from the same attention and per-token values. The
// residual vanishes when every source segment is a singleton.
ShiftDecomposition decompose_shift(const Matrix& attn_clean, const Matrix& attn_pert,
                                   const Matrix& values_clean,
                                   const Matrix& values_pert,
                                   const std::vector<Range>& out_segs,
                                   const std::vector<Range>& src_segs);

}  // namespace s2r2
