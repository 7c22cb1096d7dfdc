#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "s2r2/numerics.hpp"

namespace s2r2 {

using TokenId = std::uint32_t;

// Half-open token index range [start, end).
struct Range {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t length() const { return end - start; }
  bool operator==(const Range&) const = default;
};

// Token sequence plus a partition of it into segments. Boundaries are
// nonempty, sorted, disjoint and cover every token exactly once.
struct SegmentedText {
  std::vector<TokenId> tokens;
  std::vector<Range> boundaries;

  std::size_t num_segments() const { return boundaries.size(); }
  void validate() const;
};

// U x d matrix of per-segment mean hidden states.
struct SegmentEmbeddings {
  Matrix matrix;                     // U x d
  std::vector<std::size_t> lengths;  // per-segment token counts
};

struct Alphas {
  double ent = 1.0;
  double num = 1.0;
  double rel = 1.0;
  double cen = 1.0;
};

struct ImportanceWeights {
  Distribution weights;  // length U, sums to 1
  Alphas alphas;
  Matrix indicators;  // U x 4 binary (ent, num, rel, cen)
};

// Each segment ends at a punctuation token (which belongs to the segment
// it closes) or at the sequence end. Default closers: . ! ? ;
SegmentedText segment_punct(const std::vector<TokenId>& tokens,
                            const std::set<TokenId>& punct_set);

// Row u = mean of the hidden rows inside boundary u.
SegmentEmbeddings segment_embed(const Matrix& hidden, const SegmentedText& seg);

// w_u = Norm(alpha . indicator row), where Norm adds a 1e-6 floor to each
// raw score and divides by the total. With the floor disabled, an
// all-zero raw vector raises DegenerateWeights.
ImportanceWeights importance_weights(const Matrix& indicators, const Alphas& alphas,
                                     bool floor_enabled = true);

// Rule-based indicator flags per text segment:
//   ent - a capitalised word that is not the segment's first word
//   num - any digit run
//   rel - a word from the relation lexicon
//   cen - the segment with maximal mean word overlap (Jaccard over
//         lowercase word sets) with the others; ties go to the earliest
// The column order is (ent, num, rel, cen).
Matrix detect_indicators(const std::vector<std::string>& text_segments,
                         const std::set<std::string>& relation_lexicon);

const std::set<std::string>& default_relation_lexicon();

// Reads a plain-text lexicon, one word per line.
std::set<std::string> load_relation_lexicon(const std::string& path);

}  // namespace s2r2
