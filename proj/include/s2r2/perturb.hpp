#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "s2r2/errors.hpp"

namespace s2r2 {

// Perturbation kinds. typo_delete composes typo followed by delete so the
// combined branch can be ablated separately from its parts.
enum class PerturbKind { Typo, Delete, Synonym, Paraphrase, TypoDelete };

std::string to_string(PerturbKind k);
PerturbKind perturb_kind_from_string(const std::string& s);

struct PerturbConfig {
  double typo_rate = 0.1;
  double delete_rate = 0.1;
  double synonym_rate = 0.1;
  std::uint64_t seed = 0;
  std::vector<PerturbKind> kinds = {PerturbKind::Typo, PerturbKind::Delete,
                                    PerturbKind::Synonym};

  // Rates in [0,1]; kinds nonempty and duplicate-free.
  void validate() const;
};

struct SynonymLexicon {
  // lowercase word -> candidate replacements (never self-only)
  std::map<std::string, std::vector<std::string>> entries;
};

struct PerturbRecord {
  std::string id;
  std::string clean;
  std::string perturbed;
  std::string kind;
  std::uint64_t seed = 0;
};

// Draw protocol (shared by all word-level operators, reproduced verbatim
// by the oracle tests): words are maximal non-whitespace runs, visited
// left to right on a fresh SplitMix64 stream seeded with `seed`. Every
// word consumes exactly one selection draw u = next_double(); the word is
// selected iff u < rate. A selected word consumes one further draw only
// when the operator has a choice to make:
//   typo    - next_below(len-1) picks the adjacent pair to swap
//             (words of length < 2 consume no second draw and stay put)
//   synonym - next_below(k) picks among the k listed replacements
//             (words without a lexicon entry consume no second draw)
//   delete  - never consumes a second draw
std::string perturb_typo(const std::string& text, double rate, std::uint64_t seed);

// Deletes selected words; survivors are rejoined by single spaces. If
// every word of a nonempty text is selected, the first word is retained.
std::string perturb_delete(const std::string& text, double rate, std::uint64_t seed);

// Replaces selected lexicon words; preserves the casing of the first
// letter and the surrounding whitespace structure.
std::string perturb_synonym(const std::string& text, const SynonymLexicon& lexicon,
                            double rate, std::uint64_t seed);

// One entry point over all kinds. TypoDelete runs typo with `seed` then
// delete with `seed + 1`. Paraphrase returns the text unchanged (the
// rewrite comes from the sidecar, see apply_external_paraphrase).
std::string perturb_text(const std::string& text, PerturbKind kind,
                         const PerturbConfig& cfg, std::uint64_t seed);

// Source-segment-preserving mode: each segment is perturbed on its own
// stream (seed ^ fnv1a64(decimal segment index)) so clean and perturbed
// sources keep identical segment counts by construction.
std::vector<std::string> perturb_segments(const std::vector<std::string>& segments,
                                          PerturbKind kind, const PerturbConfig& cfg,
                                          std::uint64_t seed);

struct ParaphraseStats {
  std::size_t matched = 0;
  std::size_t unmatched = 0;
  std::size_t duplicate_ids = 0;  // later sidecar line wins
};

// Applies a JSONL sidecar of {"id","text"} lines. Matched records get
// kind=paraphrase and the sidecar text; unmatched pass through. Throws
// ParseError with the offending line number.
ParaphraseStats apply_external_paraphrase(std::vector<PerturbRecord>& records,
                                          const std::string& sidecar_path);

// JSON object of word -> array of words; keys lowercased, self-only
// entries dropped. Throws ParseError on unreadable or invalid files.
SynonymLexicon load_lexicon(const std::string& path);

// Built-in lexicon for the synthetic corpus, so demos and tests do not
// need a data file.
SynonymLexicon builtin_lexicon();

std::uint64_t record_seed(std::uint64_t base_seed, const std::string& id);

}  // namespace s2r2
