#include "s2r2/perturb.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "s2r2/rng.hpp"

namespace s2r2 {

namespace {

struct Chunk {
  bool is_word;
  std::string text;
};

// Maximal runs of whitespace / non-whitespace, in order. Concatenating
// the chunks reproduces the input exactly.
std::vector<Chunk> split_chunks(const std::string& text) {
  std::vector<Chunk> chunks;
  std::size_t i = 0;
  while (i < text.size()) {
    const bool ws = std::isspace(static_cast<unsigned char>(text[i])) != 0;
    std::size_t j = i;
    while (j < text.size() &&
           (std::isspace(static_cast<unsigned char>(text[j])) != 0) == ws)
      ++j;
    chunks.push_back({!ws, text.substr(i, j - i)});
    i = j;
  }
  return chunks;
}

std::string lowercase(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string to_string(PerturbKind k) {
  switch (k) {
    case PerturbKind::Typo: return "typo";
    case PerturbKind::Delete: return "delete";
    case PerturbKind::Synonym: return "synonym";
    case PerturbKind::Paraphrase: return "paraphrase";
    case PerturbKind::TypoDelete: return "typo+delete";
  }
  return "?";
}

PerturbKind perturb_kind_from_string(const std::string& s) {
  if (s == "typo") return PerturbKind::Typo;
  if (s == "delete") return PerturbKind::Delete;
  if (s == "synonym") return PerturbKind::Synonym;
  if (s == "paraphrase") return PerturbKind::Paraphrase;
  if (s == "typo+delete") return PerturbKind::TypoDelete;
  throw InvalidParameter("unknown perturbation kind: " + s);
}

void PerturbConfig::validate() const {
  for (double r : {typo_rate, delete_rate, synonym_rate})
    if (r < 0.0 || r > 1.0) throw InvalidParameter("perturbation rate outside [0,1]");
  if (kinds.empty()) throw InvalidParameter("perturbation kinds list is empty");
  for (std::size_t i = 0; i < kinds.size(); ++i)
    for (std::size_t j = i + 1; j < kinds.size(); ++j)
      if (kinds[i] == kinds[j])
        throw InvalidParameter("duplicate perturbation kind: " + to_string(kinds[i]));
}

std::string perturb_typo(const std::string& text, double rate, std::uint64_t seed) {
  if (rate < 0.0 || rate > 1.0) throw InvalidParameter("typo rate outside [0,1]");
  auto chunks = split_chunks(text);
  SplitMix64 rng(seed);
  std::string out;
  for (auto& ch : chunks) {
    if (ch.is_word) {
      const bool selected = rng.next_double() < rate;
      if (selected && ch.text.size() >= 2) {
        const std::size_t pos = rng.next_below(ch.text.size() - 1);
        std::swap(ch.text[pos], ch.text[pos + 1]);
      }
    }
    out += ch.text;
  }
  return out;
}

std::string perturb_delete(const std::string& text, double rate, std::uint64_t seed) {
  if (rate < 0.0 || rate > 1.0) throw InvalidParameter("delete rate outside [0,1]");
  auto chunks = split_chunks(text);
  SplitMix64 rng(seed);
  std::vector<std::string> survivors;
  std::string first_word;
  for (const auto& ch : chunks) {
    if (!ch.is_word) continue;
    if (first_word.empty()) first_word = ch.text;
    if (!(rng.next_double() < rate)) survivors.push_back(ch.text);
  }
  if (survivors.empty() && !first_word.empty()) survivors.push_back(first_word);
  std::string out;
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    if (i) out += ' ';
    out += survivors[i];
  }
  return out;
}

std::string perturb_synonym(const std::string& text, const SynonymLexicon& lexicon,
                            double rate, std::uint64_t seed) {
  if (rate < 0.0 || rate > 1.0) throw InvalidParameter("synonym rate outside [0,1]");
  auto chunks = split_chunks(text);
  SplitMix64 rng(seed);
  std::string out;
  for (auto& ch : chunks) {
    if (ch.is_word) {
      const bool selected = rng.next_double() < rate;
      auto it = lexicon.entries.find(lowercase(ch.text));
      if (selected && it != lexicon.entries.end() && !it->second.empty()) {
        std::string repl = it->second[rng.next_below(it->second.size())];
        if (!ch.text.empty() && !repl.empty() &&
            std::isupper(static_cast<unsigned char>(ch.text[0])))
          repl[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(repl[0])));
        ch.text = repl;
      }
    }
    out += ch.text;
  }
  return out;
}

std::string perturb_text(const std::string& text, PerturbKind kind,
                         const PerturbConfig& cfg, std::uint64_t seed) {
  switch (kind) {
    case PerturbKind::Typo:
      return perturb_typo(text, cfg.typo_rate, seed);
    case PerturbKind::Delete:
      return perturb_delete(text, cfg.delete_rate, seed);
    case PerturbKind::Synonym:
      return perturb_synonym(text, builtin_lexicon(), cfg.synonym_rate, seed);
    case PerturbKind::TypoDelete:
      return perturb_delete(perturb_typo(text, cfg.typo_rate, seed), cfg.delete_rate,
                            seed + 1);
    case PerturbKind::Paraphrase:
      return text;  // rewritten by the sidecar, not here
  }
  throw InvalidParameter("unhandled perturbation kind");
}

std::vector<std::string> perturb_segments(const std::vector<std::string>& segments,
                                          PerturbKind kind, const PerturbConfig& cfg,
                                          std::uint64_t seed) {
  std::vector<std::string> out;
  out.reserve(segments.size());
  for (std::size_t v = 0; v < segments.size(); ++v) {
    const std::uint64_t seg_seed = seed ^ fnv1a64(std::to_string(v));
    out.push_back(perturb_text(segments[v], kind, cfg, seg_seed));
  }
  return out;
}

ParaphraseStats apply_external_paraphrase(std::vector<PerturbRecord>& records,
                                          const std::string& sidecar_path) {
  std::ifstream in(sidecar_path);
  if (!in) throw ParseError("cannot open paraphrase sidecar: " + sidecar_path);

  ParaphraseStats stats;
  std::unordered_map<std::string, std::string> by_id;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("text") ||
        !j["id"].is_string() || !j["text"].is_string())
      throw ParseError("paraphrase sidecar line " + std::to_string(lineno) +
                       ": expected {\"id\": string, \"text\": string}");
    const std::string id = j["id"].get<std::string>();
    if (by_id.count(id)) ++stats.duplicate_ids;
    by_id[id] = j["text"].get<std::string>();  // last occurrence wins
  }

  for (auto& rec : records) {
    auto it = by_id.find(rec.id);
    if (it == by_id.end()) {
      ++stats.unmatched;
      continue;
    }
    rec.perturbed = it->second;
    rec.kind = to_string(PerturbKind::Paraphrase);
    ++stats.matched;
  }
  return stats;
}

SynonymLexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lexicon: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ParseError("lexicon is not a JSON object: " + path);

  SynonymLexicon lex;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_array())
      throw ParseError("lexicon entry for \"" + it.key() + "\" is not an array");
    const std::string key = lowercase(it.key());
    std::vector<std::string> alts;
    bool all_self = true;
    for (const auto& v : it.value()) {
      if (!v.is_string())
        throw ParseError("lexicon entry for \"" + it.key() + "\" has a non-string item");
      const std::string alt = v.get<std::string>();
      if (lowercase(alt) != key) all_self = false;
      alts.push_back(alt);
    }
    if (alts.empty() || all_self) continue;  // self-only entries dropped
    lex.entries[key] = std::move(alts);
  }
  return lex;
}

SynonymLexicon builtin_lexicon() {
  SynonymLexicon lex;
  lex.entries = {
      {"keeps", {"holds", "stores"}},   {"holds", {"keeps", "stores"}},
      {"red", {"crimson", "scarlet"}},  {"blue", {"azure", "navy"}},
      {"green", {"emerald", "jade"}},   {"gray", {"grey", "ashen"}},
      {"amber", {"golden", "tawny"}},   {"violet", {"purple", "mauve"}},
      {"books", {"volumes", "tomes"}},  {"coins", {"tokens", "pieces"}},
      {"maps", {"charts", "plans"}},    {"keys", {"latchkeys", "openers"}},
      {"shells", {"husks", "casings"}}, {"stones", {"rocks", "pebbles"}},
      {"name", {"label", "title"}},     {"color", {"shade", "hue"}},
      {"count", {"number", "tally"}},   {"item", {"object", "thing"}},
      {"big", {"large", "huge"}},       {"small", {"little", "tiny"}},
  };
  return lex;
}

std::uint64_t record_seed(std::uint64_t base_seed, const std::string& id) {
  return base_seed ^ fnv1a64(id);
}

}  // namespace s2r2
