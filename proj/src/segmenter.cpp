#include "s2r2/segmenter.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace s2r2 {

void SegmentedText::validate() const {
  if (boundaries.empty()) throw ShapeError("SegmentedText: no boundaries");
  std::size_t expect = 0;
  for (const auto& r : boundaries) {
    if (r.start != expect || r.end <= r.start)
      throw ShapeError("SegmentedText: boundaries must be a sorted partition");
    expect = r.end;
  }
  if (expect != tokens.size())
    throw ShapeError("SegmentedText: boundaries do not cover the token range");
}

SegmentedText segment_punct(const std::vector<TokenId>& tokens,
                            const std::set<TokenId>& punct_set) {
  if (tokens.empty()) throw EmptyInput("segment_punct: empty token sequence");
  SegmentedText seg;
  seg.tokens = tokens;
  std::size_t start = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (punct_set.count(tokens[i])) {
      seg.boundaries.push_back({start, i + 1});
      start = i + 1;
    }
  }
  if (start < tokens.size()) seg.boundaries.push_back({start, tokens.size()});
  return seg;
}

SegmentEmbeddings segment_embed(const Matrix& hidden, const SegmentedText& seg) {
  seg.validate();
  if (hidden.rows() != seg.tokens.size())
    throw ShapeError("segment_embed: hidden rows != token count");
  const std::size_t u_count = seg.num_segments();
  const std::size_t d = hidden.cols();
  SegmentEmbeddings out;
  out.matrix = Matrix(u_count, d);
  out.lengths.resize(u_count);
  for (std::size_t u = 0; u < u_count; ++u) {
    const Range r = seg.boundaries[u];
    out.lengths[u] = r.length();
    for (std::size_t t = r.start; t < r.end; ++t)
      for (std::size_t j = 0; j < d; ++j) out.matrix(u, j) += hidden(t, j);
    const double inv = 1.0 / static_cast<double>(r.length());
    for (std::size_t j = 0; j < d; ++j) out.matrix(u, j) *= inv;
  }
  return out;
}

ImportanceWeights importance_weights(const Matrix& indicators, const Alphas& alphas,
                                     bool floor_enabled) {
  if (indicators.cols() != 4)
    throw ShapeError("importance_weights: indicator matrix must be U x 4");
  if (alphas.ent < 0 || alphas.num < 0 || alphas.rel < 0 || alphas.cen < 0)
    throw InvalidParameter("importance_weights: alphas must be nonnegative");
  const std::size_t u_count = indicators.rows();
  if (u_count == 0) throw EmptyInput("importance_weights: no segments");

  std::vector<double> raw(u_count);
  double total = 0.0;
  for (std::size_t u = 0; u < u_count; ++u) {
    raw[u] = alphas.ent * indicators(u, 0) + alphas.num * indicators(u, 1) +
             alphas.rel * indicators(u, 2) + alphas.cen * indicators(u, 3);
    if (floor_enabled) raw[u] += 1e-6;
    total += raw[u];
  }
  if (total <= 0.0)
    throw DegenerateWeights("importance_weights: all raw scores zero without floor");

  ImportanceWeights out;
  out.alphas = alphas;
  out.indicators = indicators;
  out.weights.mass.resize(u_count);
  for (std::size_t u = 0; u < u_count; ++u) out.weights.mass[u] = raw[u] / total;
  return out;
}

namespace {

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> w;
  std::string t;
  while (in >> t) w.push_back(t);
  return w;
}

std::string lower(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool has_digit_run(const std::string& s) {
  return std::any_of(s.begin(), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& w : a) inter += b.count(w);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

Matrix detect_indicators(const std::vector<std::string>& text_segments,
                         const std::set<std::string>& relation_lexicon) {
  const std::size_t u_count = text_segments.size();
  Matrix flags(u_count, 4);
  std::vector<std::set<std::string>> word_sets(u_count);

  for (std::size_t u = 0; u < u_count; ++u) {
    const auto words = split_words(text_segments[u]);
    for (std::size_t k = 0; k < words.size(); ++k) {
      const std::string& w = words[k];
      // a capitalised word counts only when it is not the segment opener
      if (k > 0 && !w.empty() && std::isupper(static_cast<unsigned char>(w[0])))
        flags(u, 0) = 1.0;
      if (has_digit_run(w)) flags(u, 1) = 1.0;
      if (relation_lexicon.count(lower(w))) flags(u, 2) = 1.0;
      word_sets[u].insert(lower(w));
    }
  }

  // centrality: maximal mean Jaccard overlap with the other segments
  if (u_count > 0) {
    double best = -1.0;
    std::size_t best_u = 0;
    for (std::size_t u = 0; u < u_count; ++u) {
      double mean = 0.0;
      for (std::size_t v = 0; v < u_count; ++v)
        if (v != u) mean += jaccard(word_sets[u], word_sets[v]);
      if (u_count > 1) mean /= static_cast<double>(u_count - 1);
      if (mean > best) {  // strict: ties keep the earliest
        best = mean;
        best_u = u;
      }
    }
    flags(best_u, 3) = 1.0;
  }
  return flags;
}

const std::set<std::string>& default_relation_lexicon() {
  static const std::set<std::string> lex = {"because", "causes",    "than",
                                            "increases", "decreases", "leads"};
  return lex;
}

std::set<std::string> load_relation_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open relation lexicon: " + path);
  std::set<std::string> lex;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) lex.insert(lower(line));
  }
  return lex;
}

}  // namespace s2r2
