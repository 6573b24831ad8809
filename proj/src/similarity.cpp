#include "taxoforge/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "taxoforge/error.hpp"

namespace taxoforge {

void SimilarityWeights::validate() const {
  if (linguistic < 0 || distributional < 0 || co_occurrence < 0) {
    throw Error("similarity weights must be non-negative");
  }
  if (std::abs(linguistic + distributional + co_occurrence - 1.0) > 1e-9) {
    throw Error("similarity weights must sum to 1");
  }
}

namespace {

std::set<std::string_view> tokens(std::string_view s) {
  std::set<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t b = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > b) out.insert(s.substr(b, i - b));
  }
  return out;
}

// Character trigrams of " s " packed big-endian into integers, so sorting them
// orders the same way as the trigram strings; (gram, count) pairs ascending.
std::vector<std::pair<std::uint32_t, int>> trigrams(std::string_view s) {
  std::string padded = " ";
  padded.append(s);
  padded += ' ';
  std::vector<std::uint32_t> grams;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    grams.push_back(std::uint32_t(static_cast<unsigned char>(padded[i])) << 16 |
                    std::uint32_t(static_cast<unsigned char>(padded[i + 1])) << 8 |
                    std::uint32_t(static_cast<unsigned char>(padded[i + 2])));
  }
  std::sort(grams.begin(), grams.end());
  std::vector<std::pair<std::uint32_t, int>> out;
  for (auto g : grams) {
    if (!out.empty() && out.back().first == g) ++out.back().second;
    else out.emplace_back(g, 1);
  }
  return out;
}

}  // namespace

double token_jaccard(std::string_view a, std::string_view b) {
  auto ta = tokens(a), tb = tokens(b);
  if (ta.empty() && tb.empty()) return 1.0;
  std::size_t inter = 0;
  for (auto t : ta) inter += tb.count(t);
  return static_cast<double>(inter) / static_cast<double>(ta.size() + tb.size() - inter);
}

double trigram_cosine(std::string_view a, std::string_view b) {
  const auto ga = trigrams(a), gb = trigrams(b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  auto it = gb.begin();
  for (const auto& [g, n] : ga) {
    na += double(n) * n;
    while (it != gb.end() && it->first < g) ++it;
    if (it != gb.end() && it->first == g) dot += double(n) * it->second;
  }
  for (const auto& [g, n] : gb) nb += double(n) * n;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::min(1.0, dot / (std::sqrt(na) * std::sqrt(nb)));
}

double linguistic_similarity(std::string_view a, std::string_view b, const SemanticLexicon& lexicon) {
  if (a == b) return 1.0;
  double field = lexicon.share_field(a, b) ? kFieldScore : 0.0;
  return std::max({token_jaccard(a, b), trigram_cosine(a, b), field});
}

double distributional_similarity(const OccurrenceVector& a, const OccurrenceVector& b) {
  if (a.is_zero() || b.is_zero()) throw Error("distributional similarity of a zero vector");
  return cosine(to_profile(a), to_profile(b));
}

double co_occurrence_strength(const IntegratedFactor& a, const IntegratedFactor& b) {
  auto sa = a.all_studies(), sb = b.all_studies();
  if (sa.empty() || sb.empty()) {
    throw Error("co-occurrence needs non-empty study sets ('" + a.canonical_name + "', '" +
                b.canonical_name + "')");
  }
  std::size_t inter = 0;
  for (const auto& s : sa) inter += sb.count(s);
  return static_cast<double>(inter) / static_cast<double>(std::min(sa.size(), sb.size()));
}

double combine(const ComponentScores& c, const SimilarityWeights& w) {
  return w.linguistic * c.linguistic + w.distributional * c.distributional +
         w.co_occurrence * c.co_occurrence;
}

std::size_t pair_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

SimilarityMatrix::SimilarityMatrix(std::size_t n)
    : n_(n), scores_(pair_count(n), 0.0), components_(pair_count(n)) {}

std::size_t SimilarityMatrix::slot(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

double SimilarityMatrix::score(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw Error("similarity index out of range");
  if (i == j) return 1.0;
  return scores_[slot(i, j)];
}

const ComponentScores& SimilarityMatrix::components(std::size_t i, std::size_t j) const {
  static const ComponentScores kSelf{1.0, 1.0, 1.0};
  if (i >= n_ || j >= n_) throw Error("similarity index out of range");
  if (i == j) return kSelf;
  return components_[slot(i, j)];
}

void SimilarityMatrix::set(std::size_t i, std::size_t j, double score, ComponentScores components) {
  if (i >= n_ || j >= n_ || i == j) throw Error("invalid similarity cell");
  if (!(score >= 0.0 && score <= 1.0)) throw Error("similarity score outside [0,1]");
  scores_[slot(i, j)] = score;
  components_[slot(i, j)] = components;
}

SimilarityMatrix build_matrix(const IntegratedFactorSet& factors, const SimilarityWeights& w,
                              const SemanticLexicon& lexicon, unsigned jobs) {
  if (factors.empty()) throw Error("cannot build a similarity matrix over no factors");
  w.validate();
  const std::size_t n = factors.size();
  SimilarityMatrix m(n);

  // Precompute study unions once; co_occurrence_strength would rebuild them per pair.
  std::vector<std::set<std::string>> studies(n);
  for (std::size_t i = 0; i < n; ++i) {
    studies[i] = factors[i].all_studies();
    if (studies[i].empty()) throw Error("factor '" + factors[i].canonical_name + "' has no studies");
  }

  auto fill_row = [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ComponentScores c;
      c.linguistic = linguistic_similarity(factors[i].canonical_name, factors[j].canonical_name, lexicon);
      c.distributional = distributional_similarity(factors[i].occurrence, factors[j].occurrence);
      std::size_t inter = 0;
      for (const auto& s : studies[i]) inter += studies[j].count(s);
      c.co_occurrence = static_cast<double>(inter) /
                        static_cast<double>(std::min(studies[i].size(), studies[j].size()));
      m.set(i, j, std::clamp(combine(c, w), 0.0, 1.0), c);
    }
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fill_row(i);
    return m;
  }
  // Interleave rows so that long early rows are spread over workers.
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < jobs; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += jobs) fill_row(i);
    });
  }
  workers.clear();
  return m;
}

SimilarityBand band(double score, const BandThresholds& t) {
  if (!(score >= 0.0 && score <= 1.0)) throw Error("score outside [0,1]");
  if (score > t.high) return SimilarityBand::High;
  if (score >= t.low) return SimilarityBand::Moderate;
  return SimilarityBand::Low;
}

std::string_view band_name(SimilarityBand b) {
  switch (b) {
    case SimilarityBand::High: return "High";
    case SimilarityBand::Moderate: return "Moderate";
    case SimilarityBand::Low: return "Low";
  }
  return "";
}

double BandCensus::fraction(SimilarityBand b) const {
  const std::size_t n = total();
  if (n == 0) return 0.0;
  std::size_t k = b == SimilarityBand::High ? high : b == SimilarityBand::Moderate ? moderate : low;
  return static_cast<double>(k) / static_cast<double>(n);
}

BandCensus band_census(const SimilarityMatrix& m, const BandThresholds& t) {
  BandCensus c;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      switch (band(m.score(i, j), t)) {
        case SimilarityBand::High: ++c.high; break;
        case SimilarityBand::Moderate: ++c.moderate; break;
        case SimilarityBand::Low: ++c.low; break;
      }
    }
  }
  return c;
}

nlohmann::ordered_json to_json(const SimilarityMatrix& m) {
  nlohmann::ordered_json j;
  j["n"] = m.size();
  std::vector<double> scores, ling, dist, cooc;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t k = i + 1; k < m.size(); ++k) {
      scores.push_back(m.score(i, k));
      const auto& c = m.components(i, k);
      ling.push_back(c.linguistic);
      dist.push_back(c.distributional);
      cooc.push_back(c.co_occurrence);
    }
  }
  j["upper_scores"] = std::move(scores);
  j["upper_linguistic"] = std::move(ling);
  j["upper_distributional"] = std::move(dist);
  j["upper_co_occurrence"] = std::move(cooc);
  return j;
}

SimilarityMatrix matrix_from_json(const nlohmann::json& j) {
  const auto n = j.at("n").get<std::size_t>();
  SimilarityMatrix m(n);
  const auto& s = j.at("upper_scores");
  const auto& l = j.at("upper_linguistic");
  const auto& d = j.at("upper_distributional");
  const auto& c = j.at("upper_co_occurrence");
  if (s.size() != pair_count(n) || l.size() != s.size() || d.size() != s.size() || c.size() != s.size()) {
    throw Error("similarity artifact has the wrong number of pairs");
  }
  std::size_t p = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k, ++p) {
      m.set(i, k, s[p].get<double>(),
            ComponentScores{l[p].get<double>(), d[p].get<double>(), c[p].get<double>()});
    }
  }
  return m;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

std::string banded_pairs_csv(const SimilarityMatrix& m, const IntegratedFactorSet& factors,
                             const BandThresholds& t) {
  if (m.size() != factors.size()) throw Error("matrix and factor set sizes differ");
  std::ostringstream out;
  out << "factor_a,factor_b,score,linguistic,distributional,co_occurrence,band\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t k = i + 1; k < m.size(); ++k) {
      const auto& c = m.components(i, k);
      out << csv_escape(factors[i].canonical_name) << ',' << csv_escape(factors[k].canonical_name)
          << ',' << format_fixed(m.score(i, k), 6) << ',' << format_fixed(c.linguistic, 6) << ','
          << format_fixed(c.distributional, 6) << ',' << format_fixed(c.co_occurrence, 6) << ','
          << band_name(band(m.score(i, k), t)) << '\n';
    }
  }
  return out.str();
}

}  // namespace taxoforge
