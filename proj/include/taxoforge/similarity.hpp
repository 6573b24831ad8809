#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "taxoforge/integrate.hpp"
#include "taxoforge/lexicon.hpp"

namespace taxoforge {

struct ComponentScores {
  double linguistic = 0.0;
  double distributional = 0.0;
  double co_occurrence = 0.0;

  bool operator==(const ComponentScores&) const = default;
};

struct SimilarityWeights {
  double linguistic = 0.5;
  double distributional = 0.3;
  double co_occurrence = 0.2;

  // Throws unless all weights are >= 0 and sum to 1 (within 1e-9).
  void validate() const;
  bool operator==(const SimilarityWeights&) const = default;
};

// Score awarded when two names share a semantic field.
inline constexpr double kFieldScore = 0.85;

double token_jaccard(std::string_view a, std::string_view b);
double trigram_cosine(std::string_view a, std::string_view b);

// max(token Jaccard, character-trigram cosine, field score); 1 on identity.
double linguistic_similarity(std::string_view a, std::string_view b, const SemanticLexicon& lexicon);

// Cosine over raw six-typology counts.
double distributional_similarity(const OccurrenceVector& a, const OccurrenceVector& b);

// Overlap coefficient |A∩B| / min(|A|,|B|) over cross-typology study sets.
double co_occurrence_strength(const IntegratedFactor& a, const IntegratedFactor& b);

double combine(const ComponentScores& c, const SimilarityWeights& w);

std::size_t pair_count(std::size_t n);

// Symmetric matrix with unit diagonal; only the strict upper triangle is stored.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(std::size_t n);

  std::size_t size() const { return n_; }
  double score(std::size_t i, std::size_t j) const;
  const ComponentScores& components(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double score, ComponentScores components = {});

  bool operator==(const SimilarityMatrix&) const = default;

 private:
  std::size_t slot(std::size_t i, std::size_t j) const;

  std::size_t n_ = 0;
  std::vector<double> scores_;
  std::vector<ComponentScores> components_;
};

// Rows are split across `jobs` threads; every cell is computed independently so
// the result does not depend on the job count.
SimilarityMatrix build_matrix(const IntegratedFactorSet& factors, const SimilarityWeights& w,
                              const SemanticLexicon& lexicon, unsigned jobs = 1);

enum class SimilarityBand { High, Moderate, Low };

struct BandThresholds {
  double high = 0.75;  // strictly above -> High
  double low = 0.5;    // at or above -> Moderate
};

SimilarityBand band(double score, const BandThresholds& t = {});
std::string_view band_name(SimilarityBand b);

struct BandCensus {
  std::size_t high = 0;
  std::size_t moderate = 0;
  std::size_t low = 0;
  std::size_t total() const { return high + moderate + low; }
  double fraction(SimilarityBand b) const;
};

BandCensus band_census(const SimilarityMatrix& m, const BandThresholds& t = {});

nlohmann::ordered_json to_json(const SimilarityMatrix& m);
SimilarityMatrix matrix_from_json(const nlohmann::json& j);

// Delimited dump of every unique pair with its components and band.
std::string banded_pairs_csv(const SimilarityMatrix& m, const IntegratedFactorSet& factors,
                             const BandThresholds& t = {});

std::string format_fixed(double value, int decimals);

}  // namespace taxoforge
