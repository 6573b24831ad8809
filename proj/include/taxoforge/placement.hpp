#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "taxoforge/classify.hpp"
#include "taxoforge/cluster.hpp"

namespace taxoforge {

struct CompositeWeights {
  double semantic_relevance = 0.25;
  double functional_importance = 0.25;
  double theoretical_justification = 0.25;
  double space_compatibility = 0.25;

  void validate() const;
};

struct CompositeScore {
  double semantic_relevance = 0.0;
  double functional_importance = 0.0;
  double theoretical_justification = 0.0;
  double space_compatibility = 0.0;
  double composite = 0.0;
};

double weighted_composite(const CompositeScore& c, const CompositeWeights& w = {});

// Scores one relevant domain for a cross-cutting factor. `related` are the
// factor's high-similarity neighbours; `assignments` the category of every factor.
CompositeScore composite(const IntegratedFactor& factor, std::size_t domain,
                         const CrossCuttingAssessment& assessment, const DomainKnowledgeBase& kb,
                         const std::vector<std::size_t>& related,
                         const std::vector<CategoryAssignment>& assignments,
                         const CompositeWeights& w = {});

enum class Tier { Primary, Secondary, Tertiary };

std::string_view tier_name(Tier t);
std::optional<Tier> parse_tier(std::string_view s);

struct RankedDomain {
  std::size_t domain = 0;
  double composite = 0.0;
};

struct TierDecision {
  std::size_t domain = 0;
  Tier tier = Tier::Tertiary;
  double composite = 0.0;
};

inline constexpr double kPromotionThreshold = 0.80;

// Best composite first; equal composites keep kb order.
std::vector<RankedDomain> rank_domains(std::vector<RankedDomain> domains);

// Tiering of an already ranked list: first is Primary, second Secondary, the
// rest Tertiary unless their composite reaches `promotion`.
std::vector<TierDecision> place(const std::vector<RankedDomain>& ranked,
                                double promotion = kPromotionThreshold);

struct StrategicPlacement {
  std::size_t factor = 0;
  std::size_t domain = 0;
  std::size_t subcategory = 0;
  Tier tier = Tier::Tertiary;
  double composite = 0.0;
  bool is_argmax = false;
};

struct CrossReference {
  std::size_t factor = 0;
  std::size_t domain = 0;
  std::size_t subcategory = 0;
  Tier tier = Tier::Secondary;
  std::size_t target_domain = 0;
  std::size_t target_subcategory = 0;
};

// One entry per non-Primary placement, pointing at that factor's Primary.
std::vector<CrossReference> cross_references(const std::vector<StrategicPlacement>& placements);

struct PlacementMetrics {
  std::size_t total = 0;
  std::size_t cross_cutting_factors = 0;
  double average = 0.0;
  double consistency = 1.0;  // share of Primaries sitting at the argmax composite
};

PlacementMetrics placement_metrics(const std::vector<StrategicPlacement>& placements,
                                   std::size_t cross_cutting_factors);

struct PlacementConfig {
  double related_threshold = kRelatedThreshold;
  double promotion = kPromotionThreshold;
  CompositeWeights weights;
};

struct PlacementResult {
  std::vector<StrategicPlacement> placements;  // grouped by factor, rank order
  std::vector<CrossReference> references;
  PlacementMetrics metrics;
};

// Places every flagged cross-cutting factor. KB placement overrides force the
// Primary domain, which is how consistency can drop below 100%.
PlacementResult place_all(const IntegratedFactorSet& factors, const SimilarityMatrix& m,
                          const std::vector<FactorClassification>& classes,
                          const std::vector<CategoryAssignment>& assignments,
                          const DomainKnowledgeBase& kb, const SemanticLexicon& lexicon,
                          const PlacementConfig& config = {});

std::string placements_csv(const IntegratedFactorSet& factors, const PlacementResult& result,
                           const DomainKnowledgeBase& kb);

nlohmann::ordered_json to_json(const PlacementResult& result, const DomainKnowledgeBase& kb);
PlacementResult placements_from_json(const nlohmann::json& j, const DomainKnowledgeBase& kb);

}  // namespace taxoforge
