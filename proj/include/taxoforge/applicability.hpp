#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "taxoforge/classify.hpp"
#include "taxoforge/knowledge_base.hpp"
#include "taxoforge/placement.hpp"

namespace taxoforge {

double coverage(const OccurrenceVector& v);

// Coverage-based class: >= 5/6 Universal, >= 3/6 Multi-space, else Space-specific.
FactorClass class_by_coverage(double coverage);

enum class IndicatorKind { UniversalAllTypes, UniversalWithEmphasis, MultiSpace, SpaceSpecific };
enum class Applicability { Strong, Moderate, Minimal };

inline constexpr int kEmphasisCount = 2;

struct ApplicabilityIndicator {
  IndicatorKind kind = IndicatorKind::SpaceSpecific;
  std::vector<SpaceType> emphasis;                        // UniversalWithEmphasis
  std::array<Applicability, kSpaceTypeCount> tiers{};     // MultiSpace
  std::vector<SpaceType> types;                           // MultiSpace, SpaceSpecific

  std::string render() const;
};

// `home` is the factor's primary domain; its compatibility map grades the
// inactive typologies of multi-space factors.
ApplicabilityIndicator indicator(const OccurrenceVector& v, FactorClass cls, const Domain& home);

// Kind recovered from a rendered indicator string.
std::optional<IndicatorKind> indicator_kind_of(std::string_view rendered);
bool kind_matches(IndicatorKind kind, FactorClass cls);

// Summed member counts per typology over the subcategory's total mentions.
SpaceProfile aggregate_subcategory(const std::vector<OccurrenceVector>& members);

// Mention-weighted mean of subcategory relevance vectors.
SpaceProfile aggregate_category(const std::vector<std::pair<SpaceProfile, int>>& subcategories);

// Member typologies the category profile gives no mass to (report only).
std::vector<std::string> profile_consistency(const SpaceProfile& profile,
                                             const std::vector<std::pair<std::string, OccurrenceVector>>& members);

// Where a factor's full record lives: Primary placement for cross-cutting
// factors, the cluster assignment otherwise.
struct Home {
  std::size_t domain = 0;
  std::size_t subcategory = 0;
  bool operator==(const Home&) const = default;
};

std::vector<Home> primary_homes(const std::vector<CategoryAssignment>& assignments,
                                const PlacementResult& placements);

struct IndicatorResult {
  std::vector<std::string> factor_indicators;  // rendered, by factor
  std::vector<std::pair<Home, SpaceProfile>> subcategory_profiles;   // kb order
  std::vector<std::pair<std::size_t, SpaceProfile>> category_profiles;
  std::vector<std::string> consistency_issues;
};

IndicatorResult indicate_all(const IntegratedFactorSet& factors,
                             const std::vector<FactorClassification>& classes,
                             const std::vector<Home>& homes, const DomainKnowledgeBase& kb);

std::string indicators_csv(const IntegratedFactorSet& factors, const IndicatorResult& result);
nlohmann::ordered_json to_json(const IndicatorResult& result, const DomainKnowledgeBase& kb);
IndicatorResult indicators_from_json(const nlohmann::json& j, const DomainKnowledgeBase& kb);

}  // namespace taxoforge
