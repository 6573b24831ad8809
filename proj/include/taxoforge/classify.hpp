#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "taxoforge/integrate.hpp"
#include "taxoforge/knowledge_base.hpp"
#include "taxoforge/lexicon.hpp"

namespace taxoforge {

struct DistributionStats {
  int active_type_count = 0;
  double entropy_nats = 0.0;
  int total_mentions = 0;
};

// Natural-log Shannon entropy of the counts normalized over active types.
double entropy(const OccurrenceVector& v);
DistributionStats distribution_stats(const OccurrenceVector& v);

enum class FactorClass { Universal, MultiSpace, SpaceSpecific };

FactorClass classify(int active_type_count);
inline FactorClass classify(const DistributionStats& s) { return classify(s.active_type_count); }
std::string_view class_name(FactorClass c);
std::optional<FactorClass> parse_class(std::string_view s);

// Scores of one and "Low" share a bucket and are both written as "Limited".
enum class CrossCuttingStatus { Limited, Moderate, High, VeryHigh };

CrossCuttingStatus status_for(std::size_t relevant_domains);
std::string_view status_name(CrossCuttingStatus s);

struct CrossCuttingAssessment {
  std::vector<std::size_t> relevant_domains;  // kb order
  std::vector<double> relevance;              // one per kb domain
  int score = 0;
  CrossCuttingStatus status = CrossCuttingStatus::Limited;
  bool flagged = false;
};

inline constexpr double kCrossCuttingThreshold = 0.6;
inline constexpr int kCrossCuttingMinDomains = 3;

// Relevance of a name to a domain: best linguistic match against its terms.
double domain_relevance(std::string_view name, const Domain& d, const SemanticLexicon& lexicon);

// Domain with the highest relevance; ties go to the earlier kb domain.
// nullopt when no domain scores above zero.
std::optional<std::size_t> primary_domain(std::string_view name, const DomainKnowledgeBase& kb,
                                          const SemanticLexicon& lexicon);

CrossCuttingAssessment assess_cross_cutting(std::string_view name, const DomainKnowledgeBase& kb,
                                            const SemanticLexicon& lexicon,
                                            double threshold = kCrossCuttingThreshold);

struct FactorClassification {
  DistributionStats stats;
  FactorClass cls = FactorClass::SpaceSpecific;
  std::optional<std::size_t> primary_domain;
  CrossCuttingAssessment cross_cutting;
};

std::vector<FactorClassification> classify_all(const IntegratedFactorSet& factors,
                                               const DomainKnowledgeBase& kb,
                                               const SemanticLexicon& lexicon,
                                               double threshold = kCrossCuttingThreshold,
                                               unsigned jobs = 1);

struct ClassificationCensus {
  std::size_t universal = 0;
  std::size_t multi_space = 0;
  std::size_t space_specific = 0;
  std::size_t cross_cutting = 0;

  std::size_t total() const { return universal + multi_space + space_specific; }
  double fraction(std::size_t count) const {
    return total() == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total());
  }
};

ClassificationCensus classification_census(const std::vector<FactorClassification>& all);

std::string classification_report_csv(const IntegratedFactorSet& factors,
                                      const std::vector<FactorClassification>& all,
                                      const DomainKnowledgeBase& kb);

nlohmann::ordered_json to_json(const std::vector<FactorClassification>& all,
                               const DomainKnowledgeBase& kb);
std::vector<FactorClassification> classifications_from_json(const nlohmann::json& j,
                                                            const DomainKnowledgeBase& kb);

}  // namespace taxoforge
