#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "taxoforge/classify.hpp"
#include "taxoforge/integrate.hpp"
#include "taxoforge/knowledge_base.hpp"
#include "taxoforge/similarity.hpp"

namespace taxoforge {

// Prior per scope (indexed Broad, Moderate, Specialized) for one classification.
struct ScopeFilter {
  std::array<double, 3> weight{1.0, 1.0, 1.0};
  double operator()(Scope s) const { return weight[static_cast<std::size_t>(s)]; }
};

// Universal prefers Broad, Multi-space Broad and Moderate, Space-specific
// Specialized; one scope step away gets `adjacent`, two steps `non_preferred`.
ScopeFilter domain_priorities(FactorClass c, const ScopePriors& priors = {});

inline constexpr double kRelatedThreshold = 0.75;
inline constexpr double kSubclusterThreshold = 0.6;

// Factors scoring strictly above `threshold` against `factor`, best first
// (ties by insertion order).
std::vector<std::size_t> related_factors(std::size_t factor, const SimilarityMatrix& m,
                                         double threshold = kRelatedThreshold);

struct AssignmentWeights {
  double semantic = 0.4;
  double similarity_evidence = 0.3;
  double distribution = 0.3;
};

struct AssignmentScores {
  double semantic = 0.0;
  double similarity_evidence = 0.0;
  double distribution = 0.0;
  double final = 0.0;
};

// One entry per kb domain. `related_primary` holds the primary domain of each
// related factor (nullopt for unassignable ones).
std::vector<AssignmentScores> score_domains(const IntegratedFactor& factor, FactorClass cls,
                                            const std::vector<std::optional<std::size_t>>& related_primary,
                                            const DomainKnowledgeBase& kb, const SemanticLexicon& lexicon,
                                            const AssignmentWeights& w = {});

// Highest final score; ties go to the earlier kb domain.
std::size_t best_domain(const std::vector<AssignmentScores>& scores);

// Single-linkage components over edges with score >= threshold among `members`.
// Each cluster lists factor indices ascending; clusters ordered by first member.
std::vector<std::vector<std::size_t>> subcluster(const std::vector<std::size_t>& members,
                                                 const SimilarityMatrix& m,
                                                 double threshold = kSubclusterThreshold);

// Subcategory with the highest mean lexicon score over the cluster's names.
// Returns nullopt when nothing matches at all.
std::optional<std::size_t> best_subcategory(const std::vector<std::string>& names, const Domain& d,
                                            const SemanticLexicon& lexicon);

struct CategoryAssignment {
  std::size_t factor = 0;
  std::size_t category = 0;
  std::size_t subcategory = 0;
  std::vector<AssignmentScores> scores;
};

struct ClusterConfig {
  double related_threshold = kRelatedThreshold;
  double subcluster_threshold = kSubclusterThreshold;
  AssignmentWeights weights;
};

// Category assignment for every factor, then subcategory clustering per category.
// Result is indexed by factor.
std::vector<CategoryAssignment> cluster_factors(const IntegratedFactorSet& factors,
                                                const SimilarityMatrix& m,
                                                const std::vector<FactorClassification>& classes,
                                                const DomainKnowledgeBase& kb,
                                                const SemanticLexicon& lexicon,
                                                const ClusterConfig& config = {}, unsigned jobs = 1);

struct HierarchyReport {
  std::vector<std::string> violations;
  std::size_t category_count = 0;     // non-empty categories
  std::size_t subcategory_count = 0;  // non-empty subcategories
  bool ok() const { return violations.empty(); }
};

HierarchyReport validate_hierarchy(const std::vector<CategoryAssignment>& assignments,
                                   std::size_t factor_count, const DomainKnowledgeBase& kb);

std::string assignments_csv(const IntegratedFactorSet& factors,
                            const std::vector<CategoryAssignment>& assignments,
                            const DomainKnowledgeBase& kb);

nlohmann::ordered_json to_json(const std::vector<CategoryAssignment>& assignments,
                               const DomainKnowledgeBase& kb);
std::vector<CategoryAssignment> assignments_from_json(const nlohmann::json& j,
                                                      const DomainKnowledgeBase& kb);

}  // namespace taxoforge
