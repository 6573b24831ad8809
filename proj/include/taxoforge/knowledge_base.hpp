#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "taxoforge/lexicon.hpp"
#include "taxoforge/space_type.hpp"

namespace taxoforge {

enum class Scope { Broad, Moderate, Specialized };

std::string_view scope_name(Scope s);
std::optional<Scope> parse_scope(std::string_view s);

struct Subcategory {
  std::string id;
  std::vector<std::string> lexicon;
};

enum class Literature { None, Partial, Strong };

struct Domain {
  std::string id;
  Scope scope = Scope::Broad;
  std::vector<std::string> lexicon;  // domain-level keywords
  std::vector<Subcategory> subcategories;
  SpaceProfile space_profile{};
  std::array<bool, kSpaceTypeCount> compatible{};
  std::set<std::string> literature_strong;
  std::set<std::string> literature_partial;

  // Domain keywords plus every subcategory keyword, in declaration order.
  std::vector<std::string> all_terms() const;
  std::optional<std::size_t> subcategory_index(std::string_view id) const;
  Literature literature(std::string_view factor) const;
  bool is_compatible(SpaceType t) const { return compatible[index_of(t)]; }
};

// Multiplicative priors applied to semantic scores according to how far a
// domain's scope sits from the scopes a classification prefers.
struct ScopePriors {
  double preferred = 1.0;
  double adjacent = 0.8;
  double non_preferred = 0.6;
};

struct DomainKnowledgeBase {
  int schema_version = 1;
  std::vector<Domain> domains;
  ScopePriors priors;
  std::map<std::string, std::string> placement_overrides;  // factor -> forced primary domain

  std::optional<std::size_t> domain_index(std::string_view id) const;
  // Throws when an invariant does not hold.
  void validate() const;
};

DomainKnowledgeBase parse_knowledge_base(std::string_view text);
DomainKnowledgeBase load_knowledge_base(const std::filesystem::path& path);

// Best linguistic match of a name against a list of terms.
double lexicon_score(std::string_view name, const std::vector<std::string>& terms,
                     const SemanticLexicon& lexicon);

}  // namespace taxoforge
