#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "taxoforge/applicability.hpp"

namespace taxoforge {

struct FrameworkMetadata {
  std::size_t total_original_factors = 0;
  std::size_t unique_factors = 0;
  double reduction_percentage = 0.0;
  std::vector<std::string> space_types;
  std::map<std::string, std::string> checksums;  // input name -> FNV-1a hex
  bool operator==(const FrameworkMetadata&) const = default;
};

struct PlacementLabel {
  std::string category;
  std::string subcategory;
  std::string tier;
  bool operator==(const PlacementLabel&) const = default;
};

// Primary entries carry the full record; secondary/tertiary entries are stubs
// pointing back at the primary location.
struct FrameworkEntry {
  std::string canonical_name;
  std::size_t insertion_index = 0;
  std::string tier;  // primary | secondary | tertiary
  std::string tracking_notation;
  std::string classification;
  std::string indicator;
  std::vector<PlacementLabel> placements;
  std::optional<PlacementLabel> see;
  bool is_primary() const { return tier == "primary"; }
  bool operator==(const FrameworkEntry&) const = default;
};

struct FrameworkSubcategory {
  std::string id;
  std::size_t factor_count = 0;
  std::vector<FrameworkEntry> entries;
  bool operator==(const FrameworkSubcategory&) const = default;
};

struct FrameworkCategory {
  std::string id;
  std::size_t factor_total = 0;
  std::vector<FrameworkSubcategory> subcategories;
  bool operator==(const FrameworkCategory&) const = default;
};

struct Framework {
  int schema_version = 1;
  FrameworkMetadata metadata;
  std::vector<FrameworkCategory> categories;
  bool operator==(const Framework&) const = default;
};

Framework build_framework(const IntegratedFactorSet& factors,
                          const std::vector<FactorClassification>& classes,
                          const std::vector<CategoryAssignment>& assignments,
                          const PlacementResult& placements, const IndicatorResult& indicators,
                          const DomainKnowledgeBase& kb,
                          const std::map<std::string, std::string>& checksums = {});

// Recomputes factor counts, totals and the metadata identities from entries.
void recount(Framework& fw);

struct CheckResult {
  std::vector<std::string> items;
  bool pass = true;
  bool operator==(const CheckResult&) const = default;
};

struct ValidationReport {
  CheckResult completeness;          // missing factors
  CheckResult hierarchy_integrity;   // factors with != 1 primary home, count identities
  CheckResult indicator_consistency;
  std::vector<std::string> discrepancy_notes;
  std::vector<std::string> info;     // unassignable factors, profile gaps
  bool pass() const {
    return completeness.pass && hierarchy_integrity.pass && indicator_consistency.pass;
  }
};

ValidationReport validate(const Framework& fw, const IntegratedFactorSet& factors);

// The documented inconsistencies in the printed worked examples, each
// recomputed from the printed inputs.
std::vector<std::string> discrepancy_notes();

void inject_drop(Framework& fw, std::string_view factor);
void inject_duplicate_primary(Framework& fw, std::string_view factor);

nlohmann::ordered_json to_json(const Framework& fw);
nlohmann::ordered_json to_json(const ValidationReport& report);
Framework framework_from_json(const nlohmann::json& j);

std::string framework_markdown(const Framework& fw, const ValidationReport& report);

}  // namespace taxoforge
