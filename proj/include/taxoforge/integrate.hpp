#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "taxoforge/corpus.hpp"
#include "taxoforge/space_type.hpp"

namespace taxoforge {

struct IntegratedFactor {
  std::string canonical_name;
  OccurrenceVector occurrence;
  std::array<std::set<std::string>, kSpaceTypeCount> studies;
  std::size_t insertion_index = 0;

  // Union of study ids across typologies.
  std::set<std::string> all_studies() const;

  bool operator==(const IntegratedFactor&) const = default;
};

class IntegratedFactorSet {
 public:
  IntegratedFactorSet() = default;
  IntegratedFactorSet(std::vector<IntegratedFactor> factors, std::size_t raw_record_count);

  const std::vector<IntegratedFactor>& factors() const { return factors_; }
  const IntegratedFactor& operator[](std::size_t i) const { return factors_[i]; }
  std::size_t size() const { return factors_.size(); }
  bool empty() const { return factors_.empty(); }
  std::size_t unique_count() const { return factors_.size(); }
  std::size_t raw_record_count() const { return raw_record_count_; }
  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const IntegratedFactorSet& o) const {
    return raw_record_count_ == o.raw_record_count_ && factors_ == o.factors_;
  }

 private:
  std::vector<IntegratedFactor> factors_;
  std::size_t raw_record_count_ = 0;
  std::unordered_map<std::string, std::size_t> by_name_;
};

// Single pass over the corpus in record order; first-seen order is kept.
IntegratedFactorSet integrate(const Corpus& corpus, const NormalizationRuleSet& rules);

// "[P×1, S×1, O×4]": non-zero typologies in canonical order.
std::string tracking_notation(const OccurrenceVector& v);
OccurrenceVector parse_tracking_notation(std::string_view text);

// 1 - unique/raw.
double reduction_rate(std::size_t raw_count, std::size_t unique_count);

nlohmann::ordered_json to_json(const OccurrenceVector& v);
OccurrenceVector occurrence_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const IntegratedFactorSet& set);
IntegratedFactorSet integrated_from_json(const nlohmann::json& j);

}  // namespace taxoforge
