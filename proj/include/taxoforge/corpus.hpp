#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "taxoforge/space_type.hpp"

namespace taxoforge {

// One raw factor occurrence as extracted from a study.
struct FactorRecord {
  std::string raw_name;
  std::string study_id;
  SpaceType space_type = SpaceType::P;

  bool operator==(const FactorRecord&) const = default;
};

// Records in stable input order with per-typology tallies.
class Corpus {
 public:
  void add(FactorRecord record);
  void append(const Corpus& other);

  const std::vector<FactorRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  std::size_t count(SpaceType t) const { return counts_[index_of(t)]; }

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<FactorRecord> records_;
  std::array<std::size_t, kSpaceTypeCount> counts_{};
};

enum class CorpusFormat { Delimited, Structured };

// Header `raw_name,study_id,space_type`. Errors name the 1-based data row.
// When `expected` is set every row must carry that typology.
Corpus parse_corpus(std::string_view text, CorpusFormat format,
                    std::optional<SpaceType> expected = std::nullopt);
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   std::optional<SpaceType> expected = std::nullopt);
std::string serialize_corpus(const Corpus& corpus);

// Minimal RFC 4180 reader: comma separated, double-quote escaping, CRLF tolerant.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string csv_escape(std::string_view field);

struct NormalizationRuleSet {
  bool case_folding = true;
  bool whitespace_collapse = true;
  std::string punctuation_strip = ".,;:()/&";
  bool strip_boundary_hyphens = true;
  std::map<std::string, std::string> synonym_map;
  std::set<std::string> preserve_distinct;
};

// Brings synonym keys/values and preserve entries to surface form and checks
// the invariants (canonical values are fixed points, no cycles, no overlap).
NormalizationRuleSet validate_rules(NormalizationRuleSet rules);

NormalizationRuleSet parse_rules(std::string_view text);
NormalizationRuleSet load_rules(const std::filesystem::path& path);

// Case fold, whitespace collapse and punctuation strip; no synonym mapping.
std::string surface_form(std::string_view raw, const NormalizationRuleSet& rules);

// Full normalization. Throws Error when nothing is left after stripping.
std::string normalize(std::string_view raw, const NormalizationRuleSet& rules);

}  // namespace taxoforge
