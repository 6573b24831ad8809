#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "taxoforge/pipeline.hpp"

namespace support {

inline std::filesystem::path data(const std::string& name) {
  return std::filesystem::path(TAXOFORGE_DATA_DIR) / name;
}

inline taxoforge::OccurrenceVector occ(const std::string& notation) {
  return taxoforge::parse_tracking_notation(notation);
}

inline const taxoforge::NormalizationRuleSet& rules() {
  static const auto r = taxoforge::load_rules(data("rules.json"));
  return r;
}
inline const taxoforge::DomainKnowledgeBase& kb() {
  static const auto k = taxoforge::load_knowledge_base(data("kb.json"));
  return k;
}
inline const taxoforge::SemanticLexicon& lexicon() {
  static const auto l = taxoforge::load_lexicon(data("lexicon.json"));
  return l;
}

inline taxoforge::IntegratedFactorSet integrate_fixture(const std::string& file) {
  auto corpus = taxoforge::load_corpus(data(file), taxoforge::CorpusFormat::Delimited);
  return taxoforge::integrate(corpus, rules());
}

inline std::size_t domain(const std::string& id) {
  auto d = kb().domain_index(id);
  if (!d) throw std::runtime_error("no domain " + id);
  return *d;
}

// Random occurrence vector with at least one active type.
inline taxoforge::OccurrenceVector random_vector(std::mt19937_64& rng, int max_count = 6) {
  std::uniform_int_distribution<int> count(0, max_count);
  taxoforge::OccurrenceVector v;
  while (v.is_zero()) {
    for (auto& c : v.counts) c = rng() % 2 ? count(rng) : 0;
  }
  return v;
}

// The same study-level pipeline the CLI runs, in memory.
inline taxoforge::Pipeline fixture_pipeline(unsigned jobs = 1, taxoforge::RunOptions options = {}) {
  auto config = taxoforge::load_config(data("fixture_config.json"));
  config.jobs = jobs;
  auto inputs = taxoforge::load_inputs(config);
  return taxoforge::Pipeline(config, std::move(inputs), std::move(options));
}

}  // namespace support
