#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "taxoforge/framework.hpp"
#include "taxoforge/sankey.hpp"

namespace taxoforge {

struct Thresholds {
  double band_high = 0.75;
  double band_low = 0.5;
  double related = 0.75;
  double subcluster = 0.6;
  double cross_cutting = 0.6;
  double promotion = 0.80;

  // Throws Error on an unknown name.
  void set(std::string_view name, double value);
  void validate() const;
};

struct SankeyRequest {
  std::string category;
  std::vector<std::string> subfactors;
};

struct DatasetPath {
  std::optional<SpaceType> space_type;  // enforced on every row when set
  std::filesystem::path path;
};

struct PipelineConfig {
  std::vector<DatasetPath> datasets;
  std::filesystem::path rules;
  std::filesystem::path kb;
  std::filesystem::path lexicon;
  SimilarityWeights weights;
  Thresholds thresholds;
  std::filesystem::path out = "out";
  unsigned jobs = 1;
  std::vector<SankeyRequest> sankey;

  void validate() const;
};

// Relative paths resolve against `base`.
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base);
PipelineConfig load_config(const std::filesystem::path& path);

struct Inputs {
  Corpus corpus;
  NormalizationRuleSet rules;
  DomainKnowledgeBase kb;
  SemanticLexicon lexicon;
  std::map<std::string, std::string> checksums;  // input name -> content checksum
};

Inputs load_inputs(const PipelineConfig& config);

// Covers input contents, weights and thresholds; not jobs, out, or sankey requests.
std::string config_checksum(const PipelineConfig& config, const Inputs& inputs);

struct RunOptions {
  bool emit_pairs = false;
  std::vector<std::string> drop_factors;
  std::vector<std::string> duplicate_primaries;
};

using ArtifactSet = std::map<std::string, std::string>;  // file name -> contents

// Each phase reads what it needs from `artifacts` (or disk via load_artifacts)
// and adds its own files.
struct Pipeline {
  PipelineConfig config;
  Inputs inputs;
  RunOptions options;
  std::string checksum;

  Pipeline(PipelineConfig config, Inputs inputs, RunOptions options = {});

  void integrate(ArtifactSet& artifacts) const;
  void similarity(ArtifactSet& artifacts) const;
  void classify(ArtifactSet& artifacts) const;
  void cluster(ArtifactSet& artifacts) const;
  void place(ArtifactSet& artifacts) const;
  void indicate(ArtifactSet& artifacts) const;
  ValidationReport emit(ArtifactSet& artifacts) const;

  // Every phase in order, in memory.
  ValidationReport run(ArtifactSet& artifacts) const;

  // Structured artifact payload, checked against this pipeline's checksum.
  nlohmann::json payload(const ArtifactSet& artifacts, const std::string& file) const;
  std::string wrap(const std::string& artifact, nlohmann::ordered_json data) const;
};

// Reads the named files from `dir` into `artifacts`, skipping ones that are absent.
void load_artifacts(const std::filesystem::path& dir, const std::vector<std::string>& files,
                    ArtifactSet& artifacts);
void write_artifacts(const std::filesystem::path& dir, const ArtifactSet& artifacts);

std::string slug(std::string_view text);

}  // namespace taxoforge
