#include "taxoforge/pipeline.hpp"

#include <cctype>
#include <fstream>

#include "taxoforge/checksum.hpp"
#include "taxoforge/error.hpp"

namespace taxoforge {

namespace fs = std::filesystem;

namespace {

constexpr int kArtifactSchema = 1;

fs::path resolve(const fs::path& p, const fs::path& base) {
  return p.is_absolute() ? p : base / p;
}

void check_unit(double v, const std::string& name) {
  if (!(v >= 0.0 && v <= 1.0)) throw Error("threshold " + name + " must lie in [0, 1]");
}

CorpusFormat format_for(const fs::path& p) {
  return p.extension() == ".json" ? CorpusFormat::Structured : CorpusFormat::Delimited;
}

std::string comment_header(const std::string& artifact, const std::string& checksum) {
  return "# artifact=" + artifact + " schema_version=" + std::to_string(kArtifactSchema) +
         " config_checksum=" + checksum + "\n";
}

template <class F>
auto in_phase(const char* phase, F&& body) {
  try {
    return body();
  } catch (const IoError& e) {
    throw IoError(std::string("phase ") + phase + ": " + e.what());
  } catch (const Error& e) {
    throw Error(std::string("phase ") + phase + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("phase ") + phase + ": malformed artifact: " + e.what());
  }
}

}  // namespace

void Thresholds::set(std::string_view name, double value) {
  if (name == "band_high") band_high = value;
  else if (name == "band_low") band_low = value;
  else if (name == "related") related = value;
  else if (name == "subcluster") subcluster = value;
  else if (name == "cross_cutting") cross_cutting = value;
  else if (name == "promotion") promotion = value;
  else throw Error("unknown threshold '" + std::string(name) + "'");
}

void Thresholds::validate() const {
  check_unit(band_high, "band_high");
  check_unit(band_low, "band_low");
  check_unit(related, "related");
  check_unit(subcluster, "subcluster");
  check_unit(cross_cutting, "cross_cutting");
  check_unit(promotion, "promotion");
  if (band_low > band_high) throw Error("threshold band_low exceeds band_high");
}

void PipelineConfig::validate() const {
  if (datasets.empty()) throw Error("config lists no datasets");
  weights.validate();
  thresholds.validate();
  if (jobs == 0) throw Error("jobs must be at least 1");
}

PipelineConfig config_from_json(const nlohmann::json& j, const fs::path& base) {
  PipelineConfig c;
  const auto& ds = j.at("datasets");
  if (ds.is_object()) {
    // Typology keys are processed in canonical order regardless of file order.
    for (SpaceType t : kSpaceTypes) {
      const std::string key(1, code_of(t));
      if (ds.contains(key)) c.datasets.push_back({t, resolve(ds.at(key).get<std::string>(), base)});
    }
    for (const auto& [key, _] : ds.items()) {
      if (!parse_space_type(key)) throw Error("config datasets key '" + key + "' is not a space type");
    }
  } else {
    for (const auto& p : ds) c.datasets.push_back({std::nullopt, resolve(p.get<std::string>(), base)});
  }
  c.rules = resolve(j.at("rules").get<std::string>(), base);
  c.kb = resolve(j.at("kb").get<std::string>(), base);
  c.lexicon = resolve(j.at("lexicon").get<std::string>(), base);
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    c.weights = SimilarityWeights{w.at("linguistic").get<double>(), w.at("distributional").get<double>(),
                                  w.at("co_occurrence").get<double>()};
  }
  if (j.contains("thresholds")) {
    for (const auto& [name, v] : j.at("thresholds").items()) c.thresholds.set(name, v.get<double>());
  }
  if (j.contains("out")) c.out = resolve(j.at("out").get<std::string>(), base);
  if (j.contains("jobs")) c.jobs = j.at("jobs").get<unsigned>();
  if (j.contains("sankey")) {
    for (const auto& s : j.at("sankey")) {
      SankeyRequest r{s.at("category").get<std::string>(), {}};
      if (s.contains("subfactors")) r.subfactors = s.at("subfactors").get<std::vector<std::string>>();
      c.sankey.push_back(std::move(r));
    }
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("config path not found: " + path.string());
  const auto text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  try {
    return config_from_json(j, path.parent_path());
  } catch (const nlohmann::json::exception& e) {
    throw IoError("config " + path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw IoError("config " + path.string() + ": " + e.what());
  }
}

Inputs load_inputs(const PipelineConfig& config) {
  Inputs in;
  std::size_t k = 0;
  for (const auto& d : config.datasets) {
    if (!fs::exists(d.path)) throw IoError("dataset not found: " + d.path.string());
    const auto text = read_file(d.path);
    try {
      in.corpus.append(parse_corpus(text, format_for(d.path), d.space_type));
    } catch (const IoError&) {
      throw;
    } catch (const Error& e) {
      throw Error("dataset " + d.path.string() + ": " + e.what());
    }
    in.checksums["dataset." + std::to_string(k++)] = checksum_hex(text);
  }
  if (!fs::exists(config.kb)) throw IoError("kb path not found: " + config.kb.string());
  if (!fs::exists(config.rules)) throw IoError("rules path not found: " + config.rules.string());
  if (!fs::exists(config.lexicon)) throw IoError("lexicon path not found: " + config.lexicon.string());
  in.rules = load_rules(config.rules);
  in.kb = load_knowledge_base(config.kb);
  in.lexicon = load_lexicon(config.lexicon);
  in.checksums["rules"] = checksum_hex(read_file(config.rules));
  in.checksums["kb"] = checksum_hex(read_file(config.kb));
  in.checksums["lexicon"] = checksum_hex(read_file(config.lexicon));
  return in;
}

std::string config_checksum(const PipelineConfig& config, const Inputs& inputs) {
  nlohmann::ordered_json j;
  j["inputs"] = inputs.checksums;
  j["weights"] = {config.weights.linguistic, config.weights.distributional, config.weights.co_occurrence};
  const auto& t = config.thresholds;
  j["thresholds"] = {t.band_high, t.band_low, t.related, t.subcluster, t.cross_cutting, t.promotion};
  return checksum_hex(j.dump());
}

Pipeline::Pipeline(PipelineConfig c, Inputs in, RunOptions o)
    : config(std::move(c)), inputs(std::move(in)), options(std::move(o)) {
  config.validate();
  checksum = config_checksum(config, inputs);
}

std::string Pipeline::wrap(const std::string& artifact, nlohmann::ordered_json data) const {
  nlohmann::ordered_json j;
  j["artifact"] = artifact;
  j["schema_version"] = kArtifactSchema;
  j["config_checksum"] = checksum;
  j["data"] = std::move(data);
  return j.dump(2) + "\n";
}

nlohmann::json Pipeline::payload(const ArtifactSet& artifacts, const std::string& file) const {
  auto it = artifacts.find(file);
  if (it == artifacts.end()) throw IoError("missing upstream artifact " + file);
  auto j = nlohmann::json::parse(it->second);
  if (j.at("schema_version").get<int>() != kArtifactSchema) throw IoError("artifact " + file + " has an unsupported schema");
  if (j.at("config_checksum").get<std::string>() != checksum) {
    throw IoError("stale artifact " + file + ": config checksum mismatch");
  }
  return j.at("data");
}

void Pipeline::integrate(ArtifactSet& a) const {
  in_phase("integrate", [&] {
    const auto factors = taxoforge::integrate(inputs.corpus, inputs.rules);
    a["integrated.json"] = wrap("integrated", to_json(factors));
  });
}

void Pipeline::similarity(ArtifactSet& a) const {
  in_phase("similarity", [&] {
    const auto factors = integrated_from_json(payload(a, "integrated.json"));
    const auto m = build_matrix(factors, config.weights, inputs.lexicon, config.jobs);
    const BandThresholds bands{config.thresholds.band_high, config.thresholds.band_low};
    const auto census = band_census(m, bands);
    nlohmann::ordered_json data;
    data["census"] = {{"pairs", census.total()}, {"high", census.high}, {"moderate", census.moderate},
                      {"low", census.low}};
    data["matrix"] = to_json(m);
    a["similarity.json"] = wrap("similarity", std::move(data));
    if (options.emit_pairs) {
      a["pairs.csv"] = comment_header("pairs", checksum) + banded_pairs_csv(m, factors, bands);
    }
  });
}

void Pipeline::classify(ArtifactSet& a) const {
  in_phase("classify", [&] {
    const auto factors = integrated_from_json(payload(a, "integrated.json"));
    payload(a, "similarity.json");
    const auto classes =
        classify_all(factors, inputs.kb, inputs.lexicon, config.thresholds.cross_cutting, config.jobs);
    const auto census = classification_census(classes);
    nlohmann::ordered_json data;
    data["census"] = {{"universal", census.universal},
                      {"multi_space", census.multi_space},
                      {"space_specific", census.space_specific},
                      {"cross_cutting", census.cross_cutting}};
    data["factors"] = to_json(classes, inputs.kb);
    a["classification.json"] = wrap("classification", std::move(data));
    a["classification.csv"] =
        comment_header("classification", checksum) + classification_report_csv(factors, classes, inputs.kb);
  });
}

void Pipeline::cluster(ArtifactSet& a) const {
  in_phase("cluster", [&] {
    const auto factors = integrated_from_json(payload(a, "integrated.json"));
    const auto m = matrix_from_json(payload(a, "similarity.json").at("matrix"));
    const auto classes = classifications_from_json(payload(a, "classification.json").at("factors"), inputs.kb);
    ClusterConfig cc;
    cc.related_threshold = config.thresholds.related;
    cc.subcluster_threshold = config.thresholds.subcluster;
    const auto assignments = cluster_factors(factors, m, classes, inputs.kb, inputs.lexicon, cc, config.jobs);
    const auto report = validate_hierarchy(assignments, factors.size(), inputs.kb);
    if (!report.ok()) throw Error("hierarchy check failed: " + report.violations.front());
    nlohmann::ordered_json data;
    data["category_count"] = report.category_count;
    data["subcategory_count"] = report.subcategory_count;
    data["assignments"] = to_json(assignments, inputs.kb);
    a["assignments.json"] = wrap("assignments", std::move(data));
    a["assignments.csv"] = comment_header("assignments", checksum) + assignments_csv(factors, assignments, inputs.kb);
  });
}

void Pipeline::place(ArtifactSet& a) const {
  in_phase("place", [&] {
    const auto factors = integrated_from_json(payload(a, "integrated.json"));
    const auto m = matrix_from_json(payload(a, "similarity.json").at("matrix"));
    const auto classes = classifications_from_json(payload(a, "classification.json").at("factors"), inputs.kb);
    const auto assignments = assignments_from_json(payload(a, "assignments.json").at("assignments"), inputs.kb);
    PlacementConfig pc;
    pc.related_threshold = config.thresholds.related;
    pc.promotion = config.thresholds.promotion;
    const auto result = place_all(factors, m, classes, assignments, inputs.kb, inputs.lexicon, pc);
    a["placements.json"] = wrap("placements", to_json(result, inputs.kb));
    a["placements.csv"] = comment_header("placements", checksum) + placements_csv(factors, result, inputs.kb);
  });
}

void Pipeline::indicate(ArtifactSet& a) const {
  in_phase("indicate", [&] {
    const auto factors = integrated_from_json(payload(a, "integrated.json"));
    const auto classes = classifications_from_json(payload(a, "classification.json").at("factors"), inputs.kb);
    const auto assignments = assignments_from_json(payload(a, "assignments.json").at("assignments"), inputs.kb);
    const auto placements = placements_from_json(payload(a, "placements.json"), inputs.kb);
    const auto result = indicate_all(factors, classes, primary_homes(assignments, placements), inputs.kb);
    a["indicators.json"] = wrap("indicators", to_json(result, inputs.kb));
    a["indicators.csv"] = comment_header("indicators", checksum) + indicators_csv(factors, result);
  });
}

ValidationReport Pipeline::emit(ArtifactSet& a) const {
  return in_phase("emit", [&] {
    const auto factors = integrated_from_json(payload(a, "integrated.json"));
    const auto classes = classifications_from_json(payload(a, "classification.json").at("factors"), inputs.kb);
    const auto assignments = assignments_from_json(payload(a, "assignments.json").at("assignments"), inputs.kb);
    const auto placements = placements_from_json(payload(a, "placements.json"), inputs.kb);
    const auto indicators = indicators_from_json(payload(a, "indicators.json"), inputs.kb);

    auto checksums = inputs.checksums;
    checksums["config"] = checksum;
    auto fw = build_framework(factors, classes, assignments, placements, indicators, inputs.kb, checksums);
    for (const auto& f : options.drop_factors) inject_drop(fw, f);
    for (const auto& f : options.duplicate_primaries) inject_duplicate_primary(fw, f);

    auto report = validate(fw, factors);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (!classes[i].primary_domain) {
        report.info.push_back("'" + factors[i].canonical_name +
                              "' matches no domain lexicon; placed by distribution and similarity only");
      }
    }
    for (const auto& issue : indicators.consistency_issues) report.info.push_back(issue);

    nlohmann::ordered_json data;
    data["framework"] = to_json(fw);
    data["validation"] = to_json(report);
    a["framework.json"] = wrap("framework", std::move(data));
    a["framework.md"] = "<!-- config_checksum=" + checksum + " -->\n" + framework_markdown(fw, report);
    a["validation.json"] = wrap("validation", to_json(report));
    std::vector<std::string> declared;
    for (const auto& d : inputs.kb.domains) declared.push_back(d.id);
    for (const auto& req : config.sankey) {
      const auto s = export_sankey(fw, req.category, req.subfactors, declared);
      std::string name = "sankey_" + slug(s.category);
      if (!req.subfactors.empty()) {
        std::string joined;
        for (const auto& f : req.subfactors) joined += f + " ";
        name += "__" + slug(joined);
      }
      a[name + ".csv"] = comment_header("sankey", checksum) + sankey_text(s);
    }
    return report;
  });
}

ValidationReport Pipeline::run(ArtifactSet& a) const {
  integrate(a);
  similarity(a);
  classify(a);
  cluster(a);
  place(a);
  indicate(a);
  return emit(a);
}

void load_artifacts(const fs::path& dir, const std::vector<std::string>& files, ArtifactSet& artifacts) {
  for (const auto& f : files) {
    const auto p = dir / f;
    if (fs::exists(p)) artifacts[f] = read_file(p);
  }
}

void write_artifacts(const fs::path& dir, const ArtifactSet& artifacts) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto& [name, contents] : artifacts) write_file(dir / name, contents);
}

std::string slug(std::string_view text) {
  std::string out;
  bool gap = false;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      if (gap && !out.empty()) out += '_';
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      gap = false;
    } else {
      gap = true;
    }
  }
  return out;
}

}  // namespace taxoforge
