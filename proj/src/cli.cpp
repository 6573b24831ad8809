#include "taxoforge/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "taxoforge/error.hpp"
#include "taxoforge/pipeline.hpp"

namespace taxoforge {

namespace {

const std::vector<std::string> kArtifactFiles = {
    "integrated.json", "similarity.json", "classification.json", "assignments.json",
    "placements.json", "indicators.json"};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    auto b = item.find_first_not_of(' ');
    auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(what + ": '" + s + "' is not a number");
  }
}

struct Flags {
  std::string config;
  std::string out;
  std::string weights;
  std::vector<std::string> thresholds;
  bool emit_pairs = false;
  std::string sankey;
  std::string subfactors;
  unsigned jobs = 0;
  std::string kb, rules, lexicon;
  std::vector<std::string> faults;
};

PipelineConfig resolve_config(const Flags& f) {
  std::string path = f.config;
  if (path.empty()) {
    if (const char* env = std::getenv("TAXOFORGE_CONFIG")) path = env;
  }
  if (path.empty()) throw IoError("no config given: pass --config or set TAXOFORGE_CONFIG");
  auto c = load_config(path);
  if (!f.out.empty()) c.out = f.out;
  if (!f.kb.empty()) c.kb = f.kb;
  if (!f.rules.empty()) c.rules = f.rules;
  if (!f.lexicon.empty()) c.lexicon = f.lexicon;
  if (f.jobs > 0) c.jobs = f.jobs;
  if (!f.weights.empty()) {
    auto parts = split(f.weights, ',');
    if (parts.size() != 3) throw Error("--weights expects l,d,c");
    c.weights = SimilarityWeights{parse_number(parts[0], "--weights"), parse_number(parts[1], "--weights"),
                                  parse_number(parts[2], "--weights")};
  }
  for (const auto& t : f.thresholds) {
    auto eq = t.find('=');
    if (eq == std::string::npos) throw Error("--threshold expects name=value");
    c.thresholds.set(t.substr(0, eq), parse_number(t.substr(eq + 1), "--threshold"));
  }
  if (!f.sankey.empty()) c.sankey = {SankeyRequest{f.sankey, split(f.subfactors, ',')}};
  c.validate();
  return c;
}

RunOptions run_options(const Flags& f) {
  RunOptions o;
  o.emit_pairs = f.emit_pairs;
  for (const auto& fault : f.faults) {
    auto colon = fault.find(':');
    auto kind = fault.substr(0, colon);
    if (colon == std::string::npos || colon + 1 == fault.size()) throw Error("--inject-fault expects kind:factor");
    auto factor = fault.substr(colon + 1);
    if (kind == "drop") o.drop_factors.push_back(factor);
    else if (kind == "duplicate-primary") o.duplicate_primaries.push_back(factor);
    else throw Error("unknown fault kind '" + kind + "'");
  }
  return o;
}

void report_validation(const ValidationReport& r) {
  std::cout << "validation: " << (r.pass() ? "pass" : "FAIL") << " (completeness "
            << (r.completeness.pass ? "pass" : "fail") << ", hierarchy integrity "
            << (r.hierarchy_integrity.pass ? "pass" : "fail") << ", indicator consistency "
            << (r.indicator_consistency.pass ? "pass" : "fail") << ")\n";
  for (const auto& n : r.discrepancy_notes) std::cout << "note: " << n << "\n";
  if (!r.pass()) {
    for (const auto* c : {&r.completeness, &r.hierarchy_integrity, &r.indicator_consistency}) {
      for (const auto& item : c->items) std::cerr << "validation: " << item << "\n";
    }
  }
}

int execute(const std::string& command, const Flags& flags) {
  const auto config = resolve_config(flags);
  Pipeline pipeline(config, load_inputs(config), run_options(flags));

  ArtifactSet artifacts;
  if (command == "run") {
    auto report = pipeline.run(artifacts);
    write_artifacts(config.out, artifacts);
    std::cout << "wrote " << artifacts.size() << " artifacts to " << config.out.string() << "\n";
    report_validation(report);
    return report.pass() ? 0 : 2;
  }

  load_artifacts(config.out, kArtifactFiles, artifacts);
  const ArtifactSet before = artifacts;
  int code = 0;
  if (command == "integrate") pipeline.integrate(artifacts);
  else if (command == "similarity") pipeline.similarity(artifacts);
  else if (command == "classify") pipeline.classify(artifacts);
  else if (command == "cluster") pipeline.cluster(artifacts);
  else if (command == "place") pipeline.place(artifacts);
  else if (command == "indicate") pipeline.indicate(artifacts);
  else if (command == "emit") {
    auto report = pipeline.emit(artifacts);
    report_validation(report);
    code = report.pass() ? 0 : 2;
  }
  ArtifactSet produced;
  for (const auto& [name, contents] : artifacts) {
    auto it = before.find(name);
    if (it == before.end() || it->second != contents) produced.emplace(name, contents);
  }
  write_artifacts(config.out, produced);
  for (const auto& [name, _] : produced) std::cout << "wrote " << (config.out / name).string() << "\n";
  return code;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Builds a hierarchical public space quality factor framework from study records."};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "Pipeline config (falls back to TAXOFORGE_CONFIG)");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--weights", flags.weights, "Similarity weights l,d,c");
    sub->add_option("--threshold", flags.thresholds, "Threshold override name=value")->take_all();
    sub->add_option("--jobs", flags.jobs, "Parallelism for similarity and per-factor scoring");
    sub->add_option("--kb", flags.kb, "Knowledge base override");
    sub->add_option("--rules", flags.rules, "Normalization rules override");
    sub->add_option("--lexicon", flags.lexicon, "Semantic lexicon override");
  };

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"run", "Run every phase and write all artifacts"},
      {"integrate", "Phase 1: normalize and deduplicate records"},
      {"similarity", "Phase 2: pairwise similarity matrix"},
      {"classify", "Phase 3: distribution classes and cross-cutting status"},
      {"cluster", "Phase 4: category and subcategory assignment"},
      {"place", "Phase 5: tiered placement of cross-cutting factors"},
      {"indicate", "Phase 6: space-type applicability indicators"},
      {"emit", "Phase 7: framework exports and validation"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub);
    if (name == "run" || name == "similarity") {
      sub->add_flag("--emit-pairs", flags.emit_pairs, "Write the banded pair dump");
    }
    if (name == "run" || name == "emit") {
      sub->add_option("--sankey", flags.sankey, "Category for the Sankey export");
      sub->add_option("--subfactors", flags.subfactors, "Comma-separated Sankey filter")->needs("--sankey");
      sub->add_option("--inject-fault", flags.faults, "drop:<factor> or duplicate-primary:<factor>");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, flags);
  } catch (const std::exception& e) {
    std::cerr << "taxoforge " << command << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace taxoforge
