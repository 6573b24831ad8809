#include "taxoforge/integrate.hpp"

#include "taxoforge/error.hpp"

namespace taxoforge {

namespace {
constexpr std::string_view kTimes = "\xC3\x97";  // U+00D7
}

std::set<std::string> IntegratedFactor::all_studies() const {
  std::set<std::string> out;
  for (const auto& s : studies) out.insert(s.begin(), s.end());
  return out;
}

IntegratedFactorSet::IntegratedFactorSet(std::vector<IntegratedFactor> factors,
                                         std::size_t raw_record_count)
    : factors_(std::move(factors)), raw_record_count_(raw_record_count) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& f = factors_[i];
    if (!by_name_.emplace(f.canonical_name, i).second) {
      throw Error("duplicate canonical factor '" + f.canonical_name + "'");
    }
    if (f.occurrence.is_zero()) throw Error("factor '" + f.canonical_name + "' has no occurrences");
    for (SpaceType t : kSpaceTypes) {
      if (f.occurrence[t] < 0) throw Error("negative count for '" + f.canonical_name + "'");
      if (static_cast<int>(f.studies[index_of(t)].size()) > f.occurrence[t]) {
        throw Error("factor '" + f.canonical_name + "' has more studies than mentions");
      }
    }
    total += static_cast<std::size_t>(f.occurrence.total());
  }
  if (total != raw_record_count_) {
    throw Error("occurrence counts sum to " + std::to_string(total) + " but " +
                std::to_string(raw_record_count_) + " records were integrated");
  }
}

std::optional<std::size_t> IntegratedFactorSet::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

IntegratedFactorSet integrate(const Corpus& corpus, const NormalizationRuleSet& rules) {
  if (corpus.empty()) throw Error("cannot integrate an empty corpus");
  std::vector<IntegratedFactor> factors;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t position = 0;
  for (const auto& rec : corpus.records()) {
    ++position;
    std::string name;
    try {
      name = normalize(rec.raw_name, rules);
    } catch (const Error& e) {
      throw Error("record " + std::to_string(position) + ": " + e.what());
    }
    auto [it, inserted] = seen.emplace(name, factors.size());
    if (inserted) {
      IntegratedFactor f;
      f.canonical_name = name;
      f.insertion_index = factors.size();
      factors.push_back(std::move(f));
    }
    auto& f = factors[it->second];
    f.occurrence[rec.space_type] += 1;
    f.studies[index_of(rec.space_type)].insert(rec.study_id);
  }
  return IntegratedFactorSet(std::move(factors), corpus.size());
}

std::string tracking_notation(const OccurrenceVector& v) {
  if (v.is_zero()) throw Error("tracking notation of an all-zero occurrence vector");
  std::string out = "[";
  bool first = true;
  for (SpaceType t : kSpaceTypes) {
    if (v[t] <= 0) continue;
    if (!first) out += ", ";
    first = false;
    out += code_of(t);
    out += kTimes;
    out += std::to_string(v[t]);
  }
  out += "]";
  return out;
}

OccurrenceVector parse_tracking_notation(std::string_view text) {
  auto fail = [&](const char* why) {
    return Error("bad tracking notation '" + std::string(text) + "': " + why);
  };
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') throw fail("missing brackets");
  auto body = text.substr(1, text.size() - 2);
  OccurrenceVector v;
  int last = -1;
  while (!body.empty()) {
    auto comma = body.find(", ");
    auto term = body.substr(0, comma);
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 2);
    if (term.size() < 1 + kTimes.size() + 1) throw fail("short term");
    auto type = parse_space_type(term.substr(0, 1));
    if (!type) throw fail("unknown space type");
    if (term.substr(1, kTimes.size()) != kTimes) throw fail("missing multiplication sign");
    int n = 0;
    for (char c : term.substr(1 + kTimes.size())) {
      if (c < '0' || c > '9') throw fail("non-numeric count");
      n = n * 10 + (c - '0');
    }
    if (n <= 0) throw fail("zero count");
    if (static_cast<int>(index_of(*type)) <= last) throw fail("terms out of canonical order");
    last = static_cast<int>(index_of(*type));
    v[*type] = n;
  }
  if (v.is_zero()) throw fail("empty");
  return v;
}

double reduction_rate(std::size_t raw_count, std::size_t unique_count) {
  if (raw_count == 0) throw Error("reduction rate undefined for zero records");
  if (unique_count == 0 || unique_count > raw_count) {
    throw Error("unique count must be in (0, raw count]");
  }
  return 1.0 - static_cast<double>(unique_count) / static_cast<double>(raw_count);
}

nlohmann::ordered_json to_json(const OccurrenceVector& v) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (SpaceType t : kSpaceTypes) j[std::string(1, code_of(t))] = v[t];
  return j;
}

OccurrenceVector occurrence_from_json(const nlohmann::json& j) {
  OccurrenceVector v;
  for (SpaceType t : kSpaceTypes) v[t] = j.at(std::string(1, code_of(t))).get<int>();
  return v;
}

nlohmann::ordered_json to_json(const IntegratedFactorSet& set) {
  nlohmann::ordered_json j;
  j["raw_record_count"] = set.raw_record_count();
  j["unique_count"] = set.unique_count();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& f : set.factors()) {
    nlohmann::ordered_json fj;
    fj["canonical_name"] = f.canonical_name;
    fj["insertion_index"] = f.insertion_index;
    fj["tracking_notation"] = tracking_notation(f.occurrence);
    fj["occurrence"] = to_json(f.occurrence);
    nlohmann::ordered_json studies = nlohmann::ordered_json::object();
    for (SpaceType t : kSpaceTypes) {
      const auto& s = f.studies[index_of(t)];
      studies[std::string(1, code_of(t))] = std::vector<std::string>(s.begin(), s.end());
    }
    fj["studies"] = std::move(studies);
    arr.push_back(std::move(fj));
  }
  j["factors"] = std::move(arr);
  return j;
}

IntegratedFactorSet integrated_from_json(const nlohmann::json& j) {
  std::vector<IntegratedFactor> factors;
  for (const auto& fj : j.at("factors")) {
    IntegratedFactor f;
    f.canonical_name = fj.at("canonical_name").get<std::string>();
    f.insertion_index = fj.at("insertion_index").get<std::size_t>();
    f.occurrence = occurrence_from_json(fj.at("occurrence"));
    for (SpaceType t : kSpaceTypes) {
      for (const auto& s : fj.at("studies").at(std::string(1, code_of(t)))) {
        f.studies[index_of(t)].insert(s.get<std::string>());
      }
    }
    factors.push_back(std::move(f));
  }
  IntegratedFactorSet set(std::move(factors), j.at("raw_record_count").get<std::size_t>());
  if (set.unique_count() != j.at("unique_count").get<std::size_t>()) {
    throw Error("integrated artifact unique_count does not match its factor list");
  }
  return set;
}

}  // namespace taxoforge
