#include "taxoforge/applicability.hpp"

#include <map>
#include <sstream>

#include "taxoforge/error.hpp"
#include "taxoforge/similarity.hpp"

namespace taxoforge {

namespace {

constexpr std::string_view kEnDash = "\xE2\x80\x93";

std::string join_codes(const std::vector<SpaceType>& types) {
  std::string out;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (i) out += ", ";
    out += code_of(types[i]);
  }
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

double coverage(const OccurrenceVector& v) {
  return static_cast<double>(v.active_count()) / static_cast<double>(kSpaceTypeCount);
}

FactorClass class_by_coverage(double c) {
  // Compare in sixths so 5/6 computed as a double lands on the right side.
  const double sixths = c * kSpaceTypeCount + 1e-9;
  if (sixths >= 5) return FactorClass::Universal;
  if (sixths >= 3) return FactorClass::MultiSpace;
  return FactorClass::SpaceSpecific;
}

std::string ApplicabilityIndicator::render() const {
  switch (kind) {
    case IndicatorKind::UniversalAllTypes:
      return "Universal " + std::string(kEnDash) + " All Space Types";
    case IndicatorKind::UniversalWithEmphasis:
      return "Universal (with emphasis: " + join_codes(emphasis) + ")";
    case IndicatorKind::SpaceSpecific:
      return "Space-specific: " + join_codes(types);
    case IndicatorKind::MultiSpace: {
      std::vector<SpaceType> by_tier[3];
      for (SpaceType t : kSpaceTypes) by_tier[static_cast<int>(tiers[index_of(t)])].push_back(t);
      if (by_tier[1].empty()) return "Multi-space: " + join_codes(by_tier[0]);
      std::string out = "Strong: " + join_codes(by_tier[0]) + " | Moderate: " + join_codes(by_tier[1]);
      if (!by_tier[2].empty()) out += " | Minimal: " + join_codes(by_tier[2]);
      return out;
    }
  }
  return "";
}

ApplicabilityIndicator indicator(const OccurrenceVector& v, FactorClass cls, const Domain& home) {
  if (v.is_zero()) throw Error("indicator for a zero occurrence vector");
  ApplicabilityIndicator ind;
  std::vector<SpaceType> active;
  for (SpaceType t : kSpaceTypes) {
    if (v[t] > 0) active.push_back(t);
  }
  switch (cls) {
    case FactorClass::Universal:
      for (SpaceType t : active) {
        if (v[t] >= kEmphasisCount) ind.emphasis.push_back(t);
      }
      ind.kind = ind.emphasis.empty() ? IndicatorKind::UniversalAllTypes : IndicatorKind::UniversalWithEmphasis;
      break;
    case FactorClass::MultiSpace:
      ind.kind = IndicatorKind::MultiSpace;
      ind.types = active;
      for (SpaceType t : kSpaceTypes) {
        ind.tiers[index_of(t)] = v[t] > 0               ? Applicability::Strong
                                 : home.is_compatible(t) ? Applicability::Moderate
                                                         : Applicability::Minimal;
      }
      break;
    case FactorClass::SpaceSpecific:
      ind.kind = IndicatorKind::SpaceSpecific;
      ind.types = active;
      break;
  }
  return ind;
}

std::optional<IndicatorKind> indicator_kind_of(std::string_view s) {
  if (s == "Universal " + std::string(kEnDash) + " All Space Types") return IndicatorKind::UniversalAllTypes;
  if (starts_with(s, "Universal (with emphasis: ")) return IndicatorKind::UniversalWithEmphasis;
  if (starts_with(s, "Multi-space: ") || starts_with(s, "Strong: ")) return IndicatorKind::MultiSpace;
  if (starts_with(s, "Space-specific: ")) return IndicatorKind::SpaceSpecific;
  return std::nullopt;
}

bool kind_matches(IndicatorKind kind, FactorClass cls) {
  switch (kind) {
    case IndicatorKind::UniversalAllTypes:
    case IndicatorKind::UniversalWithEmphasis: return cls == FactorClass::Universal;
    case IndicatorKind::MultiSpace: return cls == FactorClass::MultiSpace;
    case IndicatorKind::SpaceSpecific: return cls == FactorClass::SpaceSpecific;
  }
  return false;
}

SpaceProfile aggregate_subcategory(const std::vector<OccurrenceVector>& members) {
  if (members.empty()) throw Error("cannot aggregate an empty subcategory");
  SpaceProfile p{};
  double total = 0.0;
  for (const auto& v : members) {
    for (std::size_t i = 0; i < kSpaceTypeCount; ++i) {
      p[i] += v.counts[i];
      total += v.counts[i];
    }
  }
  if (total <= 0.0) throw Error("subcategory has no mentions");
  for (double& x : p) x /= total;
  return p;
}

SpaceProfile aggregate_category(const std::vector<std::pair<SpaceProfile, int>>& subcategories) {
  if (subcategories.empty()) throw Error("cannot aggregate an empty category");
  SpaceProfile p{};
  double mass = 0.0;
  for (const auto& [profile, mentions] : subcategories) {
    for (std::size_t i = 0; i < kSpaceTypeCount; ++i) p[i] += profile[i] * mentions;
    mass += mentions;
  }
  if (mass <= 0.0) throw Error("category has no mentions");
  for (double& x : p) x /= mass;
  return p;
}

std::vector<std::string> profile_consistency(const SpaceProfile& profile,
                                             const std::vector<std::pair<std::string, OccurrenceVector>>& members) {
  std::vector<std::string> issues;
  for (const auto& [name, v] : members) {
    for (SpaceType t : kSpaceTypes) {
      if (v[t] > 0 && profile[index_of(t)] <= 0.0) {
        issues.push_back("'" + name + "' is active in " + std::string(1, code_of(t)) +
                         " but its category profile has no mass there");
      }
    }
  }
  return issues;
}

std::vector<Home> primary_homes(const std::vector<CategoryAssignment>& assignments,
                                const PlacementResult& placements) {
  std::vector<Home> homes;
  homes.reserve(assignments.size());
  for (const auto& a : assignments) homes.push_back(Home{a.category, a.subcategory});
  for (const auto& p : placements.placements) {
    if (p.tier == Tier::Primary) homes.at(p.factor) = Home{p.domain, p.subcategory};
  }
  return homes;
}

IndicatorResult indicate_all(const IntegratedFactorSet& factors,
                             const std::vector<FactorClassification>& classes,
                             const std::vector<Home>& homes, const DomainKnowledgeBase& kb) {
  const std::size_t n = factors.size();
  if (classes.size() != n || homes.size() != n) throw Error("indicator inputs cover different factor sets");
  IndicatorResult r;
  for (std::size_t i = 0; i < n; ++i) {
    r.factor_indicators.push_back(
        indicator(factors[i].occurrence, classes[i].cls, kb.domains.at(homes[i].domain)).render());
  }
  for (std::size_t d = 0; d < kb.domains.size(); ++d) {
    std::vector<std::pair<SpaceProfile, int>> subs;
    std::vector<std::pair<std::string, OccurrenceVector>> members;
    for (std::size_t s = 0; s < kb.domains[d].subcategories.size(); ++s) {
      std::vector<OccurrenceVector> vs;
      int mentions = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (homes[i] == Home{d, s}) {
          vs.push_back(factors[i].occurrence);
          members.emplace_back(factors[i].canonical_name, factors[i].occurrence);
          mentions += factors[i].occurrence.total();
        }
      }
      if (vs.empty()) continue;
      auto profile = aggregate_subcategory(vs);
      r.subcategory_profiles.emplace_back(Home{d, s}, profile);
      subs.emplace_back(profile, mentions);
    }
    if (subs.empty()) continue;
    auto profile = aggregate_category(subs);
    r.category_profiles.emplace_back(d, profile);
    for (auto& issue : profile_consistency(profile, members)) r.consistency_issues.push_back(std::move(issue));
  }
  return r;
}

std::string indicators_csv(const IntegratedFactorSet& factors, const IndicatorResult& result) {
  std::ostringstream out;
  out << "factor,tracking_notation,coverage,indicator\n";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    out << csv_escape(factors[i].canonical_name) << ',' << csv_escape(tracking_notation(factors[i].occurrence))
        << ',' << format_fixed(coverage(factors[i].occurrence), 4) << ','
        << csv_escape(result.factor_indicators.at(i)) << '\n';
  }
  return out.str();
}

namespace {
nlohmann::ordered_json profile_json(const SpaceProfile& p) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (SpaceType t : kSpaceTypes) j[std::string(1, code_of(t))] = p[index_of(t)];
  return j;
}
SpaceProfile profile_from(const nlohmann::json& j) {
  SpaceProfile p{};
  for (SpaceType t : kSpaceTypes) p[index_of(t)] = j.at(std::string(1, code_of(t))).get<double>();
  return p;
}
}  // namespace

nlohmann::ordered_json to_json(const IndicatorResult& r, const DomainKnowledgeBase& kb) {
  nlohmann::ordered_json j;
  j["factor_indicators"] = r.factor_indicators;
  auto subs = nlohmann::ordered_json::array();
  for (const auto& [home, p] : r.subcategory_profiles) {
    subs.push_back({{"category", kb.domains[home.domain].id},
                    {"subcategory", kb.domains[home.domain].subcategories[home.subcategory].id},
                    {"relevance", profile_json(p)}});
  }
  j["subcategory_profiles"] = std::move(subs);
  auto cats = nlohmann::ordered_json::array();
  for (const auto& [d, p] : r.category_profiles) {
    cats.push_back({{"category", kb.domains[d].id}, {"profile", profile_json(p)}});
  }
  j["category_profiles"] = std::move(cats);
  j["consistency_issues"] = r.consistency_issues;
  return j;
}

IndicatorResult indicators_from_json(const nlohmann::json& j, const DomainKnowledgeBase& kb) {
  IndicatorResult r;
  r.factor_indicators = j.at("factor_indicators").get<std::vector<std::string>>();
  auto domain = [&](const nlohmann::json& v) {
    auto d = kb.domain_index(v.get<std::string>());
    if (!d) throw Error("indicator artifact names an unknown category");
    return *d;
  };
  for (const auto& s : j.at("subcategory_profiles")) {
    auto d = domain(s.at("category"));
    auto sub = kb.domains[d].subcategory_index(s.at("subcategory").get<std::string>());
    if (!sub) throw Error("indicator artifact names an unknown subcategory");
    r.subcategory_profiles.emplace_back(Home{d, *sub}, profile_from(s.at("relevance")));
  }
  for (const auto& c : j.at("category_profiles")) {
    r.category_profiles.emplace_back(domain(c.at("category")), profile_from(c.at("profile")));
  }
  r.consistency_issues = j.at("consistency_issues").get<std::vector<std::string>>();
  return r;
}

}  // namespace taxoforge
