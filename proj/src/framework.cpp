#include "taxoforge/framework.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "taxoforge/error.hpp"
#include "taxoforge/similarity.hpp"

namespace taxoforge {

namespace {

constexpr std::string_view kEmDash = "\xE2\x80\x94";
constexpr std::string_view kArrow = "\xE2\x86\x92";

PlacementLabel label_at(const DomainKnowledgeBase& kb, std::size_t d, std::size_t s, Tier t) {
  return PlacementLabel{kb.domains.at(d).id, kb.domains.at(d).subcategories.at(s).id, std::string(tier_name(t))};
}

int tier_rank(const std::string& tier) {
  auto t = parse_tier(tier);
  return t ? static_cast<int>(*t) : 3;
}

double percentage(std::size_t raw, std::size_t unique) {
  return 100.0 * reduction_rate(raw, unique);
}

}  // namespace

void recount(Framework& fw) {
  std::set<std::string> unique;
  for (auto& cat : fw.categories) {
    cat.factor_total = 0;
    for (auto& sub : cat.subcategories) {
      sub.factor_count = 0;
      for (const auto& e : sub.entries) {
        if (!e.is_primary()) continue;
        ++sub.factor_count;
        unique.insert(e.canonical_name);
      }
      cat.factor_total += sub.factor_count;
    }
  }
  fw.metadata.unique_factors = unique.size();
  fw.metadata.reduction_percentage =
      unique.empty() || unique.size() > fw.metadata.total_original_factors
          ? 0.0
          : percentage(fw.metadata.total_original_factors, unique.size());
}

Framework build_framework(const IntegratedFactorSet& factors,
                          const std::vector<FactorClassification>& classes,
                          const std::vector<CategoryAssignment>& assignments,
                          const PlacementResult& placements, const IndicatorResult& indicators,
                          const DomainKnowledgeBase& kb,
                          const std::map<std::string, std::string>& checksums) {
  const std::size_t n = factors.size();
  if (n == 0) throw Error("cannot build a framework from an empty factor set");
  if (classes.size() != n || assignments.size() != n || indicators.factor_indicators.size() != n) {
    throw Error("phase outputs cover different factor sets");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (assignments[i].factor != i) throw Error("assignment order does not match the factor set");
  }
  for (const auto& p : placements.placements) {
    if (p.factor >= n) throw Error("placement refers to a factor outside the set");
  }

  const auto homes = primary_homes(assignments, placements);
  std::vector<std::vector<const StrategicPlacement*>> by_factor(n);
  for (const auto& p : placements.placements) by_factor[p.factor].push_back(&p);

  // (domain, subcategory) -> entries
  std::map<std::pair<std::size_t, std::size_t>, std::vector<FrameworkEntry>> cells;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = factors[i];
    FrameworkEntry primary;
    primary.canonical_name = f.canonical_name;
    primary.insertion_index = f.insertion_index;
    primary.tier = std::string(tier_name(Tier::Primary));
    primary.tracking_notation = tracking_notation(f.occurrence);
    primary.classification = std::string(class_name(classes[i].cls));
    primary.indicator = indicators.factor_indicators[i];
    const PlacementLabel home = label_at(kb, homes[i].domain, homes[i].subcategory, Tier::Primary);
    if (by_factor[i].empty()) {
      primary.placements.push_back(home);
    } else {
      for (const auto* p : by_factor[i]) primary.placements.push_back(label_at(kb, p->domain, p->subcategory, p->tier));
    }
    cells[{homes[i].domain, homes[i].subcategory}].push_back(primary);

    for (const auto* p : by_factor[i]) {
      if (p->tier == Tier::Primary) continue;
      FrameworkEntry stub;
      stub.canonical_name = f.canonical_name;
      stub.insertion_index = f.insertion_index;
      stub.tier = std::string(tier_name(p->tier));
      stub.see = home;
      cells[{p->domain, p->subcategory}].push_back(std::move(stub));
    }
  }

  Framework fw;
  fw.metadata.total_original_factors = factors.raw_record_count();
  for (SpaceType t : kSpaceTypes) fw.metadata.space_types.emplace_back(1, code_of(t));
  fw.metadata.checksums = checksums;
  for (std::size_t d = 0; d < kb.domains.size(); ++d) {
    FrameworkCategory cat;
    cat.id = kb.domains[d].id;
    for (std::size_t s = 0; s < kb.domains[d].subcategories.size(); ++s) {
      auto it = cells.find({d, s});
      if (it == cells.end()) continue;
      FrameworkSubcategory sub;
      sub.id = kb.domains[d].subcategories[s].id;
      sub.entries = std::move(it->second);
      std::stable_sort(sub.entries.begin(), sub.entries.end(), [](const auto& a, const auto& b) {
        if (a.insertion_index != b.insertion_index) return a.insertion_index < b.insertion_index;
        return tier_rank(a.tier) < tier_rank(b.tier);
      });
      cat.subcategories.push_back(std::move(sub));
    }
    if (!cat.subcategories.empty()) fw.categories.push_back(std::move(cat));
  }
  recount(fw);
  return fw;
}

std::vector<std::string> discrepancy_notes() {
  std::vector<std::string> notes;

  const std::size_t printed_pairs = 529506;
  if (pair_count(1029) != printed_pairs) {
    notes.push_back("pair count: n(n-1)/2 for 1029 factors is " + std::to_string(pair_count(1029)) +
                    ", printed figure is " + std::to_string(printed_pairs));
  }

  OccurrenceVector accessibility;
  accessibility[SpaceType::P] = 1;
  accessibility[SpaceType::S] = 1;
  accessibility[SpaceType::U] = 1;
  accessibility[SpaceType::O] = 4;
  accessibility[SpaceType::F] = 2;
  const double h = entropy(accessibility);
  if (std::fabs(h - 1.52) > 0.005) {
    notes.push_back("entropy: accessibility " + tracking_notation(accessibility) + " has entropy " +
                    format_fixed(h, 3) + " nats, printed value is 1.52");
  }

  // accessibility's printed composites: ACCESSIBILITY, SOCIAL, INFRASTRUCTURE, ECONOMIC
  const auto tiers = place(rank_domains({{0, 0.942}, {1, 0.823}, {2, 0.756}, {3, 0.694}}));
  for (const auto& t : tiers) {
    if (t.domain == 2 && t.tier != Tier::Secondary) {
      notes.push_back("placement: accessibility in INFRASTRUCTURE with composite 0.756 places as " +
                      std::string(tier_name(t.tier)) + " under the promotion rule, printed tier is secondary");
    }
  }

  OccurrenceVector distribution_row;  // thermal comfort in the classification examples
  distribution_row[SpaceType::P] = 1;
  distribution_row[SpaceType::U] = 1;
  distribution_row[SpaceType::O] = 1;
  OccurrenceVector indicator_row;  // thermal comfort in the indicator examples
  indicator_row[SpaceType::P] = 1;
  indicator_row[SpaceType::O] = 1;
  indicator_row[SpaceType::F] = 1;
  if (!(distribution_row == indicator_row)) {
    notes.push_back("pattern conflict: thermal comfort is " + tracking_notation(distribution_row) +
                    " in the classification examples but " + tracking_notation(indicator_row) +
                    " in the indicator examples; indicator fixture uses the latter");
  }
  return notes;
}

ValidationReport validate(const Framework& fw, const IntegratedFactorSet& factors) {
  ValidationReport r;
  std::map<std::string, std::size_t> primaries;
  std::set<std::string> mentioned;
  for (const auto& cat : fw.categories) {
    std::size_t total = 0;
    for (const auto& sub : cat.subcategories) {
      std::size_t count = 0;
      for (const auto& e : sub.entries) {
        mentioned.insert(e.canonical_name);
        if (!e.is_primary()) {
          if (!e.see) r.hierarchy_integrity.items.push_back("stub '" + e.canonical_name + "' has no target");
          continue;
        }
        ++count;
        ++primaries[e.canonical_name];
        auto cls = parse_class(e.classification);
        auto kind = indicator_kind_of(e.indicator);
        if (!cls || !kind || !kind_matches(*kind, *cls)) {
          r.indicator_consistency.items.push_back(e.canonical_name + ": '" + e.indicator + "' vs class '" +
                                                  e.classification + "'");
          continue;
        }
        try {
          auto v = parse_tracking_notation(e.tracking_notation);
          if (class_by_coverage(coverage(v)) != *cls) {
            r.indicator_consistency.items.push_back(e.canonical_name + ": coverage disagrees with class '" +
                                                    e.classification + "'");
          }
        } catch (const Error& ex) {
          r.indicator_consistency.items.push_back(e.canonical_name + ": " + ex.what());
        }
      }
      if (count != sub.factor_count) {
        r.hierarchy_integrity.items.push_back(cat.id + "/" + sub.id + " factor_count " +
                                              std::to_string(sub.factor_count) + " != " + std::to_string(count));
      }
      total += sub.factor_count;
    }
    if (total != cat.factor_total) {
      r.hierarchy_integrity.items.push_back(cat.id + " factor_total " + std::to_string(cat.factor_total) +
                                            " != " + std::to_string(total));
    }
  }

  for (const auto& f : factors.factors()) {
    if (!primaries.count(f.canonical_name)) r.completeness.items.push_back(f.canonical_name);
  }
  // Factors missing outright are a completeness failure only.
  for (const auto& name : mentioned) {
    if (!factors.find(name)) r.hierarchy_integrity.items.push_back("'" + name + "' is not an integrated factor");
    auto it = primaries.find(name);
    const std::size_t c = it == primaries.end() ? 0 : it->second;
    if (c != 1) {
      r.hierarchy_integrity.items.push_back("'" + name + "' has " + std::to_string(c) + " primary homes");
    }
  }

  const auto& md = fw.metadata;
  if (md.unique_factors != primaries.size()) {
    r.hierarchy_integrity.items.push_back("metadata unique_factors " + std::to_string(md.unique_factors) +
                                          " != " + std::to_string(primaries.size()));
  }
  if (md.total_original_factors != factors.raw_record_count()) {
    r.hierarchy_integrity.items.push_back("metadata total_original_factors does not match the corpus");
  }
  if (md.unique_factors > 0 && md.unique_factors <= md.total_original_factors &&
      md.reduction_percentage != percentage(md.total_original_factors, md.unique_factors)) {
    r.hierarchy_integrity.items.push_back("metadata reduction_percentage does not recompute");
  }

  r.completeness.pass = r.completeness.items.empty();
  r.hierarchy_integrity.pass = r.hierarchy_integrity.items.empty();
  r.indicator_consistency.pass = r.indicator_consistency.items.empty();
  r.discrepancy_notes = discrepancy_notes();
  return r;
}

void inject_drop(Framework& fw, std::string_view factor) {
  bool found = false;
  for (auto& cat : fw.categories) {
    for (auto& sub : cat.subcategories) {
      auto& es = sub.entries;
      auto before = es.size();
      es.erase(std::remove_if(es.begin(), es.end(), [&](const auto& e) { return e.canonical_name == factor; }),
               es.end());
      found = found || es.size() != before;
    }
  }
  if (!found) throw Error("cannot drop unknown factor '" + std::string(factor) + "'");
  recount(fw);
}

void inject_duplicate_primary(Framework& fw, std::string_view factor) {
  std::optional<FrameworkEntry> source;
  FrameworkSubcategory* home = nullptr;
  FrameworkSubcategory* other = nullptr;
  for (auto& cat : fw.categories) {
    for (auto& sub : cat.subcategories) {
      bool here = false;
      for (const auto& e : sub.entries) {
        if (e.is_primary() && e.canonical_name == factor) {
          source = e;
          here = true;
        }
      }
      if (here) {
        home = &sub;
      } else if (!other) {
        other = &sub;
      }
    }
  }
  if (!source) throw Error("cannot duplicate unknown factor '" + std::string(factor) + "'");
  (other ? other : home)->entries.push_back(*source);
  recount(fw);
}

namespace {

nlohmann::ordered_json label_json(const PlacementLabel& l) {
  return {{"category", l.category}, {"subcategory", l.subcategory}, {"tier", l.tier}};
}

PlacementLabel label_from(const nlohmann::json& j) {
  return PlacementLabel{j.at("category").get<std::string>(), j.at("subcategory").get<std::string>(),
                        j.at("tier").get<std::string>()};
}

nlohmann::ordered_json check_json(const CheckResult& c, const char* key) {
  return {{key, c.items}, {"pass", c.pass}};
}

}  // namespace

nlohmann::ordered_json to_json(const Framework& fw) {
  nlohmann::ordered_json j;
  j["schema_version"] = fw.schema_version;
  const auto& md = fw.metadata;
  j["metadata"] = {{"total_original_factors", md.total_original_factors},
                   {"unique_factors", md.unique_factors},
                   {"reduction_percentage", md.reduction_percentage},
                   {"space_types", md.space_types},
                   {"checksums", md.checksums}};
  auto cats = nlohmann::ordered_json::array();
  for (const auto& cat : fw.categories) {
    auto subs = nlohmann::ordered_json::array();
    for (const auto& sub : cat.subcategories) {
      auto entries = nlohmann::ordered_json::array();
      for (const auto& e : sub.entries) {
        nlohmann::ordered_json ej;
        ej["canonical_name"] = e.canonical_name;
        ej["insertion_index"] = e.insertion_index;
        ej["tier"] = e.tier;
        if (e.see) {
          ej["see"] = label_json(*e.see);
        } else {
          ej["tracking_notation"] = e.tracking_notation;
          ej["classification"] = e.classification;
          ej["indicator"] = e.indicator;
          auto ps = nlohmann::ordered_json::array();
          for (const auto& p : e.placements) ps.push_back(label_json(p));
          ej["placements"] = std::move(ps);
        }
        entries.push_back(std::move(ej));
      }
      subs.push_back({{"id", sub.id}, {"factor_count", sub.factor_count}, {"entries", std::move(entries)}});
    }
    cats.push_back({{"id", cat.id}, {"factor_total", cat.factor_total}, {"subcategories", std::move(subs)}});
  }
  j["categories"] = std::move(cats);
  return j;
}

nlohmann::ordered_json to_json(const ValidationReport& r) {
  nlohmann::ordered_json j;
  j["pass"] = r.pass();
  j["completeness"] = check_json(r.completeness, "missing");
  j["hierarchy_integrity"] = check_json(r.hierarchy_integrity, "violations");
  j["indicator_consistency"] = check_json(r.indicator_consistency, "mismatches");
  j["discrepancy_notes"] = r.discrepancy_notes;
  j["info"] = r.info;
  return j;
}

Framework framework_from_json(const nlohmann::json& j) {
  Framework fw;
  fw.schema_version = j.at("schema_version").get<int>();
  if (fw.schema_version != 1) throw Error("unsupported framework schema_version");
  const auto& md = j.at("metadata");
  fw.metadata.total_original_factors = md.at("total_original_factors").get<std::size_t>();
  fw.metadata.unique_factors = md.at("unique_factors").get<std::size_t>();
  fw.metadata.reduction_percentage = md.at("reduction_percentage").get<double>();
  fw.metadata.space_types = md.at("space_types").get<std::vector<std::string>>();
  fw.metadata.checksums = md.at("checksums").get<std::map<std::string, std::string>>();
  for (const auto& cj : j.at("categories")) {
    FrameworkCategory cat;
    cat.id = cj.at("id").get<std::string>();
    cat.factor_total = cj.at("factor_total").get<std::size_t>();
    for (const auto& sj : cj.at("subcategories")) {
      FrameworkSubcategory sub;
      sub.id = sj.at("id").get<std::string>();
      sub.factor_count = sj.at("factor_count").get<std::size_t>();
      for (const auto& ej : sj.at("entries")) {
        FrameworkEntry e;
        e.canonical_name = ej.at("canonical_name").get<std::string>();
        e.insertion_index = ej.at("insertion_index").get<std::size_t>();
        e.tier = ej.at("tier").get<std::string>();
        if (ej.contains("see")) {
          e.see = label_from(ej.at("see"));
        } else {
          e.tracking_notation = ej.at("tracking_notation").get<std::string>();
          e.classification = ej.at("classification").get<std::string>();
          e.indicator = ej.at("indicator").get<std::string>();
          for (const auto& pj : ej.at("placements")) e.placements.push_back(label_from(pj));
        }
        sub.entries.push_back(std::move(e));
      }
      cat.subcategories.push_back(std::move(sub));
    }
    fw.categories.push_back(std::move(cat));
  }
  return fw;
}

std::string framework_markdown(const Framework& fw, const ValidationReport& report) {
  std::ostringstream out;
  const auto& md = fw.metadata;
  out << "# Public space quality factor framework\n\n";
  out << "- Original factor mentions: " << md.total_original_factors << "\n";
  out << "- Unique factors: " << md.unique_factors << "\n";
  out << "- Reduction: " << format_fixed(md.reduction_percentage, 1) << "%\n";
  out << "- Space types:";
  for (std::size_t i = 0; i < md.space_types.size(); ++i) out << (i ? ", " : " ") << md.space_types[i];
  out << "\n";
  for (const auto& cat : fw.categories) {
    out << "\n## " << cat.id << " (" << cat.factor_total << ")\n";
    for (const auto& sub : cat.subcategories) {
      out << "\n### " << sub.id << " (" << sub.factor_count << ")\n\n";
      for (const auto& e : sub.entries) {
        if (e.see) {
          out << "- " << e.canonical_name << ' ' << kArrow << " see " << e.see->category << '/'
              << e.see->subcategory << ' ' << kEmDash << ' ' << e.tier << "\n";
        } else {
          out << "- " << e.canonical_name << ' ' << e.tracking_notation << ' ' << kEmDash << ' ' << e.indicator
              << ' ' << kEmDash << ' ' << e.tier << "\n";
        }
      }
    }
  }
  auto section = [&](const char* title, const CheckResult& c) {
    out << "- " << title << ": " << (c.pass ? "pass" : "FAIL") << "\n";
    for (const auto& item : c.items) out << "  - " << item << "\n";
  };
  out << "\n## Validation\n\n";
  section("completeness", report.completeness);
  section("hierarchy integrity", report.hierarchy_integrity);
  section("indicator consistency", report.indicator_consistency);
  if (!report.discrepancy_notes.empty()) {
    out << "\n### Discrepancy notes\n\n";
    for (const auto& n : report.discrepancy_notes) out << "- " << n << "\n";
  }
  if (!report.info.empty()) {
    out << "\n### Notes\n\n";
    for (const auto& n : report.info) out << "- " << n << "\n";
  }
  return out.str();
}

}  // namespace taxoforge
