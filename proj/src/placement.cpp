#include "taxoforge/placement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "taxoforge/error.hpp"

namespace taxoforge {

void CompositeWeights::validate() const {
  const double sum = semantic_relevance + functional_importance + theoretical_justification +
                     space_compatibility;
  if (semantic_relevance < 0 || functional_importance < 0 || theoretical_justification < 0 ||
      space_compatibility < 0 || std::abs(sum - 1.0) > 1e-9) {
    throw Error("composite weights must be non-negative and sum to 1");
  }
}

double weighted_composite(const CompositeScore& c, const CompositeWeights& w) {
  return w.semantic_relevance * c.semantic_relevance + w.functional_importance * c.functional_importance +
         w.theoretical_justification * c.theoretical_justification +
         w.space_compatibility * c.space_compatibility;
}

CompositeScore composite(const IntegratedFactor& factor, std::size_t domain,
                         const CrossCuttingAssessment& assessment, const DomainKnowledgeBase& kb,
                         const std::vector<std::size_t>& related,
                         const std::vector<CategoryAssignment>& assignments,
                         const CompositeWeights& w) {
  const auto& rel = assessment.relevant_domains;
  if (std::find(rel.begin(), rel.end(), domain) == rel.end()) {
    throw Error("domain '" + kb.domains.at(domain).id + "' is not relevant to '" +
                factor.canonical_name + "'");
  }
  const Domain& d = kb.domains[domain];
  CompositeScore c;
  c.semantic_relevance = assessment.relevance.at(domain);
  if (!related.empty()) {
    auto hits = std::count_if(related.begin(), related.end(),
                              [&](std::size_t g) { return assignments.at(g).category == domain; });
    c.functional_importance = static_cast<double>(hits) / static_cast<double>(related.size());
  }
  switch (d.literature(factor.canonical_name)) {
    case Literature::Strong: c.theoretical_justification = 1.0; break;
    case Literature::Partial: c.theoretical_justification = 0.5; break;
    case Literature::None: c.theoretical_justification = 0.0; break;
  }
  c.space_compatibility = cosine(to_profile(factor.occurrence), d.space_profile);
  c.composite = weighted_composite(c, w);
  return c;
}

std::string_view tier_name(Tier t) {
  switch (t) {
    case Tier::Primary: return "primary";
    case Tier::Secondary: return "secondary";
    case Tier::Tertiary: return "tertiary";
  }
  return "";
}

std::optional<Tier> parse_tier(std::string_view s) {
  for (auto t : {Tier::Primary, Tier::Secondary, Tier::Tertiary}) {
    if (tier_name(t) == s) return t;
  }
  return std::nullopt;
}

std::vector<RankedDomain> rank_domains(std::vector<RankedDomain> domains) {
  std::stable_sort(domains.begin(), domains.end(), [](const RankedDomain& a, const RankedDomain& b) {
    if (a.composite != b.composite) return a.composite > b.composite;
    return a.domain < b.domain;
  });
  return domains;
}

std::vector<TierDecision> place(const std::vector<RankedDomain>& ranked, double promotion) {
  if (ranked.empty()) throw Error("cannot place a factor without ranked domains");
  std::vector<TierDecision> out;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    Tier t = r == 0 ? Tier::Primary
             : r == 1 || ranked[r].composite >= promotion ? Tier::Secondary
                                                          : Tier::Tertiary;
    out.push_back(TierDecision{ranked[r].domain, t, ranked[r].composite});
  }
  return out;
}

std::vector<CrossReference> cross_references(const std::vector<StrategicPlacement>& placements) {
  std::vector<CrossReference> out;
  for (const auto& p : placements) {
    if (p.tier == Tier::Primary) continue;
    auto primary = std::find_if(placements.begin(), placements.end(), [&](const StrategicPlacement& q) {
      return q.factor == p.factor && q.tier == Tier::Primary;
    });
    if (primary == placements.end()) {
      throw Error("factor #" + std::to_string(p.factor) + " has placements but no primary");
    }
    out.push_back(CrossReference{p.factor, p.domain, p.subcategory, p.tier, primary->domain,
                                 primary->subcategory});
  }
  return out;
}

PlacementMetrics placement_metrics(const std::vector<StrategicPlacement>& placements,
                                   std::size_t cross_cutting_factors) {
  PlacementMetrics m;
  m.total = placements.size();
  m.cross_cutting_factors = cross_cutting_factors;
  if (cross_cutting_factors == 0) return m;
  m.average = static_cast<double>(m.total) / static_cast<double>(cross_cutting_factors);
  std::size_t consistent = 0;
  for (const auto& p : placements) {
    if (p.tier == Tier::Primary && p.is_argmax) ++consistent;
  }
  m.consistency = static_cast<double>(consistent) / static_cast<double>(cross_cutting_factors);
  return m;
}

PlacementResult place_all(const IntegratedFactorSet& factors, const SimilarityMatrix& m,
                          const std::vector<FactorClassification>& classes,
                          const std::vector<CategoryAssignment>& assignments,
                          const DomainKnowledgeBase& kb, const SemanticLexicon& lexicon,
                          const PlacementConfig& config) {
  config.weights.validate();
  const std::size_t n = factors.size();
  if (m.size() != n || classes.size() != n || assignments.size() != n) {
    throw Error("placement inputs cover different factor sets");
  }
  PlacementResult result;
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cc = classes[i].cross_cutting;
    if (!cc.flagged) continue;
    ++flagged;
    const auto related = related_factors(i, m, config.related_threshold);
    std::vector<RankedDomain> scored;
    for (auto d : cc.relevant_domains) {
      scored.push_back(
          RankedDomain{d, composite(factors[i], d, cc, kb, related, assignments, config.weights).composite});
    }
    auto ranked = rank_domains(scored);
    const std::size_t argmax = ranked.front().domain;

    if (auto ov = kb.placement_overrides.find(factors[i].canonical_name); ov != kb.placement_overrides.end()) {
      const std::size_t forced = *kb.domain_index(ov->second);
      auto it = std::find_if(ranked.begin(), ranked.end(), [&](const RankedDomain& r) { return r.domain == forced; });
      if (it == ranked.end()) {
        throw Error("placement override puts '" + factors[i].canonical_name + "' in '" + ov->second +
                    "', which is not one of its relevant domains");
      }
      std::rotate(ranked.begin(), it, it + 1);
    }

    for (const auto& decision : place(ranked, config.promotion)) {
      StrategicPlacement p;
      p.factor = i;
      p.domain = decision.domain;
      p.tier = decision.tier;
      p.composite = decision.composite;
      p.is_argmax = decision.domain == argmax;
      if (decision.domain == assignments[i].category) {
        p.subcategory = assignments[i].subcategory;
      } else {
        p.subcategory = best_subcategory({factors[i].canonical_name}, kb.domains[decision.domain], lexicon)
                            .value_or(0);
      }
      result.placements.push_back(p);
    }
  }
  result.references = cross_references(result.placements);
  result.metrics = placement_metrics(result.placements, flagged);
  return result;
}

std::string placements_csv(const IntegratedFactorSet& factors, const PlacementResult& result,
                           const DomainKnowledgeBase& kb) {
  std::ostringstream out;
  out << "factor,domain,subcategory,tier,composite,is_argmax\n";
  for (const auto& p : result.placements) {
    const auto& d = kb.domains[p.domain];
    out << csv_escape(factors[p.factor].canonical_name) << ',' << csv_escape(d.id) << ','
        << csv_escape(d.subcategories[p.subcategory].id) << ',' << tier_name(p.tier) << ','
        << format_fixed(p.composite, 6) << ',' << (p.is_argmax ? "true" : "false") << '\n';
  }
  return out.str();
}

nlohmann::ordered_json to_json(const PlacementResult& result, const DomainKnowledgeBase& kb) {
  nlohmann::ordered_json j;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : result.placements) {
    const auto& d = kb.domains[p.domain];
    nlohmann::ordered_json pj;
    pj["factor"] = p.factor;
    pj["domain"] = d.id;
    pj["subcategory"] = d.subcategories[p.subcategory].id;
    pj["tier"] = tier_name(p.tier);
    pj["composite"] = p.composite;
    pj["is_argmax"] = p.is_argmax;
    arr.push_back(std::move(pj));
  }
  j["placements"] = std::move(arr);
  j["metrics"] = {{"total", result.metrics.total},
                  {"cross_cutting_factors", result.metrics.cross_cutting_factors},
                  {"average", result.metrics.average},
                  {"consistency", result.metrics.consistency}};
  return j;
}

PlacementResult placements_from_json(const nlohmann::json& j, const DomainKnowledgeBase& kb) {
  PlacementResult r;
  for (const auto& pj : j.at("placements")) {
    StrategicPlacement p;
    p.factor = pj.at("factor").get<std::size_t>();
    auto d = kb.domain_index(pj.at("domain").get<std::string>());
    if (!d) throw Error("placement artifact names an unknown domain");
    p.domain = *d;
    auto s = kb.domains[*d].subcategory_index(pj.at("subcategory").get<std::string>());
    if (!s) throw Error("placement artifact names an unknown subcategory");
    p.subcategory = *s;
    auto t = parse_tier(pj.at("tier").get<std::string>());
    if (!t) throw Error("placement artifact has an unknown tier");
    p.tier = *t;
    p.composite = pj.at("composite").get<double>();
    p.is_argmax = pj.at("is_argmax").get<bool>();
    r.placements.push_back(p);
  }
  r.references = cross_references(r.placements);
  const auto& mj = j.at("metrics");
  r.metrics = placement_metrics(r.placements, mj.at("cross_cutting_factors").get<std::size_t>());
  return r;
}

}  // namespace taxoforge
