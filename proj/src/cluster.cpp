#include "taxoforge/cluster.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "taxoforge/error.hpp"

namespace taxoforge {

ScopeFilter domain_priorities(FactorClass c, const ScopePriors& priors) {
  std::vector<int> preferred;
  switch (c) {
    case FactorClass::Universal: preferred = {0}; break;
    case FactorClass::MultiSpace: preferred = {0, 1}; break;
    case FactorClass::SpaceSpecific: preferred = {2}; break;
  }
  ScopeFilter f;
  for (int s = 0; s < 3; ++s) {
    int dist = 3;
    for (int p : preferred) dist = std::min(dist, std::abs(s - p));
    f.weight[static_cast<std::size_t>(s)] =
        dist == 0 ? priors.preferred : dist == 1 ? priors.adjacent : priors.non_preferred;
  }
  return f;
}

std::vector<std::size_t> related_factors(std::size_t factor, const SimilarityMatrix& m, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < m.size(); ++g) {
    if (g != factor && m.score(factor, g) > threshold) out.push_back(g);
  }
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    return m.score(factor, a) > m.score(factor, b);
  });
  return out;
}

std::vector<AssignmentScores> score_domains(const IntegratedFactor& factor, FactorClass cls,
                                            const std::vector<std::optional<std::size_t>>& related_primary,
                                            const DomainKnowledgeBase& kb, const SemanticLexicon& lexicon,
                                            const AssignmentWeights& w) {
  const ScopeFilter prior = domain_priorities(cls, kb.priors);
  const SpaceProfile occurrence = to_profile(factor.occurrence);
  std::vector<AssignmentScores> out;
  out.reserve(kb.domains.size());
  for (std::size_t d = 0; d < kb.domains.size(); ++d) {
    const Domain& dom = kb.domains[d];
    AssignmentScores s;
    s.semantic = prior(dom.scope) * lexicon_score(factor.canonical_name, dom.all_terms(), lexicon);
    if (!related_primary.empty()) {
      auto hits = std::count(related_primary.begin(), related_primary.end(), std::optional<std::size_t>(d));
      s.similarity_evidence = static_cast<double>(hits) / static_cast<double>(related_primary.size());
    }
    s.distribution = cosine(occurrence, dom.space_profile);
    s.final = w.semantic * s.semantic + w.similarity_evidence * s.similarity_evidence +
              w.distribution * s.distribution;
    out.push_back(s);
  }
  return out;
}

std::size_t best_domain(const std::vector<AssignmentScores>& scores) {
  if (scores.empty()) throw Error("no domain scores to choose from");
  std::size_t best = 0;
  for (std::size_t d = 1; d < scores.size(); ++d) {
    if (scores[d].final > scores[best].final) best = d;
  }
  return best;
}

std::vector<std::vector<std::size_t>> subcluster(const std::vector<std::size_t>& members,
                                                 const SimilarityMatrix& m, double threshold) {
  std::vector<std::size_t> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> parent(sorted.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < sorted.size(); ++a) {
    for (std::size_t b = a + 1; b < sorted.size(); ++b) {
      if (m.score(sorted[a], sorted[b]) >= threshold) {
        auto ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t a = 0; a < sorted.size(); ++a) groups[find(a)].push_back(sorted[a]);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, g] : groups) out.push_back(std::move(g));
  return out;
}

std::optional<std::size_t> best_subcategory(const std::vector<std::string>& names, const Domain& d,
                                            const SemanticLexicon& lexicon) {
  std::optional<std::size_t> best;
  double best_score = 0.0;
  for (std::size_t s = 0; s < d.subcategories.size(); ++s) {
    double sum = 0.0;
    for (const auto& n : names) sum += lexicon_score(n, d.subcategories[s].lexicon, lexicon);
    double mean = names.empty() ? 0.0 : sum / static_cast<double>(names.size());
    if (mean > best_score) {
      best_score = mean;
      best = s;
    }
  }
  return best;
}

std::vector<CategoryAssignment> cluster_factors(const IntegratedFactorSet& factors,
                                                const SimilarityMatrix& m,
                                                const std::vector<FactorClassification>& classes,
                                                const DomainKnowledgeBase& kb,
                                                const SemanticLexicon& lexicon,
                                                const ClusterConfig& config, unsigned jobs) {
  const std::size_t n = factors.size();
  if (m.size() != n || classes.size() != n) throw Error("cluster inputs cover different factor sets");
  std::vector<CategoryAssignment> out(n);

  auto score = [&](std::size_t i) {
    std::vector<std::optional<std::size_t>> related_primary;
    for (auto g : related_factors(i, m, config.related_threshold)) {
      related_primary.push_back(classes[g].primary_domain);
    }
    auto& a = out[i];
    a.factor = i;
    a.scores = score_domains(factors[i], classes[i].cls, related_primary, kb, lexicon, config.weights);
    a.category = best_domain(a.scores);
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, n))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) score(i);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < jobs; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += jobs) score(i);
      });
    }
  }

  for (std::size_t d = 0; d < kb.domains.size(); ++d) {
    const Domain& dom = kb.domains[d];
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (out[i].category == d) members.push_back(i);
    }
    for (const auto& cluster : subcluster(members, m, config.subcluster_threshold)) {
      std::vector<std::string> names;
      for (auto i : cluster) names.push_back(factors[i].canonical_name);
      auto sub = best_subcategory(names, dom, lexicon);
      for (auto i : cluster) {
        // Unmatched clusters fall back to each member's own best subcategory.
        auto own = sub ? sub : best_subcategory({factors[i].canonical_name}, dom, lexicon);
        out[i].subcategory = own.value_or(0);
      }
    }
  }
  return out;
}

HierarchyReport validate_hierarchy(const std::vector<CategoryAssignment>& assignments,
                                   std::size_t factor_count, const DomainKnowledgeBase& kb) {
  HierarchyReport r;
  std::vector<int> seen(factor_count, 0);
  std::set<std::size_t> categories;
  std::set<std::pair<std::size_t, std::size_t>> subcategories;
  for (const auto& a : assignments) {
    if (a.factor >= factor_count) {
      r.violations.push_back("assignment for unknown factor #" + std::to_string(a.factor));
      continue;
    }
    ++seen[a.factor];
    if (a.category >= kb.domains.size()) {
      r.violations.push_back("factor #" + std::to_string(a.factor) + " assigned to an unknown category");
      continue;
    }
    if (a.subcategory >= kb.domains[a.category].subcategories.size()) {
      r.violations.push_back("factor #" + std::to_string(a.factor) + " has a subcategory outside " +
                             kb.domains[a.category].id);
      continue;
    }
    categories.insert(a.category);
    subcategories.emplace(a.category, a.subcategory);
  }
  for (std::size_t i = 0; i < factor_count; ++i) {
    if (seen[i] != 1) {
      r.violations.push_back("factor #" + std::to_string(i) + " has " + std::to_string(seen[i]) +
                             " category assignments");
    }
  }
  r.category_count = categories.size();
  r.subcategory_count = subcategories.size();
  return r;
}

std::string assignments_csv(const IntegratedFactorSet& factors,
                            const std::vector<CategoryAssignment>& assignments,
                            const DomainKnowledgeBase& kb) {
  std::ostringstream out;
  out << "factor,category,subcategory";
  for (const auto& d : kb.domains) out << ',' << csv_escape(d.id);
  out << '\n';
  for (const auto& a : assignments) {
    const auto& dom = kb.domains[a.category];
    out << csv_escape(factors[a.factor].canonical_name) << ',' << csv_escape(dom.id) << ','
        << csv_escape(dom.subcategories[a.subcategory].id);
    for (const auto& s : a.scores) out << ',' << format_fixed(s.final, 6);
    out << '\n';
  }
  return out.str();
}

nlohmann::ordered_json to_json(const std::vector<CategoryAssignment>& assignments,
                               const DomainKnowledgeBase& kb) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& a : assignments) {
    nlohmann::ordered_json j;
    j["factor"] = a.factor;
    j["category"] = kb.domains[a.category].id;
    j["subcategory"] = kb.domains[a.category].subcategories[a.subcategory].id;
    auto scores = nlohmann::ordered_json::array();
    for (const auto& s : a.scores) {
      scores.push_back({s.semantic, s.similarity_evidence, s.distribution, s.final});
    }
    j["scores"] = std::move(scores);
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<CategoryAssignment> assignments_from_json(const nlohmann::json& arr,
                                                      const DomainKnowledgeBase& kb) {
  std::vector<CategoryAssignment> out;
  for (const auto& j : arr) {
    CategoryAssignment a;
    a.factor = j.at("factor").get<std::size_t>();
    auto cat = kb.domain_index(j.at("category").get<std::string>());
    if (!cat) throw Error("assignment artifact names an unknown category");
    a.category = *cat;
    auto sub = kb.domains[*cat].subcategory_index(j.at("subcategory").get<std::string>());
    if (!sub) throw Error("assignment artifact names an unknown subcategory");
    a.subcategory = *sub;
    for (const auto& s : j.at("scores")) {
      a.scores.push_back(AssignmentScores{s.at(0).get<double>(), s.at(1).get<double>(),
                                          s.at(2).get<double>(), s.at(3).get<double>()});
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace taxoforge
