#include "taxoforge/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "taxoforge/error.hpp"
#include "taxoforge/similarity.hpp"

namespace taxoforge {

double entropy(const OccurrenceVector& v) {
  const int total = v.total();
  if (total <= 0) throw Error("entropy of a zero occurrence vector");
  double h = 0.0;
  for (int c : v.counts) {
    if (c <= 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  // A single active type must give exactly zero, not -0.
  return h <= 0.0 ? 0.0 : h;
}

DistributionStats distribution_stats(const OccurrenceVector& v) {
  return DistributionStats{v.active_count(), entropy(v), v.total()};
}

FactorClass classify(int active) {
  if (active < 1 || active > static_cast<int>(kSpaceTypeCount))
    throw Error("active type count out of range: " + std::to_string(active));
  if (active >= 5) return FactorClass::Universal;
  if (active >= 3) return FactorClass::MultiSpace;
  return FactorClass::SpaceSpecific;
}

std::string_view class_name(FactorClass c) {
  switch (c) {
    case FactorClass::Universal: return "Universal";
    case FactorClass::MultiSpace: return "Multi-space";
    case FactorClass::SpaceSpecific: return "Space-specific";
  }
  return "";
}

std::optional<FactorClass> parse_class(std::string_view s) {
  for (auto c : {FactorClass::Universal, FactorClass::MultiSpace, FactorClass::SpaceSpecific}) {
    if (class_name(c) == s) return c;
  }
  return std::nullopt;
}

CrossCuttingStatus status_for(std::size_t n) {
  if (n >= 4) return CrossCuttingStatus::VeryHigh;
  if (n == 3) return CrossCuttingStatus::High;
  if (n == 2) return CrossCuttingStatus::Moderate;
  return CrossCuttingStatus::Limited;
}

std::string_view status_name(CrossCuttingStatus s) {
  switch (s) {
    case CrossCuttingStatus::Limited: return "Limited";
    case CrossCuttingStatus::Moderate: return "Moderate";
    case CrossCuttingStatus::High: return "High";
    case CrossCuttingStatus::VeryHigh: return "Very High";
  }
  return "";
}

double domain_relevance(std::string_view name, const Domain& d, const SemanticLexicon& lexicon) {
  return lexicon_score(name, d.all_terms(), lexicon);
}

std::optional<std::size_t> primary_domain(std::string_view name, const DomainKnowledgeBase& kb,
                                          const SemanticLexicon& lexicon) {
  std::optional<std::size_t> best;
  double best_score = 0.0;
  for (std::size_t i = 0; i < kb.domains.size(); ++i) {
    double s = domain_relevance(name, kb.domains[i], lexicon);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

CrossCuttingAssessment assess_cross_cutting(std::string_view name, const DomainKnowledgeBase& kb,
                                            const SemanticLexicon& lexicon, double threshold) {
  CrossCuttingAssessment a;
  a.relevance.reserve(kb.domains.size());
  for (std::size_t i = 0; i < kb.domains.size(); ++i) {
    double r = domain_relevance(name, kb.domains[i], lexicon);
    a.relevance.push_back(r);
    if (r >= threshold) a.relevant_domains.push_back(i);
  }
  a.score = static_cast<int>(a.relevant_domains.size());
  a.status = status_for(a.relevant_domains.size());
  a.flagged = a.score >= kCrossCuttingMinDomains;
  return a;
}

std::vector<FactorClassification> classify_all(const IntegratedFactorSet& factors,
                                               const DomainKnowledgeBase& kb,
                                               const SemanticLexicon& lexicon, double threshold,
                                               unsigned jobs) {
  std::vector<FactorClassification> out(factors.size());
  auto work = [&](std::size_t i) {
    const auto& f = factors[i];
    auto& c = out[i];
    c.stats = distribution_stats(f.occurrence);
    c.cls = classify(c.stats);
    c.cross_cutting = assess_cross_cutting(f.canonical_name, kb, lexicon, threshold);
    // Same argmax as primary_domain(), reusing the relevance just computed.
    double best = 0.0;
    for (std::size_t d = 0; d < c.cross_cutting.relevance.size(); ++d) {
      if (c.cross_cutting.relevance[d] > best) {
        best = c.cross_cutting.relevance[d];
        c.primary_domain = d;
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, factors.size()))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < factors.size(); ++i) work(i);
    return out;
  }
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < jobs; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < factors.size(); i += jobs) work(i);
    });
  }
  workers.clear();
  return out;
}

ClassificationCensus classification_census(const std::vector<FactorClassification>& all) {
  ClassificationCensus c;
  for (const auto& f : all) {
    switch (f.cls) {
      case FactorClass::Universal: ++c.universal; break;
      case FactorClass::MultiSpace: ++c.multi_space; break;
      case FactorClass::SpaceSpecific: ++c.space_specific; break;
    }
    if (f.cross_cutting.flagged) ++c.cross_cutting;
  }
  return c;
}

namespace {
std::string domain_label(const std::optional<std::size_t>& d, const DomainKnowledgeBase& kb) {
  return d ? kb.domains[*d].id : std::string("UNASSIGNED");
}
}  // namespace

std::string classification_report_csv(const IntegratedFactorSet& factors,
                                      const std::vector<FactorClassification>& all,
                                      const DomainKnowledgeBase& kb) {
  if (factors.size() != all.size()) throw Error("classification count does not match factor count");
  std::ostringstream out;
  out << "canonical_name,tracking_notation,active_type_count,entropy,class,primary_domain,"
         "cross_cutting_score,status\n";
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& c = all[i];
    out << csv_escape(factors[i].canonical_name) << ',' << csv_escape(tracking_notation(factors[i].occurrence))
        << ',' << c.stats.active_type_count << ',' << format_fixed(c.stats.entropy_nats, 3) << ','
        << class_name(c.cls) << ',' << csv_escape(domain_label(c.primary_domain, kb)) << ','
        << c.cross_cutting.score << ',' << status_name(c.cross_cutting.status) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json to_json(const std::vector<FactorClassification>& all,
                               const DomainKnowledgeBase& kb) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : all) {
    nlohmann::ordered_json j;
    j["active_type_count"] = c.stats.active_type_count;
    j["entropy_nats"] = c.stats.entropy_nats;
    j["total_mentions"] = c.stats.total_mentions;
    j["class"] = class_name(c.cls);
    j["primary_domain"] = c.primary_domain ? nlohmann::ordered_json(kb.domains[*c.primary_domain].id)
                                           : nlohmann::ordered_json(nullptr);
    std::vector<std::string> rel;
    for (auto d : c.cross_cutting.relevant_domains) rel.push_back(kb.domains[d].id);
    j["relevant_domains"] = rel;
    j["relevance"] = c.cross_cutting.relevance;
    j["cross_cutting_score"] = c.cross_cutting.score;
    j["status"] = status_name(c.cross_cutting.status);
    j["cross_cutting"] = c.cross_cutting.flagged;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<FactorClassification> classifications_from_json(const nlohmann::json& arr,
                                                            const DomainKnowledgeBase& kb) {
  auto domain = [&](const std::string& id) {
    auto d = kb.domain_index(id);
    if (!d) throw Error("classification artifact names unknown domain '" + id + "'");
    return *d;
  };
  std::vector<FactorClassification> out;
  for (const auto& j : arr) {
    FactorClassification c;
    c.stats.active_type_count = j.at("active_type_count").get<int>();
    c.stats.entropy_nats = j.at("entropy_nats").get<double>();
    c.stats.total_mentions = j.at("total_mentions").get<int>();
    auto cls = parse_class(j.at("class").get<std::string>());
    if (!cls) throw Error("classification artifact has an unknown class");
    c.cls = *cls;
    if (!j.at("primary_domain").is_null()) c.primary_domain = domain(j.at("primary_domain").get<std::string>());
    for (const auto& d : j.at("relevant_domains")) c.cross_cutting.relevant_domains.push_back(domain(d.get<std::string>()));
    c.cross_cutting.relevance = j.at("relevance").get<std::vector<double>>();
    c.cross_cutting.score = j.at("cross_cutting_score").get<int>();
    c.cross_cutting.status = status_for(c.cross_cutting.relevant_domains.size());
    c.cross_cutting.flagged = j.at("cross_cutting").get<bool>();
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace taxoforge
