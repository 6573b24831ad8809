#include "taxoforge/knowledge_base.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "taxoforge/checksum.hpp"
#include "taxoforge/corpus.hpp"
#include "taxoforge/error.hpp"
#include "taxoforge/similarity.hpp"

namespace taxoforge {

using nlohmann::json;

std::string_view scope_name(Scope s) {
  switch (s) {
    case Scope::Broad: return "Broad";
    case Scope::Moderate: return "Moderate";
    case Scope::Specialized: return "Specialized";
  }
  return "";
}

std::optional<Scope> parse_scope(std::string_view s) {
  if (s == "Broad") return Scope::Broad;
  if (s == "Moderate") return Scope::Moderate;
  if (s == "Specialized") return Scope::Specialized;
  return std::nullopt;
}

std::vector<std::string> Domain::all_terms() const {
  std::vector<std::string> out = lexicon;
  for (const auto& sub : subcategories) out.insert(out.end(), sub.lexicon.begin(), sub.lexicon.end());
  return out;
}

std::optional<std::size_t> Domain::subcategory_index(std::string_view sid) const {
  for (std::size_t i = 0; i < subcategories.size(); ++i) {
    if (subcategories[i].id == sid) return i;
  }
  return std::nullopt;
}

Literature Domain::literature(std::string_view factor) const {
  std::string f(factor);
  if (literature_strong.count(f)) return Literature::Strong;
  if (literature_partial.count(f)) return Literature::Partial;
  return Literature::None;
}

std::optional<std::size_t> DomainKnowledgeBase::domain_index(std::string_view id) const {
  for (std::size_t i = 0; i < domains.size(); ++i) {
    if (domains[i].id == id) return i;
  }
  return std::nullopt;
}

void DomainKnowledgeBase::validate() const {
  if (domains.empty()) throw Error("knowledge base has no domains");
  std::set<std::string> ids;
  for (const auto& d : domains) {
    if (d.id.empty()) throw Error("knowledge base domain with empty identifier");
    if (!ids.insert(d.id).second) throw Error("duplicate domain '" + d.id + "'");
    if (d.subcategories.empty()) throw Error("domain '" + d.id + "' has no subcategories");
    if (d.all_terms().empty()) throw Error("domain '" + d.id + "' has no lexicon terms");
    std::set<std::string> subs;
    for (const auto& s : d.subcategories) {
      if (!subs.insert(s.id).second) {
        throw Error("duplicate subcategory '" + s.id + "' in domain '" + d.id + "'");
      }
    }
    bool nonzero = false;
    for (double w : d.space_profile) {
      if (w < 0) throw Error("domain '" + d.id + "' has a negative space_profile weight");
      nonzero = nonzero || w > 0;
    }
    if (!nonzero) throw Error("domain '" + d.id + "' has an all-zero space_profile");
  }
  for (const auto& [factor, domain] : placement_overrides) {
    if (!domain_index(domain)) {
      throw Error("placement override for '" + factor + "' names unknown domain '" + domain + "'");
    }
  }
  for (double p : {priors.preferred, priors.adjacent, priors.non_preferred}) {
    if (p < 0.0 || p > 1.0) throw Error("scope priors must lie in [0,1]");
  }
}

namespace {

std::vector<std::string> canonical_terms(const json& arr) {
  const NormalizationRuleSet surface;
  std::vector<std::string> out;
  for (const auto& t : arr) {
    auto s = surface_form(t.get<std::string>(), surface);
    if (s.empty()) throw Error("empty lexicon term");
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

DomainKnowledgeBase parse_knowledge_base(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("knowledge base parse failure: ") + e.what());
  }
  DomainKnowledgeBase kb;
  try {
    kb.schema_version = doc.at("schema_version").get<int>();
    if (kb.schema_version != 1) {
      throw Error("unsupported knowledge base schema_version " + std::to_string(kb.schema_version));
    }
    if (auto it = doc.find("scope_priors"); it != doc.end()) {
      kb.priors.preferred = it->value("preferred", kb.priors.preferred);
      kb.priors.adjacent = it->value("adjacent", kb.priors.adjacent);
      kb.priors.non_preferred = it->value("non_preferred", kb.priors.non_preferred);
    }
    for (const auto& dj : doc.at("domains")) {
      Domain d;
      d.id = dj.at("id").get<std::string>();
      auto scope = parse_scope(dj.at("scope").get<std::string>());
      if (!scope) throw Error("domain '" + d.id + "' has an unknown scope");
      d.scope = *scope;
      d.lexicon = canonical_terms(dj.value("lexicon", json::array()));
      for (const auto& sj : dj.at("subcategories")) {
        d.subcategories.push_back(
            Subcategory{sj.at("id").get<std::string>(), canonical_terms(sj.value("lexicon", json::array()))});
      }
      auto prof = dj.find("space_profile");
      if (prof == dj.end()) throw Error("domain '" + d.id + "' is missing space_profile");
      for (SpaceType t : kSpaceTypes) {
        d.space_profile[index_of(t)] = prof->at(std::string(1, code_of(t))).get<double>();
      }
      for (const auto& c : dj.value("compatible", json::array())) {
        auto t = parse_space_type(c.get<std::string>());
        if (!t) throw Error("domain '" + d.id + "' lists an unknown compatible space type");
        d.compatible[index_of(*t)] = true;
      }
      if (auto lit = dj.find("literature"); lit != dj.end()) {
        for (auto& s : canonical_terms(lit->value("strong", json::array()))) d.literature_strong.insert(s);
        for (auto& s : canonical_terms(lit->value("partial", json::array()))) d.literature_partial.insert(s);
      }
      kb.domains.push_back(std::move(d));
    }
    if (auto it = doc.find("placement_overrides"); it != doc.end()) {
      const NormalizationRuleSet surface;
      for (const auto& [k, v] : it->items()) {
        kb.placement_overrides[surface_form(k, surface)] = v.get<std::string>();
      }
    }
  } catch (const json::exception& e) {
    throw Error(std::string("knowledge base schema error: ") + e.what());
  }
  kb.validate();
  return kb;
}

DomainKnowledgeBase load_knowledge_base(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("kb path not found: " + path.string());
  return parse_knowledge_base(read_file(path));
}

double lexicon_score(std::string_view name, const std::vector<std::string>& terms,
                     const SemanticLexicon& lexicon) {
  double best = 0.0;
  for (const auto& t : terms) best = std::max(best, linguistic_similarity(name, t, lexicon));
  return best;
}

}  // namespace taxoforge
