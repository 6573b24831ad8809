#include "taxoforge/lexicon.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "taxoforge/checksum.hpp"
#include "taxoforge/corpus.hpp"
#include "taxoforge/error.hpp"

namespace taxoforge {

void SemanticLexicon::add_field(const std::string& name, const std::vector<std::string>& terms) {
  const NormalizationRuleSet surface;
  std::set<std::string> canon;
  for (const auto& t : terms) {
    auto s = surface_form(t, surface);
    if (s.empty()) throw Error("lexicon field '" + name + "' has an empty term");
    canon.insert(s);
  }
  const std::size_t id = fields_.size();
  for (const auto& t : canon) membership_[t].insert(id);
  fields_.emplace_back(name, std::move(canon));
}

bool SemanticLexicon::share_field(std::string_view a, std::string_view b) const {
  auto ia = membership_.find(a);
  auto ib = membership_.find(b);
  if (ia == membership_.end() || ib == membership_.end()) return false;
  const auto& x = ia->second;
  const auto& y = ib->second;
  return std::any_of(x.begin(), x.end(), [&](std::size_t f) { return y.count(f) > 0; });
}

std::string SemanticLexicon::checksum() const {
  Fnv1a h;
  for (const auto& [name, terms] : fields_) {
    h.update(name);
    h.update("\x1f");
    for (const auto& t : terms) {
      h.update(t);
      h.update("\x1e");
    }
    h.update("\x1d");
  }
  return h.hex();
}

SemanticLexicon parse_lexicon(std::string_view text) {
  SemanticLexicon lex;
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("lexicon parse failure: ") + e.what());
  }
  try {
    for (const auto& [name, terms] : doc.at("fields").items()) {
      lex.add_field(name, terms.get<std::vector<std::string>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("lexicon schema error: ") + e.what());
  }
  return lex;
}

SemanticLexicon load_lexicon(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("lexicon path not found: " + path.string());
  return parse_lexicon(read_file(path));
}

}  // namespace taxoforge
