#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace taxoforge {

// Named groups of terms that belong to one semantic field ("protection",
// "thermal", ...). Two canonical names in a common field are treated as
// linguistically related even without shared surface form.
class SemanticLexicon {
 public:
  SemanticLexicon() = default;
  void add_field(const std::string& name, const std::vector<std::string>& terms);

  bool share_field(std::string_view a, std::string_view b) const;
  const std::vector<std::pair<std::string, std::set<std::string>>>& fields() const {
    return fields_;
  }
  // Stable digest over field names and terms.
  std::string checksum() const;

 private:
  std::vector<std::pair<std::string, std::set<std::string>>> fields_;
  std::map<std::string, std::set<std::size_t>, std::less<>> membership_;
};

SemanticLexicon parse_lexicon(std::string_view text);
SemanticLexicon load_lexicon(const std::filesystem::path& path);

}  // namespace taxoforge
