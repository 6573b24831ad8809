#include "taxoforge/corpus.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

#include "taxoforge/checksum.hpp"
#include "taxoforge/error.hpp"

namespace taxoforge {

using nlohmann::json;

void Corpus::add(FactorRecord record) {
  ++counts_[index_of(record.space_type)];
  records_.push_back(std::move(record));
}

void Corpus::append(const Corpus& other) {
  for (const auto& r : other.records()) add(r);
}

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

FactorRecord make_record(std::string_view raw_name, std::string_view study,
                         std::string_view code, std::size_t row,
                         std::optional<SpaceType> expected) {
  auto where = "row " + std::to_string(row) + ": ";
  auto name = trim(raw_name);
  if (name.empty()) throw Error(where + "empty raw_name");
  auto sid = trim(study);
  if (sid.empty()) throw Error(where + "empty study_id");
  auto type = parse_space_type(trim(code));
  if (!type) throw Error(where + "unknown space type '" + std::string(trim(code)) + "'");
  if (expected && *type != *expected) {
    throw Error(where + "space type '" + std::string(1, code_of(*type)) +
                "' in a dataset declared as '" + std::string(1, code_of(*expected)) + "'");
  }
  return FactorRecord{std::string(name), std::string(sid), *type};
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t i = 0;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    bool blank = row.size() == 1 && row[0].empty();
    if (!blank) rows.push_back(std::move(row));
    row.clear();
  };
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      end_row();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw Error("unterminated quoted field");
  if (!field.empty() || !row.empty()) end_row();
  return rows;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Corpus parse_corpus(std::string_view text, CorpusFormat format,
                    std::optional<SpaceType> expected) {
  Corpus corpus;
  if (format == CorpusFormat::Structured) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(std::string("structured corpus parse failure: ") + e.what());
    }
    const json& items = doc.is_object() ? doc.at("records") : doc;
    if (!items.is_array()) throw Error("structured corpus must be an array of records");
    std::size_t row = 0;
    for (const auto& item : items) {
      ++row;
      if (!item.is_object()) throw Error("row " + std::to_string(row) + ": not an object");
      auto get = [&](const char* key) -> std::string {
        auto it = item.find(key);
        if (it == item.end() || !it->is_string()) {
          throw Error("row " + std::to_string(row) + ": missing string field '" + key + "'");
        }
        return it->get<std::string>();
      };
      corpus.add(make_record(get("raw_name"), get("study_id"), get("space_type"), row, expected));
    }
    return corpus;
  }

  auto rows = parse_csv(text);
  if (rows.empty()) throw Error("missing header row");
  const std::vector<std::string> header = {"raw_name", "study_id", "space_type"};
  std::vector<std::string> got;
  for (const auto& h : rows[0]) got.emplace_back(trim(h));
  if (got != header) throw Error("header must be 'raw_name,study_id,space_type'");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 3) {
      throw Error("row " + std::to_string(r) + ": expected 3 fields, found " +
                  std::to_string(rows[r].size()));
    }
    corpus.add(make_record(rows[r][0], rows[r][1], rows[r][2], r, expected));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   std::optional<SpaceType> expected) {
  if (!std::filesystem::exists(path)) throw IoError("dataset not found: " + path.string());
  try {
    return parse_corpus(read_file(path), format, expected);
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out = "raw_name,study_id,space_type\n";
  for (const auto& r : corpus.records()) {
    out += csv_escape(r.raw_name);
    out += ',';
    out += csv_escape(r.study_id);
    out += ',';
    out += code_of(r.space_type);
    out += '\n';
  }
  return out;
}

std::string surface_form(std::string_view raw, const NormalizationRuleSet& rules) {
  std::string s(raw);
  if (rules.case_folding) {
    for (char& c : s) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
  }
  const char punct_replacement = rules.whitespace_collapse ? ' ' : '\0';
  std::string stripped;
  stripped.reserve(s.size());
  for (char c : s) {
    if (rules.punctuation_strip.find(c) != std::string::npos) {
      if (punct_replacement) stripped += punct_replacement;
    } else {
      stripped += c;
    }
  }

  // Drop hyphens hanging off token edges; keep internal ones.
  std::vector<bool> keep(stripped.size(), true);
  std::size_t i = 0;
  while (i < stripped.size()) {
    while (i < stripped.size() && is_space(stripped[i])) ++i;
    std::size_t b = i;
    while (i < stripped.size() && !is_space(stripped[i])) ++i;
    if (!rules.strip_boundary_hyphens || b == i) continue;
    std::size_t lo = b, hi = i;
    while (lo < hi && stripped[lo] == '-') keep[lo++] = false;
    while (hi > lo && stripped[hi - 1] == '-') keep[--hi] = false;
  }
  std::string kept;
  kept.reserve(stripped.size());
  for (std::size_t k = 0; k < stripped.size(); ++k) {
    if (keep[k]) kept += stripped[k];
  }

  if (!rules.whitespace_collapse) return std::string(trim(kept));
  std::string out;
  std::istringstream words(kept);
  for (std::string w; words >> w;) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string normalize(std::string_view raw, const NormalizationRuleSet& rules) {
  std::string s = surface_form(raw, rules);
  if (s.empty()) throw Error("'" + std::string(raw) + "' is empty after normalization");
  if (rules.preserve_distinct.count(s)) return s;
  if (auto it = rules.synonym_map.find(s); it != rules.synonym_map.end()) return it->second;
  return s;
}

NormalizationRuleSet validate_rules(NormalizationRuleSet rules) {
  auto canon = [&](const std::string& text, const char* what) {
    auto s = surface_form(text, rules);
    if (s.empty()) throw Error(std::string(what) + " entry '" + text + "' is empty after normalization");
    return s;
  };
  std::map<std::string, std::string> synonyms;
  for (const auto& [from, to] : rules.synonym_map) {
    auto k = canon(from, "synonym");
    auto v = canon(to, "synonym");
    if (k == v) continue;
    auto [it, inserted] = synonyms.emplace(k, v);
    if (!inserted && it->second != v) {
      throw Error("synonym '" + k + "' maps to both '" + it->second + "' and '" + v + "'");
    }
  }
  std::set<std::string> preserve;
  for (const auto& p : rules.preserve_distinct) preserve.insert(canon(p, "preserve_distinct"));

  for (const auto& [k, v] : synonyms) {
    if (synonyms.count(v)) {
      throw Error("synonym map not idempotent: '" + k + "' -> '" + v + "' -> '" +
                  synonyms.at(v) + "'");
    }
  }
  for (const auto& p : preserve) {
    if (synonyms.count(p)) {
      throw Error("preserve_distinct entry '" + p + "' is also a synonym key");
    }
  }
  rules.synonym_map = std::move(synonyms);
  rules.preserve_distinct = std::move(preserve);
  return rules;
}

NormalizationRuleSet parse_rules(std::string_view text) {
  NormalizationRuleSet rules;
  if (trim(text).empty()) return rules;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("rule file parse failure: ") + e.what());
  }
  if (!doc.is_object()) throw Error("rule file must be an object");
  try {
    if (auto it = doc.find("options"); it != doc.end()) {
      const auto& o = *it;
      rules.case_folding = o.value("case_folding", rules.case_folding);
      rules.whitespace_collapse = o.value("whitespace_collapse", rules.whitespace_collapse);
      rules.punctuation_strip = o.value("punctuation_strip", rules.punctuation_strip);
      rules.strip_boundary_hyphens = o.value("strip_boundary_hyphens", rules.strip_boundary_hyphens);
    }
    if (auto it = doc.find("synonyms"); it != doc.end()) {
      for (const auto& [k, v] : it->items()) rules.synonym_map[k] = v.get<std::string>();
    }
    if (auto it = doc.find("preserve_distinct"); it != doc.end()) {
      for (const auto& p : *it) rules.preserve_distinct.insert(p.get<std::string>());
    }
  } catch (const json::exception& e) {
    throw Error(std::string("rule file schema error: ") + e.what());
  }
  return validate_rules(std::move(rules));
}

NormalizationRuleSet load_rules(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("rules path not found: " + path.string());
  return parse_rules(read_file(path));
}

}  // namespace taxoforge
