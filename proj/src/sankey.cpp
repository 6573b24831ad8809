#include "taxoforge/sankey.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "taxoforge/corpus.hpp"
#include "taxoforge/error.hpp"

namespace taxoforge {

namespace {

std::string fold(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Exact case-insensitive match first, then a unique prefix.
std::string resolve_category(const std::vector<std::string>& ids, std::string_view wanted) {
  const std::string key = fold(wanted);
  for (const auto& id : ids) {
    if (fold(id) == key) return id;
  }
  const std::string* hit = nullptr;
  for (const auto& id : ids) {
    if (fold(id).rfind(key, 0) == 0) {
      if (hit) throw Error("ambiguous sankey category '" + std::string(wanted) + "'");
      hit = &id;
    }
  }
  if (!hit || key.empty()) throw Error("unknown sankey category '" + std::string(wanted) + "'");
  return *hit;
}

bool names_anything(const Framework& fw, const std::string& key) {
  for (const auto& cat : fw.categories) {
    for (const auto& sub : cat.subcategories) {
      if (fold(sub.id) == key) return true;
      for (const auto& e : sub.entries) {
        if (fold(e.canonical_name) == key) return true;
      }
    }
  }
  return false;
}

}  // namespace

std::string_view layer_name(SankeyLayer l) {
  switch (l) {
    case SankeyLayer::Subfactor: return "Subfactor";
    case SankeyLayer::Indicator: return "Indicator";
    case SankeyLayer::SpaceType: return "SpaceType";
  }
  return "";
}

SankeyExport export_sankey(const Framework& fw, std::string_view category,
                           const std::vector<std::string>& subfactors,
                           const std::vector<std::string>& declared) {
  std::vector<std::string> ids = declared;
  if (ids.empty()) {
    for (const auto& c : fw.categories) ids.push_back(c.id);
  }
  const std::string id = resolve_category(ids, category);
  const FrameworkCategory empty{id, 0, {}};
  auto found = std::find_if(fw.categories.begin(), fw.categories.end(),
                            [&](const FrameworkCategory& c) { return c.id == id; });
  const auto& cat = found == fw.categories.end() ? empty : *found;
  std::vector<std::string> filter;
  for (const auto& f : subfactors) {
    auto key = fold(f);
    if (!names_anything(fw, key)) throw Error("unknown sankey filter '" + f + "'");
    filter.push_back(std::move(key));
  }
  auto selected = [&](const FrameworkSubcategory& sub, const FrameworkEntry& e) {
    if (filter.empty()) return true;
    auto name = fold(e.canonical_name), sid = fold(sub.id);
    return std::any_of(filter.begin(), filter.end(), [&](const auto& k) { return k == name || k == sid; });
  };

  SankeyExport s;
  s.category = cat.id;
  std::array<int, kSpaceTypeCount> type_in{};
  for (const auto& sub : cat.subcategories) {
    std::array<int, kSpaceTypeCount> sub_out{};
    const std::string iid = "i:" + sub.id;
    bool any = false;
    for (const auto& e : sub.entries) {
      if (!e.is_primary() || !selected(sub, e)) continue;
      const auto v = parse_tracking_notation(e.tracking_notation);
      const std::string fid = "f:" + e.canonical_name;
      s.nodes.push_back({fid, e.canonical_name, SankeyLayer::Subfactor});
      s.links.push_back({fid, iid, v.total()});
      for (std::size_t t = 0; t < kSpaceTypeCount; ++t) sub_out[t] += v.counts[t];
      any = true;
    }
    if (!any) continue;
    s.nodes.push_back({iid, sub.id, SankeyLayer::Indicator});
    for (SpaceType t : kSpaceTypes) {
      const int w = sub_out[index_of(t)];
      if (w <= 0) continue;
      s.links.push_back({iid, "t:" + std::string(1, code_of(t)), w});
      type_in[index_of(t)] += w;
    }
  }
  for (SpaceType t : kSpaceTypes) {
    if (type_in[index_of(t)] > 0) {
      s.nodes.push_back({"t:" + std::string(1, code_of(t)), std::string(label_of(t)), SankeyLayer::SpaceType});
    }
  }
  // Stable layer order: subfactors, indicators, space types.
  std::stable_sort(s.nodes.begin(), s.nodes.end(),
                   [](const auto& a, const auto& b) { return a.layer < b.layer; });
  return s;
}

std::string sankey_text(const SankeyExport& s) {
  std::ostringstream out;
  out << "# category: " << s.category << "; indicator layer = subcategories\n";
  out << "[nodes]\nid,label,layer\n";
  for (const auto& n : s.nodes) {
    out << csv_escape(n.id) << ',' << csv_escape(n.label) << ',' << layer_name(n.layer) << '\n';
  }
  out << "[links]\nsource,target,weight\n";
  for (const auto& l : s.links) out << csv_escape(l.source) << ',' << csv_escape(l.target) << ',' << l.weight << '\n';
  return out.str();
}

}  // namespace taxoforge
