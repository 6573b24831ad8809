#pragma once

#include <string>
#include <vector>

#include "taxoforge/framework.hpp"

namespace taxoforge {

enum class SankeyLayer { Subfactor, Indicator, SpaceType };
std::string_view layer_name(SankeyLayer l);

struct SankeyNode {
  std::string id;
  std::string label;
  SankeyLayer layer = SankeyLayer::Subfactor;
};

struct SankeyLink {
  std::string source;
  std::string target;
  int weight = 0;
};

struct SankeyExport {
  std::string category;
  std::vector<SankeyNode> nodes;
  std::vector<SankeyLink> links;
};

// Category matches its identifier case-insensitively, or as a unique prefix.
// Subfactor filters name primary-home factors or subcategories; an empty
// filter keeps the whole category. When `declared` (the kb category ids) is
// given, the category resolves against it and one with no factors exports empty.
SankeyExport export_sankey(const Framework& fw, std::string_view category,
                           const std::vector<std::string>& subfactors = {},
                           const std::vector<std::string>& declared = {});

std::string sankey_text(const SankeyExport& s);

}  // namespace taxoforge
