#include "taxoforge/space_type.hpp"

#include <cmath>

namespace taxoforge {

char code_of(SpaceType t) {
  static constexpr char kCodes[] = {'P', 'S', 'U', 'G', 'O', 'F'};
  return kCodes[index_of(t)];
}

std::string_view label_of(SpaceType t) {
  switch (t) {
    case SpaceType::P: return "Parks & Waterfronts";
    case SpaceType::S: return "Streets & Squares";
    case SpaceType::U: return "Urban Spaces";
    case SpaceType::G: return "Green Spaces";
    case SpaceType::O: return "Open Spaces";
    case SpaceType::F: return "Public Facilities";
  }
  return "";
}

std::optional<SpaceType> parse_space_type(std::string_view code) {
  if (code.size() != 1) return std::nullopt;
  for (SpaceType t : kSpaceTypes) {
    if (code_of(t) == code[0]) return t;
  }
  return std::nullopt;
}

int OccurrenceVector::total() const {
  int sum = 0;
  for (int c : counts) sum += c;
  return sum;
}

int OccurrenceVector::active_count() const {
  int n = 0;
  for (int c : counts) n += c > 0 ? 1 : 0;
  return n;
}

double cosine(const SpaceProfile& a, const SpaceProfile& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < kSpaceTypeCount; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  // Rounding can push proportional vectors a hair past 1.
  return c > 1.0 ? 1.0 : c;
}

SpaceProfile to_profile(const OccurrenceVector& v) {
  SpaceProfile p{};
  for (std::size_t i = 0; i < kSpaceTypeCount; ++i) p[i] = v.counts[i];
  return p;
}

}  // namespace taxoforge
