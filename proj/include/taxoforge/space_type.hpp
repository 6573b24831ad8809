#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace taxoforge {

// The six public-space typologies, in canonical order.
enum class SpaceType : std::uint8_t { P, S, U, G, O, F };

inline constexpr std::size_t kSpaceTypeCount = 6;
inline constexpr std::array<SpaceType, kSpaceTypeCount> kSpaceTypes = {
    SpaceType::P, SpaceType::S, SpaceType::U, SpaceType::G, SpaceType::O, SpaceType::F};

constexpr std::size_t index_of(SpaceType t) { return static_cast<std::size_t>(t); }
char code_of(SpaceType t);
std::string_view label_of(SpaceType t);
std::optional<SpaceType> parse_space_type(std::string_view code);

// Per-typology mention counts. All six slots always exist.
struct OccurrenceVector {
  std::array<int, kSpaceTypeCount> counts{};

  int& operator[](SpaceType t) { return counts[index_of(t)]; }
  int operator[](SpaceType t) const { return counts[index_of(t)]; }

  int total() const;
  int active_count() const;
  bool is_zero() const { return total() == 0; }

  bool operator==(const OccurrenceVector&) const = default;
};

// Per-typology real weights (domain profiles, aggregated relevance).
using SpaceProfile = std::array<double, kSpaceTypeCount>;

double cosine(const SpaceProfile& a, const SpaceProfile& b);
SpaceProfile to_profile(const OccurrenceVector& v);

}  // namespace taxoforge
