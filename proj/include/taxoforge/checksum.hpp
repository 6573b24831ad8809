#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace taxoforge {

// 64-bit FNV-1a. Used for provenance headers, not for security.
class Fnv1a {
 public:
  void update(std::string_view bytes);
  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 14695981039346656037ull;
};

std::string checksum_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace taxoforge
