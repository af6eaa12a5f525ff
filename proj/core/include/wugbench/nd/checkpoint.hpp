#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wugbench/nd/array.hpp"

namespace wugbench::nd {

// On-disk layout (all integers little-endian):
//
//   bytes 0..7   magic "WUGCKPT1"
//   bytes 8..15  u64 length L of the JSON header
//   next L bytes JSON header:
//                {"config_hash": "...", "config": {...},
//                 "tensors": [{"name": "...", "shape": [...], "offset": n}, ...]}
//   remainder    IEEE-754 binary64 values, little-endian; tensor i starts at
//                value index tensors[i].offset
//
// Values are copied bit-for-bit, so save/load round-trips exactly.
struct Checkpoint {
  std::string config_hash;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::pair<std::string, Array>> tensors;

  const Array* find(std::string_view name) const;
};

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// FNV-1a 64 of the canonical (sorted-key, compact) JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

}  // namespace wugbench::nd
