#include "wugbench/nd/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "wugbench/error.hpp"

namespace wugbench::nd {
namespace {

constexpr std::array<char, 8> kMagic = {'W', 'U', 'G', 'C', 'K', 'P', 'T', '1'};

void put_u64(std::ostream& out, std::uint64_t value) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) throw IoError("checkpoint: truncated file");
  std::uint64_t value = 0;
  for (int i = 0; i < 8; ++i) value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

const Array* Checkpoint::find(std::string_view name) const {
  for (const auto& [n, a] : tensors) {
    if (n == name) return &a;
  }
  return nullptr;
}

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint) {
  nlohmann::json header;
  header["config_hash"] = checkpoint.config_hash;
  header["config"] = checkpoint.config;
  header["tensors"] = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, array] : checkpoint.tensors) {
    header["tensors"].push_back({{"name", name}, {"shape", array.shape()}, {"offset", offset}});
    offset += array.size();
  }
  const std::string text = header.dump();
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& [name, array] : checkpoint.tensors) {
    for (double v : array.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw IoError("checkpoint: write failed");
}

Checkpoint read_checkpoint(std::istream& in) {
  std::array<char, 8> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw IoError("checkpoint: bad magic");
  const std::uint64_t header_size = get_u64(in);
  std::string text(header_size, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(header_size))) throw IoError("checkpoint: truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("checkpoint: malformed header: ") + e.what());
  }
  Checkpoint checkpoint;
  checkpoint.config_hash = header.value("config_hash", "");
  checkpoint.config = header.value("config", nlohmann::json::object());
  std::uint64_t expected_offset = 0;
  for (const auto& entry : header.at("tensors")) {
    Shape shape = entry.at("shape").get<Shape>();
    if (entry.at("offset").get<std::uint64_t>() != expected_offset) {
      throw IoError("checkpoint: non-contiguous tensor " + entry.at("name").get<std::string>());
    }
    Array array(shape);
    for (double& v : array.values()) v = std::bit_cast<double>(get_u64(in));
    expected_offset += array.size();
    checkpoint.tensors.emplace_back(entry.at("name").get<std::string>(), std::move(array));
  }
  return checkpoint;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_checkpoint(out, checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_checkpoint(in);
}

std::string config_hash(const nlohmann::json& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kHex[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

}  // namespace wugbench::nd
