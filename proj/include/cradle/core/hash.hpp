#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cradle {

/// Incremental SHA-256. Digests identify cassette requests, rendered frames
/// and trajectory states, so the hash must be stable across platforms.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, std::size_t size);
  void update(const std::string& s) { update(s.data(), s.size()); }
  std::string hex_digest();

 private:
  void process_block(const std::uint8_t* block);

  std::uint32_t state_[8];
  std::uint8_t buffer_[64];
  std::size_t buffer_size_ = 0;
  std::uint64_t total_bits_ = 0;
};

std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_hex(const std::string& s);
std::string sha256_hex(const std::vector<std::uint8_t>& v);

std::uint64_t fnv1a64(const std::string& s);

std::string base64_encode(const std::uint8_t* data, std::size_t size);
std::string base64_encode(const std::vector<std::uint8_t>& v);
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace cradle
