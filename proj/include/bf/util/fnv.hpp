#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace bf::util {

inline uint64_t fnv1a64(std::string_view bytes, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Hex digest of a file's contents; empty string if the file cannot be read.
std::string file_checksum(const std::string& path);

}  // namespace bf::util
