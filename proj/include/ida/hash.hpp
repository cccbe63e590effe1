#pragma once

#include <cstddef>
#include <fstream>
#include <string>

#include "ida/types.hpp"

namespace ida {

// FNV-1a 64. Used for reproducibility checks (manifest hashes, frozen-group
// hashes), not for security.
inline u64 fnv1a64(const void* data, std::size_t n, u64 h = 0xcbf29ce484222325ULL) {
  const u8* p = static_cast<const u8*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline u64 fnv1a64(const std::string& s, u64 h = 0xcbf29ce484222325ULL) {
  return fnv1a64(s.data(), s.size(), h);
}

inline std::string hash_hex(u64 h) {
  static const char* d = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = d[h & 0xf];
    h >>= 4;
  }
  return s;
}

inline std::string hash_file_hex(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return "";
  u64 h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (f) {
    f.read(buf, sizeof(buf));
    h = fnv1a64(buf, static_cast<std::size_t>(f.gcount()), h);
  }
  return hash_hex(h);
}

}  // namespace ida
