#pragma once

#include "artsyn/common.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace artsyn::binio {

static_assert(sizeof(double) == 8 && sizeof(float) == 4);

inline void write_bytes(std::ostream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  if (!os) throw DataError("binio: write failed");
}

inline void read_bytes(std::istream& is, void* p, std::size_t n) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n)
    throw DataError("binio: unexpected end of file");
}

template <class UInt>
inline void write_uint(std::ostream& os, UInt v) {
  unsigned char buf[sizeof(UInt)];
  for (std::size_t i = 0; i < sizeof(UInt); ++i)
    buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  write_bytes(os, buf, sizeof(UInt));
}

template <class UInt>
inline UInt read_uint(std::istream& is) {
  unsigned char buf[sizeof(UInt)];
  read_bytes(is, buf, sizeof(UInt));
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i)
    v |= static_cast<UInt>(buf[i]) << (8 * i);
  return v;
}

inline void write_u8(std::ostream& os, std::uint8_t v) { write_uint<std::uint8_t>(os, v); }
inline void write_u16(std::ostream& os, std::uint16_t v) { write_uint<std::uint16_t>(os, v); }
inline void write_u32(std::ostream& os, std::uint32_t v) { write_uint<std::uint32_t>(os, v); }
inline void write_u64(std::ostream& os, std::uint64_t v) { write_uint<std::uint64_t>(os, v); }
inline std::uint8_t read_u8(std::istream& is) { return read_uint<std::uint8_t>(is); }
inline std::uint16_t read_u16(std::istream& is) { return read_uint<std::uint16_t>(is); }
inline std::uint32_t read_u32(std::istream& is) { return read_uint<std::uint32_t>(is); }
inline std::uint64_t read_u64(std::istream& is) { return read_uint<std::uint64_t>(is); }

inline void write_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  write_u64(os, bits);
}

inline double read_f64(std::istream& is) {
  const std::uint64_t bits = read_u64(is);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

inline void write_f32(std::ostream& os, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  write_u32(os, bits);
}

inline float read_f32(std::istream& is) {
  const std::uint32_t bits = read_u32(is);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

inline void write_f64_array(std::ostream& os, const double* p, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    write_bytes(os, p, n * 8);
  } else {
    for (std::size_t i = 0; i < n; ++i) write_f64(os, p[i]);
  }
}

inline void read_f64_array(std::istream& is, double* p, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    read_bytes(is, p, n * 8);
  } else {
    for (std::size_t i = 0; i < n; ++i) p[i] = read_f64(is);
  }
}

inline void write_string(std::ostream& os, const std::string& s) {
  write_u32(os, static_cast<std::uint32_t>(s.size()));
  if (!s.empty()) write_bytes(os, s.data(), s.size());
}

inline std::string read_string(std::istream& is) {
  const std::uint32_t n = read_u32(is);
  std::string s(n, '\0');
  if (n) read_bytes(is, s.data(), n);
  return s;
}

inline void write_magic(std::ostream& os, const char magic[5]) {
  write_bytes(os, magic, 4);
}

inline void expect_magic(std::istream& is, const char magic[5]) {
  char buf[4];
  read_bytes(is, buf, 4);
  if (std::memcmp(buf, magic, 4) != 0)
    throw DataError(std::string("bad file magic, expected ") + magic);
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  return os;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open for reading: " + path);
  return is;
}

/// FNV-1a 64-bit over a byte range.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace artsyn::binio
