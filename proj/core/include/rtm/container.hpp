#pragma once

// Binary container shared by data (.rtmd) and image (.rtmi) files:
//   bytes 0..3   magic ("RTMD" or "RTMI")
//   bytes 4..15  format version, rows, cols as little-endian u32
//   payload      float64 little-endian values, row-major
//   trailer      UTF-8 JSON object running to end of file; its "crc32" member
//                is the zlib CRC32 of the payload bytes
// Data files store rows x cols complex values as interleaved (re, im) pairs;
// image files store rows x cols reals.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace rtm::container {

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::array<char, 4> kDataMagic{'R', 'T', 'M', 'D'};
inline constexpr std::array<char, 4> kImageMagic{'R', 'T', 'M', 'I'};

struct Document {
  std::array<char, 4> magic{};
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<double> payload;
  /// Trailer JSON text with the "crc32" member already verified.
  std::string metadata;
};

/// Doubles per cell for a magic: 2 for data, 1 for images.
std::size_t values_per_cell(const std::array<char, 4>& magic);

std::uint32_t payload_crc32(std::span<const double> payload);

/// Serialized bytes. `metadata` must be a JSON object; "crc32" is added.
std::string encode(const Document& doc);
/// Parses and verifies magic, version, payload size and checksum.
Document decode(const std::string& bytes, const std::array<char, 4>& expected_magic);

void write_file(const std::filesystem::path& path, const Document& doc);
Document read_file(const std::filesystem::path& path, const std::array<char, 4>& expected_magic);

}  // namespace rtm::container
