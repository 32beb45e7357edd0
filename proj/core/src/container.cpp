#include "rtm/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>
#include <zlib.h>

#include "rtm/errors.hpp"

namespace rtm::container {
namespace {

constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + b])) << (8 * b);
  return v;
}

std::string payload_bytes(std::span<const double> payload) {
  std::string out;
  out.reserve(payload.size() * 8);
  for (double d : payload) {
    const auto bits = std::bit_cast<std::uint64_t>(d);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
  }
  return out;
}

std::uint32_t crc_of(const char* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in pieces.
  while (size > 0) {
    const auto piece = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data), piece);
    data += piece;
    size -= piece;
  }
  return static_cast<std::uint32_t>(crc);
}

std::string magic_text(const std::array<char, 4>& m) { return std::string(m.begin(), m.end()); }

}  // namespace

std::size_t values_per_cell(const std::array<char, 4>& magic) {
  if (magic == kDataMagic) return 2;
  if (magic == kImageMagic) return 1;
  throw ValidationError("unknown container magic '" + magic_text(magic) + "'");
}

std::uint32_t payload_crc32(std::span<const double> payload) {
  const std::string bytes = payload_bytes(payload);
  return crc_of(bytes.data(), bytes.size());
}

std::string encode(const Document& doc) {
  const std::size_t expected = values_per_cell(doc.magic) * doc.rows * doc.cols;
  if (doc.payload.size() != expected) throw ValidationError("container payload size does not match its shape");
  nlohmann::json meta = doc.metadata.empty() ? nlohmann::json::object() : nlohmann::json::parse(doc.metadata);
  if (!meta.is_object()) throw ValidationError("container metadata must be a JSON object");

  std::string out(doc.magic.begin(), doc.magic.end());
  put_u32(out, kFormatVersion);
  put_u32(out, doc.rows);
  put_u32(out, doc.cols);
  const std::string body = payload_bytes(doc.payload);
  meta["crc32"] = crc_of(body.data(), body.size());
  out += body;
  out += meta.dump();
  return out;
}

Document decode(const std::string& bytes, const std::array<char, 4>& expected_magic) {
  if (bytes.size() < kHeaderBytes) throw IoError("container truncated: header incomplete");
  Document doc;
  std::memcpy(doc.magic.data(), bytes.data(), 4);
  if (doc.magic != expected_magic) {
    throw IoError("bad magic '" + magic_text(doc.magic) + "', expected '" + magic_text(expected_magic) + "'");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kFormatVersion) throw IoError("unsupported container version " + std::to_string(version));
  doc.rows = get_u32(bytes, 8);
  doc.cols = get_u32(bytes, 12);
  const std::size_t count = values_per_cell(doc.magic) * doc.rows * doc.cols;
  const std::size_t payload_end = kHeaderBytes + 8 * count;
  if (bytes.size() < payload_end) throw IoError("container truncated: payload incomplete");

  doc.payload.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[kHeaderBytes + 8 * i + b])) << (8 * b);
    }
    doc.payload[i] = std::bit_cast<double>(bits);
  }

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(bytes.begin() + static_cast<std::ptrdiff_t>(payload_end), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("container trailer is not valid JSON: ") + e.what());
  }
  if (!meta.is_object() || !meta.contains("crc32") || !meta["crc32"].is_number_unsigned()) {
    throw IoError("container trailer lacks a crc32 checksum");
  }
  const auto stored = meta["crc32"].get<std::uint64_t>();
  const std::uint32_t actual = crc_of(bytes.data() + kHeaderBytes, 8 * count);
  if (stored != actual) throw IoError("container checksum mismatch");
  doc.metadata = meta.dump();
  return doc;
}

void write_file(const std::filesystem::path& path, const Document& doc) {
  const std::string bytes = encode(doc);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Document read_file(const std::filesystem::path& path, const std::array<char, 4>& expected_magic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode(bytes, expected_magic);
}

}  // namespace rtm::container
