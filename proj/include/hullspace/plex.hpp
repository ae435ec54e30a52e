#pragma once

// The .plex chunked binary mesh format and its JSON export.
//
// File: "PLEX" magic, u32 version, then chunks. Chunk: 4-byte type code,
// u64 payload length, payload, u32 CRC-32 over type code and payload. All
// integers and floats are little-endian. Type codes containing a lowercase
// letter are custom chunks that readers may skip.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hullspace/ndmesh.hpp"

namespace hullspace {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::uint32_t kPlexVersion = 1;
inline constexpr std::size_t kPlexHeaderSize = 8;

class PlexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class BadMagic : public PlexError {
 public:
  using PlexError::PlexError;
};
class BadCrc : public PlexError {
 public:
  explicit BadCrc(std::string chunk);
  const std::string& chunk() const { return chunk_; }

 private:
  std::string chunk_;
};
class MissingRequiredChunk : public PlexError {
 public:
  explicit MissingRequiredChunk(std::string code);
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};
class TruncatedChunk : public PlexError {
 public:
  using PlexError::PlexError;
};
class MetaMismatch : public PlexError {
 public:
  using PlexError::PlexError;
};
class FormatCapacity : public PlexError {
 public:
  using PlexError::PlexError;
};

/// CRC-32/ISO-HDLC (the zlib/PNG CRC).
std::uint32_t crc32(std::span<const std::uint8_t> bytes, std::uint32_t crc = 0);

enum class Precision : std::uint8_t { Single = 0, Double = 1 };

struct PlexMeta {
  std::int32_t dimension = 0;
  std::uint32_t reserved0 = 0;
  std::uint64_t vertex_count = 0;
  std::uint64_t created = 0;
  std::uint64_t modified = 0;
  std::uint8_t precision_flag = 1;
  std::array<std::uint8_t, 3> reserved1{};
  std::string software_name;

  Precision precision() const { return precision_flag == 0 ? Precision::Single : Precision::Double; }
  friend bool operator==(const PlexMeta&, const PlexMeta&) = default;
};

Bytes encode_meta(const PlexMeta& meta);
PlexMeta decode_meta(std::span<const std::uint8_t> payload);

struct PlexChunk {
  std::array<char, 4> type{};
  Bytes payload;
  std::uint32_t crc = 0;

  static PlexChunk make(std::string_view code, Bytes payload);
  std::string code() const { return {type.begin(), type.end()}; }
  bool is_custom() const;
  friend bool operator==(const PlexChunk&, const PlexChunk&) = default;
};

Bytes encode_header(std::uint32_t version = kPlexVersion);
void append_chunk(Bytes& out, const PlexChunk& chunk);

/// Splits a file into chunks, checking magic, version, framing and CRCs.
std::vector<PlexChunk> read_chunks(std::span<const std::uint8_t> bytes);

struct PlexWriteOptions {
  Precision precision = Precision::Double;
  std::string software = "hullspace";
  std::optional<std::uint64_t> created;   // defaults to now
  std::optional<std::uint64_t> modified;  // defaults to created
  bool centroids = false;
  std::vector<PlexChunk> extra_chunks;  // appended after the standard chunks
};

Bytes write_plex(const NMesh& mesh, const PlexWriteOptions& opts = {});

struct PlexFile {
  PlexMeta meta;
  NMesh mesh;
  std::vector<std::string> skipped;       // codes of unknown chunks, in file order
  std::vector<PlexChunk> custom_chunks;   // their contents
};

PlexFile read_plex(std::span<const std::uint8_t> bytes);

/// JSON document with dimension, vertexCount, precision, software,
/// vertices, facets and normals. Numbers use 17 significant digits for
/// double precision and 9 for single.
std::string to_json(const NMesh& mesh, const PlexMeta& meta);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace hullspace
