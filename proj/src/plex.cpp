#include "hullspace/plex.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

#include "hullspace/errors.hpp"

namespace hullspace {

BadCrc::BadCrc(std::string chunk) : PlexError("CRC mismatch in chunk '" + chunk + "'"), chunk_(std::move(chunk)) {}

MissingRequiredChunk::MissingRequiredChunk(std::string code)
    : PlexError("missing required chunk '" + code + "'"), code_(std::move(code)) {}

namespace {

constexpr std::array<std::uint32_t, 256> make_crc_table() {
  std::array<std::uint32_t, 256> t{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    t[i] = c;
  }
  return t;
}

constexpr auto kCrcTable = make_crc_table();

class Writer {
 public:
  explicit Writer(Bytes& out) : out_(out) {}
  template <class T>
  void put(T v) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                    std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
    const U u = std::bit_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(U); ++i) out_.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
  }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

 private:
  Bytes& out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> in, const char* what) : in_(in), what_(what) {}
  template <class T>
  T get() {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                    std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
    need(sizeof(U));
    U u = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) u |= static_cast<U>(static_cast<U>(in_[pos_ + i]) << (8 * i));
    pos_ += sizeof(U);
    return std::bit_cast<T>(u);
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw TruncatedChunk(std::string("truncated ") + what_);
  }
  std::span<const std::uint8_t> in_;
  const char* what_;
  std::size_t pos_ = 0;
};

std::uint64_t unix_now() {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count());
}

Bytes encode_reals(const std::vector<NVector>& rows, Precision prec) {
  Bytes out;
  Writer w(out);
  for (const NVector& r : rows)
    for (double x : r.coords()) {
      if (prec == Precision::Single)
        w.put(static_cast<float>(x));
      else
        w.put(x);
    }
  return out;
}

std::vector<NVector> decode_reals(std::span<const std::uint8_t> payload, std::size_t rows, std::size_t dim,
                                  Precision prec, const char* code) {
  const std::size_t width = prec == Precision::Single ? 4 : 8;
  if (dim != 0 && rows > payload.size() / (width * dim)) throw MetaMismatch(std::string(code) + " payload too small");
  if (payload.size() != rows * dim * width) throw MetaMismatch(std::string(code) + " payload size disagrees with counts");
  Reader r(payload, code);
  std::vector<NVector> out(rows, NVector(dim));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < dim; ++k)
      out[i][k] = prec == Precision::Single ? static_cast<double>(r.get<float>()) : r.get<double>();
  return out;
}

std::string fmt_real(double x, Precision prec) {
  char buf[40];
  if (prec == Precision::Single)
    std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(static_cast<float>(x)));
  else
    std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes, std::uint32_t crc) {
  crc = ~crc;
  for (std::uint8_t b : bytes) crc = kCrcTable[(crc ^ b) & 0xFFu] ^ (crc >> 8);
  return ~crc;
}

Bytes encode_meta(const PlexMeta& m) {
  if (m.software_name.size() > std::numeric_limits<std::uint32_t>::max())
    throw FormatCapacity("software name too long");
  Bytes out;
  Writer w(out);
  w.put(m.dimension);
  w.put(m.reserved0);
  w.put(m.vertex_count);
  w.put(m.created);
  w.put(m.modified);
  w.put(m.precision_flag);
  w.bytes(m.reserved1);
  w.put(static_cast<std::uint32_t>(m.software_name.size()));
  w.bytes({reinterpret_cast<const std::uint8_t*>(m.software_name.data()), m.software_name.size()});
  return out;
}

PlexMeta decode_meta(std::span<const std::uint8_t> payload) {
  Reader r(payload, "META");
  PlexMeta m;
  m.dimension = r.get<std::int32_t>();
  m.reserved0 = r.get<std::uint32_t>();
  m.vertex_count = r.get<std::uint64_t>();
  m.created = r.get<std::uint64_t>();
  m.modified = r.get<std::uint64_t>();
  m.precision_flag = r.get<std::uint8_t>();
  const auto res = r.take(3);
  std::copy(res.begin(), res.end(), m.reserved1.begin());
  const auto len = r.get<std::uint32_t>();
  const auto name = r.take(len);
  m.software_name.assign(name.begin(), name.end());
  if (r.remaining() != 0) throw MetaMismatch("META payload has trailing bytes");
  if (m.precision_flag > 1) throw MetaMismatch("META precision flag must be 0 or 1");
  if (m.dimension < 1) throw MetaMismatch("META dimension must be positive");
  return m;
}

PlexChunk PlexChunk::make(std::string_view code, Bytes payload) {
  if (code.size() != 4) throw ArgumentError("chunk type codes are 4 characters");
  PlexChunk c;
  std::copy(code.begin(), code.end(), c.type.begin());
  c.payload = std::move(payload);
  const auto* t = reinterpret_cast<const std::uint8_t*>(c.type.data());
  c.crc = crc32(c.payload, crc32({t, 4}));
  return c;
}

bool PlexChunk::is_custom() const {
  return std::any_of(type.begin(), type.end(), [](char ch) { return std::islower(static_cast<unsigned char>(ch)); });
}

Bytes encode_header(std::uint32_t version) {
  Bytes out{'P', 'L', 'E', 'X'};
  Writer(out).put(version);
  return out;
}

void append_chunk(Bytes& out, const PlexChunk& chunk) {
  Writer w(out);
  w.bytes({reinterpret_cast<const std::uint8_t*>(chunk.type.data()), 4});
  w.put(static_cast<std::uint64_t>(chunk.payload.size()));
  w.bytes(chunk.payload);
  w.put(chunk.crc);
}

std::vector<PlexChunk> read_chunks(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPlexHeaderSize || std::memcmp(bytes.data(), "PLEX", 4) != 0) throw BadMagic("not a .plex file");
  Reader r(bytes.subspan(4), "header");
  const auto version = r.get<std::uint32_t>();
  if (version != kPlexVersion) throw BadMagic("unsupported .plex version " + std::to_string(version));

  std::vector<PlexChunk> chunks;
  while (r.remaining() > 0) {
    PlexChunk c;
    const auto type = r.take(std::min<std::size_t>(4, r.remaining()));
    if (type.size() < 4) throw TruncatedChunk("truncated chunk type");
    std::copy(type.begin(), type.end(), c.type.begin());
    const auto len = r.get<std::uint64_t>();
    if (len > r.remaining()) throw TruncatedChunk("truncated chunk '" + c.code() + "'");
    const auto payload = r.take(static_cast<std::size_t>(len));
    c.payload.assign(payload.begin(), payload.end());
    if (r.remaining() < 4) throw TruncatedChunk("truncated chunk '" + c.code() + "'");
    c.crc = r.get<std::uint32_t>();
    const std::uint32_t expect = crc32(c.payload, crc32(type));
    if (expect != c.crc) throw BadCrc(c.code());
    chunks.push_back(std::move(c));
  }
  return chunks;
}

Bytes write_plex(const NMesh& mesh, const PlexWriteOptions& opts) {
  const std::size_t n = mesh.dim();
  if (mesh.vertex_count() > std::numeric_limits<std::uint32_t>::max())
    throw FormatCapacity("vertex count exceeds the 32-bit index space");
  if (n > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) throw FormatCapacity("dimension too large");
  const Precision prec = opts.precision;
  const bool single = prec == Precision::Single;

  PlexMeta meta;
  meta.dimension = static_cast<std::int32_t>(n);
  meta.vertex_count = mesh.vertex_count();
  meta.created = opts.created.value_or(unix_now());
  meta.modified = opts.modified.value_or(meta.created);
  meta.precision_flag = static_cast<std::uint8_t>(prec);
  meta.software_name = opts.software;

  Bytes out = encode_header();
  append_chunk(out, PlexChunk::make("META", encode_meta(meta)));
  append_chunk(out, PlexChunk::make(single ? "VERT" : "VERD", encode_reals(mesh.vertices(), prec)));

  Bytes face;
  Writer fw(face);
  fw.put(static_cast<std::uint64_t>(mesh.facet_count()));
  for (Index i : mesh.facet_indices()) fw.put(i);
  append_chunk(out, PlexChunk::make("FACE", std::move(face)));
  append_chunk(out, PlexChunk::make(single ? "NORM" : "NRMD", encode_reals(mesh.normals(), prec)));
  if (opts.centroids) append_chunk(out, PlexChunk::make(single ? "CENT" : "CNTD", encode_reals(mesh.centroids(), prec)));
  for (const PlexChunk& c : opts.extra_chunks) append_chunk(out, c);
  return out;
}

PlexFile read_plex(std::span<const std::uint8_t> bytes) {
  const std::vector<PlexChunk> chunks = read_chunks(bytes);
  std::map<std::string, const PlexChunk*> known;
  PlexFile file;
  static const std::array<std::string_view, 8> kStandard{"META", "VERT", "VERD", "FACE", "NORM",
                                                         "NRMD", "CENT", "CNTD"};
  for (const PlexChunk& c : chunks) {
    const std::string code = c.code();
    if (std::find(kStandard.begin(), kStandard.end(), code) != kStandard.end()) {
      if (known.count(code)) throw MetaMismatch("duplicate chunk '" + code + "'");
      known[code] = &c;
    } else {
      file.skipped.push_back(code);
      file.custom_chunks.push_back(c);
    }
  }
  auto require = [&](const std::string& code) -> const PlexChunk& {
    const auto it = known.find(code);
    if (it == known.end()) throw MissingRequiredChunk(code);
    return *it->second;
  };

  file.meta = decode_meta(require("META").payload);
  const Precision prec = file.meta.precision();
  const bool single = prec == Precision::Single;
  const auto dim = static_cast<std::size_t>(file.meta.dimension);

  const PlexChunk& vert = require(single ? "VERT" : "VERD");
  std::vector<NVector> verts = decode_reals(vert.payload, file.meta.vertex_count, dim, prec, vert.code().c_str());

  Reader fr(require("FACE").payload, "FACE");
  const auto facets = fr.get<std::uint64_t>();
  if (facets > fr.remaining() / (4 * dim) || fr.remaining() != facets * dim * 4)
    throw MetaMismatch("FACE payload size disagrees with its facet count");
  std::vector<Index> idx(static_cast<std::size_t>(facets * dim));
  for (Index& i : idx) {
    i = fr.get<std::uint32_t>();
    if (i >= verts.size()) throw MetaMismatch("FACE index out of range");
  }

  const PlexChunk& norm = require(single ? "NORM" : "NRMD");
  std::vector<NVector> normals = decode_reals(norm.payload, facets, dim, prec, norm.code().c_str());

  NMesh mesh(dim);
  for (NVector& v : verts) mesh.add_vertex(std::move(v));
  for (std::size_t f = 0; f < facets; ++f)
    mesh.add_facet(std::span<const Index>(idx).subspan(f * dim, dim), std::move(normals[f]));

  const std::string cent = single ? "CENT" : "CNTD";
  if (const auto it = known.find(cent); it != known.end())
    mesh.adopt_centroids(decode_reals(it->second->payload, facets, dim, prec, cent.c_str()));
  file.mesh = std::move(mesh);
  return file;
}

std::string to_json(const NMesh& mesh, const PlexMeta& meta) {
  const Precision prec = meta.precision();
  std::string s;
  s += "{\"dimension\":" + std::to_string(mesh.dim());
  s += ",\"vertexCount\":" + std::to_string(mesh.vertex_count());
  s += ",\"precision\":\"";
  s += prec == Precision::Single ? "single" : "double";
  s += "\",\"software\":" + nlohmann::json(meta.software_name).dump();
  s += ",\"created\":" + std::to_string(meta.created);
  s += ",\"modified\":" + std::to_string(meta.modified);
  auto rows = [&](const char* name, const std::vector<NVector>& data) {
    s += ",\"";
    s += name;
    s += "\":[";
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (i) s += ',';
      s += '[';
      for (std::size_t k = 0; k < data[i].dim(); ++k) {
        if (k) s += ',';
        s += fmt_real(data[i][k], prec);
      }
      s += ']';
    }
    s += ']';
  };
  rows("vertices", mesh.vertices());
  s += ",\"facets\":[";
  for (std::size_t f = 0; f < mesh.facet_count(); ++f) {
    if (f) s += ',';
    s += '[';
    const auto idx = mesh.facet(f);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (k) s += ',';
      s += std::to_string(idx[k]);
    }
    s += ']';
  }
  s += ']';
  rows("normals", mesh.normals());
  s += "}\n";
  return s;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

}  // namespace hullspace
