#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include <json.hpp>

#include "hullspace/errors.hpp"
#include "hullspace/hull.hpp"
#include "hullspace/plex.hpp"
#include "hullspace/primitives.hpp"
#include "oracles.hpp"

using namespace hullspace;

namespace {

NMesh five_cell() {
  std::vector<NVector> pts{NVector(4)};
  for (std::size_t k = 0; k < 4; ++k) pts.push_back(NVector::basis(4, k));
  return build_hull(pts, 4).mesh;
}

PlexWriteOptions fixed(Precision p = Precision::Double) {
  PlexWriteOptions o;
  o.precision = p;
  o.created = 1700000000;
  o.modified = 1700000500;
  return o;
}

Bytes rebuild(const std::vector<PlexChunk>& chunks) {
  Bytes out = encode_header();
  for (const PlexChunk& c : chunks) append_chunk(out, c);
  return out;
}

const PlexChunk& find(const std::vector<PlexChunk>& chunks, std::string_view code) {
  for (const PlexChunk& c : chunks)
    if (c.code() == code) return c;
  throw std::runtime_error("no chunk");
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("crc32 check values") {
  CHECK(crc32(std::span<const std::uint8_t>{}) == 0u);
  const std::string s = "123456789";
  const auto* p = reinterpret_cast<const std::uint8_t*>(s.data());
  CHECK(crc32(std::span(p, s.size())) == 0xCBF43926u);
  CHECK(oracle::crc32(s) == 0xCBF43926u);
  // chained over two halves
  CHECK(crc32(std::span(p + 4, 5), crc32(std::span(p, 4))) == 0xCBF43926u);
}

TEST_CASE("crc32 matches the bitwise oracle and catches single bit flips") {
  oracle::Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    Bytes b(1 + rng.next() % 200);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng.next());
    const std::uint32_t c = crc32(b);
    CHECK(c == oracle::crc32(b));
    Bytes f = b;
    f[rng.next() % f.size()] ^= static_cast<std::uint8_t>(1u << (rng.next() % 8));
    CHECK(crc32(f) != c);
  }
}

TEST_CASE("META layout matches the golden payload") {
  PlexMeta m;
  m.dimension = 4;
  m.vertex_count = 5;
  m.created = 1700000000;
  m.modified = 1700000123;
  m.precision_flag = 0;
  m.software_name = "hullspace-golden";
  const Bytes golden = read_file(HULLSPACE_TEST_DATA "/meta_golden.bin");
  CHECK(encode_meta(m) == golden);
  CHECK(decode_meta(golden) == m);
  CHECK(golden.size() == 0x28 + m.software_name.size());

  Bytes bad = golden;
  bad[0x20] = 2;
  CHECK_THROWS_AS(decode_meta(bad), MetaMismatch);
  Bytes trailing = golden;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode_meta(trailing), MetaMismatch);
  CHECK_THROWS_AS(decode_meta(std::span(golden).first(20)), TruncatedChunk);
}

TEST_CASE("chunk framing") {
  const PlexChunk c = PlexChunk::make("xTRA", {1, 2, 3});
  CHECK(c.is_custom());
  CHECK_FALSE(PlexChunk::make("VERT", {}).is_custom());
  Bytes crc_input{'x', 'T', 'R', 'A', 1, 2, 3};
  CHECK(c.crc == oracle::crc32(crc_input));

  Bytes out = encode_header();
  CHECK(out.size() == kPlexHeaderSize);
  CHECK(std::memcmp(out.data(), "PLEX", 4) == 0);
  CHECK(out[4] == 1);
  append_chunk(out, c);
  CHECK(out.size() == 8 + 4 + 8 + 3 + 4);
  CHECK(out[12] == 3);  // little-endian length
  const auto chunks = read_chunks(out);
  REQUIRE(chunks.size() == 1);
  CHECK(chunks[0] == c);
  CHECK_THROWS_AS(PlexChunk::make("TOOLONG", {}), ArgumentError);
}

TEST_CASE("empty mesh round trip") {
  const NMesh empty(4);
  const Bytes b = write_plex(empty, fixed());
  const PlexFile f = read_plex(b);
  CHECK(f.meta.vertex_count == 0);
  CHECK(f.meta.dimension == 4);
  CHECK(f.mesh.empty());
  CHECK(f.mesh.vertex_count() == 0);
  CHECK(write_plex(f.mesh, fixed()) == b);
}

TEST_CASE("5-cell in single precision") {
  const NMesh m = five_cell();
  REQUIRE(m.vertex_count() == 5);
  REQUIRE(m.facet_count() == 5);
  const Bytes b = write_plex(m, fixed(Precision::Single));
  const auto chunks = read_chunks(b);
  std::vector<std::string> order;
  for (const PlexChunk& c : chunks) order.push_back(c.code());
  CHECK(order == std::vector<std::string>{"META", "VERT", "FACE", "NORM"});
  CHECK(find(chunks, "VERT").payload.size() == 80);
  const Bytes& face = find(chunks, "FACE").payload;
  CHECK(face.size() == 8 + 5 * 4 * 4);
  std::uint64_t count = 0;
  std::memcpy(&count, face.data(), 8);
  CHECK(count == 5);

  const PlexFile f = read_plex(b);
  CHECK(f.meta.precision() == Precision::Single);
  CHECK(f.meta.software_name == "hullspace");
  CHECK(f.mesh.facet_indices() == m.facet_indices());
}

TEST_CASE("random mesh round trips bit-exactly") {
  const NMesh m = make_random_convex(4, 40, 3);
  SUBCASE("double") {
    const Bytes b = write_plex(m, fixed());
    const PlexFile f = read_plex(b);
    for (std::size_t i = 0; i < m.vertex_count(); ++i)
      for (std::size_t k = 0; k < 4; ++k) CHECK(same_bits(f.mesh.vertex(i)[k], m.vertex(i)[k]));
    CHECK(f.mesh.facet_indices() == m.facet_indices());
    CHECK(f.mesh.normals() == m.normals());
    CHECK(write_plex(f.mesh, fixed()) == b);
  }
  SUBCASE("single") {
    const Bytes b = write_plex(m, fixed(Precision::Single));
    const PlexFile f = read_plex(b);
    for (std::size_t i = 0; i < m.vertex_count(); ++i)
      for (std::size_t k = 0; k < 4; ++k)
        CHECK(same_bits(f.mesh.vertex(i)[k], static_cast<double>(static_cast<float>(m.vertex(i)[k]))));
    // single in, single out
    CHECK(write_plex(f.mesh, fixed(Precision::Single)) == b);
  }
  SUBCASE("centroids and custom chunks") {
    PlexWriteOptions o = fixed();
    o.centroids = true;
    o.extra_chunks.push_back(PlexChunk::make("simx", {9, 9}));
    const Bytes b = write_plex(m, o);
    const PlexFile f = read_plex(b);
    CHECK(f.mesh.has_cached_centroids());
    CHECK(f.skipped == std::vector<std::string>{"simx"});
    PlexWriteOptions again = fixed();
    again.centroids = true;
    again.extra_chunks = f.custom_chunks;
    CHECK(write_plex(f.mesh, again) == b);
  }
}

TEST_CASE("unknown chunks are skipped") {
  const NMesh m = five_cell();
  auto chunks = read_chunks(write_plex(m, fixed()));
  const auto face = std::find_if(chunks.begin(), chunks.end(), [](const PlexChunk& c) { return c.code() == "FACE"; });
  chunks.insert(face + 1, PlexChunk::make("xTRA", {0xde, 0xad}));
  const PlexFile f = read_plex(rebuild(chunks));
  CHECK(f.skipped == std::vector<std::string>{"xTRA"});
  CHECK(f.mesh.facet_indices() == m.facet_indices());
  CHECK(f.mesh.vertices() == m.vertices());
}

TEST_CASE("corruption and malformed files") {
  const NMesh m = five_cell();
  const Bytes good = write_plex(m, fixed());

  SUBCASE("flipped VERD byte") {
    auto chunks = read_chunks(good);
    Bytes b = good;
    // header 8, META chunk 4+8+len+4, then VERD type and length
    const std::size_t meta_len = find(chunks, "META").payload.size();
    const std::size_t verd_payload = 8 + 12 + meta_len + 4 + 12;
    b[verd_payload + 3] ^= 0x40;
    try {
      read_plex(b);
      FAIL("no error");
    } catch (const BadCrc& e) {
      CHECK(e.chunk() == "VERD");
    }
  }
  SUBCASE("truncated") {
    for (std::size_t cut : {good.size() - 1, good.size() - 10, std::size_t{30}, std::size_t{13}})
      CHECK_THROWS_AS(read_plex(std::span(good).first(cut)), TruncatedChunk);
  }
  SUBCASE("bad magic and version") {
    Bytes b = good;
    b[0] = 'Q';
    CHECK_THROWS_AS(read_plex(b), BadMagic);
    Bytes v = good;
    v[4] = 2;
    CHECK_THROWS_AS(read_plex(v), BadMagic);
    CHECK_THROWS_AS(read_plex(Bytes{'P', 'L'}), BadMagic);
  }
  SUBCASE("missing normals") {
    auto chunks = read_chunks(good);
    std::erase_if(chunks, [](const PlexChunk& c) { return c.code() == "NRMD"; });
    try {
      read_plex(rebuild(chunks));
      FAIL("no error");
    } catch (const MissingRequiredChunk& e) {
      CHECK(e.code() == "NRMD");
    }
  }
  SUBCASE("vertex count disagrees with VERD size") {
    auto chunks = read_chunks(good);
    for (PlexChunk& c : chunks)
      if (c.code() == "META") {
        PlexMeta meta = decode_meta(c.payload);
        meta.vertex_count += 1;
        c = PlexChunk::make("META", encode_meta(meta));
      }
    CHECK_THROWS_AS(read_plex(rebuild(chunks)), MetaMismatch);
  }
  SUBCASE("index out of range") {
    auto chunks = read_chunks(good);
    for (PlexChunk& c : chunks)
      if (c.code() == "FACE") {
        Bytes p = c.payload;
        p[8] = 77;
        c = PlexChunk::make("FACE", p);
      }
    CHECK_THROWS_AS(read_plex(rebuild(chunks)), MetaMismatch);
  }
}

TEST_CASE("every single-byte payload corruption is detected") {
  const Bytes good = write_plex(make_random_convex(4, 20, 8), fixed());
  const auto chunks = read_chunks(good);
  // payload byte ranges
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::size_t off = kPlexHeaderSize;
  for (const PlexChunk& c : chunks) {
    ranges.push_back({off + 12, c.payload.size()});
    off += 12 + c.payload.size() + 4;
  }
  oracle::Rng rng(5);
  int detected = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto [start, len] = ranges[rng.next() % ranges.size()];
    Bytes b = good;
    b[start + rng.next() % len] ^= static_cast<std::uint8_t>(1 + rng.next() % 255);
    try {
      read_plex(b);
    } catch (const BadCrc&) {
      ++detected;
    }
  }
  CHECK(detected == 1000);
}

TEST_CASE("json export") {
  PlexMeta none;
  none.dimension = 4;
  const nlohmann::json e = nlohmann::json::parse(to_json(NMesh(4), none));
  CHECK(e["dimension"] == 4);
  CHECK(e["vertexCount"] == 0);
  CHECK(e["vertices"].empty());
  CHECK(e["facets"].empty());
  CHECK(e["normals"].empty());

  const NMesh m = five_cell();
  PlexMeta meta;
  meta.dimension = 4;
  meta.vertex_count = 5;
  meta.software_name = "a \"quoted\" name";
  const nlohmann::json j = nlohmann::json::parse(to_json(m, meta));
  CHECK(j["vertices"].size() == 5);
  for (const auto& v : j["vertices"]) CHECK(v.size() == 4);
  CHECK(j["facets"].size() == 5);
  CHECK(j["software"] == "a \"quoted\" name");
  CHECK(j["precision"] == "double");

  // 17 digits survive a decimal round trip
  const NMesh r = make_random_convex(4, 30, 2);
  const PlexFile f = read_plex(write_plex(r, fixed()));
  const nlohmann::json rj = nlohmann::json::parse(to_json(f.mesh, f.meta));
  for (std::size_t i = 0; i < r.vertex_count(); ++i)
    for (std::size_t k = 0; k < 4; ++k) CHECK(same_bits(rj["vertices"][i][k].get<double>(), r.vertex(i)[k]));
  for (std::size_t i = 0; i < r.facet_count(); ++i)
    for (std::size_t k = 0; k < 4; ++k) CHECK(rj["facets"][i][k].get<Index>() == r.facet(i)[k]);
}
