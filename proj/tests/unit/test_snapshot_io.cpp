#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "nsledger/snapshot_io.hpp"
#include "support/oracles.hpp"

using namespace nsledger;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("nsledger_unit_" + name);
}

}  // namespace

TEST_SUITE("snapshot_io") {

TEST_CASE("round trip is bit exact") {
  const auto g = Grid::build(8, 3.5);
  const auto f = oracle::random_physical(g, 21);
  const auto path = temp_path("roundtrip.bin");
  write_snapshot(path.string(), f, 0.125);
  const auto back = read_snapshot(path.string());
  CHECK(back.t == 0.125);
  CHECK(back.field.grid->n() == 8);
  CHECK(back.field.grid->l_box() == 3.5);
  CHECK(oracle::max_abs_diff(back.field, f) == 0.0);
  CHECK(fs::file_size(path) == 32 + 3 * 512 * 8);
  fs::remove(path);
}

TEST_CASE("header layout") {
  const auto g = Grid::build(8, 2.0);
  const auto path = temp_path("header.bin");
  write_snapshot(path.string(), RealVectorField(g), 0.5);
  std::ifstream is(path, std::ios::binary);
  char buf[32];
  is.read(buf, 32);
  CHECK(std::string(buf, 8) == "NSLSNAP1");
  std::int32_t n, comps;
  double l, t;
  std::memcpy(&n, buf + 8, 4);
  std::memcpy(&l, buf + 12, 8);
  std::memcpy(&t, buf + 20, 8);
  std::memcpy(&comps, buf + 28, 4);
  CHECK(n == 8);
  CHECK(l == 2.0);
  CHECK(t == 0.5);
  CHECK(comps == 3);
  fs::remove(path);
}

TEST_CASE("malformed files are configuration errors") {
  CHECK_THROWS_AS(read_snapshot(temp_path("missing.bin").string()), ConfigError);

  const auto bad = temp_path("badmagic.bin");
  std::ofstream(bad, std::ios::binary) << "NOTASNAPSHOT-----------------------------";
  CHECK_THROWS_AS(read_snapshot(bad.string()), ConfigError);

  const auto g = Grid::build(8, 2.0);
  const auto trunc = temp_path("truncated.bin");
  write_snapshot(trunc.string(), RealVectorField(g), 0.0);
  fs::resize_file(trunc, 32 + 100);
  CHECK_THROWS_AS(read_snapshot(trunc.string()), ConfigError);

  auto f = RealVectorField(g);
  f.samples[1][3] = std::nan("");
  const auto nan = temp_path("nan.bin");
  write_snapshot(nan.string(), f, 0.0);
  CHECK_THROWS_AS(read_snapshot(nan.string()), ConfigError);

  for (const auto& p : {bad, trunc, nan}) fs::remove(p);
}

}
