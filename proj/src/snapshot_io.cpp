#include "nsledger/snapshot_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace nsledger {

namespace {

constexpr char kMagic[8] = {'N', 'S', 'L', 'S', 'N', 'A', 'P', '1'};

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ConfigError("truncated snapshot file");
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const RealVectorField& f, double t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open snapshot for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  put<std::int32_t>(os, f.grid->n());
  put<double>(os, f.grid->l_box());
  put<double>(os, t);
  put<std::int32_t>(os, 3);
  for (const auto& comp : f.samples)
    os.write(reinterpret_cast<const char*>(comp.data()),
             static_cast<std::streamsize>(comp.size() * sizeof(double)));
  if (!os) throw ConfigError("failed writing snapshot: " + path);
}

SnapshotFile read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open snapshot: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ConfigError("not a snapshot file: " + path);
  const auto n = get<std::int32_t>(is);
  const auto l_box = get<double>(is);
  const auto t = get<double>(is);
  const auto ncomp = get<std::int32_t>(is);
  if (ncomp != 3) throw ConfigError("snapshot must hold 3 components");
  SnapshotFile out{RealVectorField(Grid::build(n, l_box)), t};
  for (auto& comp : out.field.samples) {
    is.read(reinterpret_cast<char*>(comp.data()),
            static_cast<std::streamsize>(comp.size() * sizeof(double)));
    if (!is) throw ConfigError("truncated snapshot file");
    for (double v : comp)
      if (!std::isfinite(v)) throw ConfigError("snapshot holds non-finite samples");
  }
  return out;
}

}  // namespace nsledger
