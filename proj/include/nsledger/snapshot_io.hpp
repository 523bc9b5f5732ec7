#pragma once

#include <string>

#include "nsledger/spectral_core.hpp"

namespace nsledger {

// Binary snapshot layout, all little endian:
//   offset  0  char[8]  magic "NSLSNAP1"
//   offset  8  int32    n
//   offset 12  float64  l_box
//   offset 20  float64  t
//   offset 28  int32    component count (3)
//   offset 32  float64  samples, component major, x fastest within a component
struct SnapshotFile {
  RealVectorField field;
  double t = 0.0;
};

void write_snapshot(const std::string& path, const RealVectorField& f, double t);
SnapshotFile read_snapshot(const std::string& path);

}  // namespace nsledger
