#pragma once

#include <cstdint>
#include <string>

#include "nsledger/spectral_core.hpp"

namespace nsledger {

enum class FieldFamily { taylor_green, abc_flow, random_solenoidal };

FieldFamily parse_family(const std::string& name);
const char* to_string(FieldFamily f);

struct FieldSpec {
  FieldFamily family = FieldFamily::random_solenoidal;
  std::uint64_t seed = 0;
  // Radial amplitude |xi|^slope * exp(-|xi|^2 / 4), tapered to zero at xi_max.
  double spectrum_slope = 1.0;
  // Nonpositive selects the whole retained band.
  double xi_max = 1.7;
  double l2_norm_target = 1.0;
  // Wavenumber multiple of dxi used by the closed-form families.
  int mode = 1;
  double abc_a = 1.0, abc_b = 1.0, abc_c = 1.0;
};

// Unnormalized closed-form or random field, solenoidal and dealiased.
SpectralVectorField sample_family(const FieldSpec& spec, const GridPtr& grid);
// sample_family rescaled so that its L2 norm equals spec.l2_norm_target.
SpectralVectorField generate(const FieldSpec& spec, const GridPtr& grid);
// Squared L2 norm of the unnormalized closed-form field on a box of side l_box.
double oracle_energy(const FieldSpec& spec, double l_box);

}  // namespace nsledger
