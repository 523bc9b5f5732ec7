#include "nsledger/synthetic_fields.hpp"

#include <cmath>
#include <random>

#include "nsledger/cutoffs.hpp"

namespace nsledger {

FieldFamily parse_family(const std::string& name) {
  if (name == "taylor_green") return FieldFamily::taylor_green;
  if (name == "abc_flow") return FieldFamily::abc_flow;
  if (name == "random_solenoidal") return FieldFamily::random_solenoidal;
  throw ConfigError("unknown field family: " + name);
}

const char* to_string(FieldFamily f) {
  switch (f) {
    case FieldFamily::taylor_green: return "taylor_green";
    case FieldFamily::abc_flow: return "abc_flow";
    case FieldFamily::random_solenoidal: return "random_solenoidal";
  }
  return "unknown";
}

namespace {

SpectralVectorField closed_form(const FieldSpec& spec, const GridPtr& grid) {
  const Grid& g = *grid;
  if (spec.mode < 1 || 3 * spec.mode >= g.n())
    throw ResolutionError("closed-form mode is outside the dealiased band");
  const double k0 = spec.mode * g.dxi();
  RealVectorField f(grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto a = g.axes(i);
    const double x = k0 * a[0] * g.dx(), y = k0 * a[1] * g.dx(), z = k0 * a[2] * g.dx();
    if (spec.family == FieldFamily::taylor_green) {
      f.samples[0][i] = std::sin(x) * std::cos(y);
      f.samples[1][i] = -std::cos(x) * std::sin(y);
      f.samples[2][i] = 0.0;
    } else {
      f.samples[0][i] = spec.abc_a * std::sin(z) + spec.abc_c * std::cos(y);
      f.samples[1][i] = spec.abc_b * std::sin(x) + spec.abc_a * std::cos(z);
      f.samples[2][i] = spec.abc_c * std::sin(y) + spec.abc_b * std::cos(x);
    }
  }
  SpectralVectorField out = transform_forward(f);
  dealias_in_place(out);
  out.solenoidal = true;
  return out;
}

SpectralVectorField random_field(const FieldSpec& spec, const GridPtr& grid) {
  const Grid& g = *grid;
  const double guard = (2.0 * g.n() / 9.0) * g.dxi();
  if (spec.xi_max > guard)
    throw ResolutionError("requested spectrum extends into the upper third of the grid band");
  const double xi_max = spec.xi_max > 0.0 ? spec.xi_max : std::sqrt(3.0) * (g.n() / 3) * g.dxi();
  // phi-based taper: 1 below 0.75 xi_max, 0 at and beyond xi_max.
  auto taper = [xi_max](double r) {
    return phi_eval(std::max(0.0, 1.0 + (r - 0.75 * xi_max) / (0.25 * xi_max)));
  };

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralVectorField out(grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.retained(i)) continue;
    const std::size_t m = g.mirror(i);
    if (m <= i) continue;  // each conjugate pair is drawn once, from its lower index
    const double r = g.xi_norm(i);
    const double amp = std::pow(r, spec.spectrum_slope) * std::exp(-0.25 * r * r) * taper(r);
    if (amp == 0.0) continue;
    for (int c = 0; c < 3; ++c) {
      const double re = normal(rng), im = normal(rng);
      out.coeffs[c][i] = amp * cplx(re, im);
      out.coeffs[c][m] = std::conj(out.coeffs[c][i]);
    }
  }
  out = leray_project(out);
  dealias_in_place(out);
  for (int c = 0; c < 3; ++c) out.coeffs[c][0] = cplx(0.0, 0.0);
  return out;
}

}  // namespace

SpectralVectorField sample_family(const FieldSpec& spec, const GridPtr& grid) {
  if (spec.family == FieldFamily::random_solenoidal) return random_field(spec, grid);
  return closed_form(spec, grid);
}

SpectralVectorField generate(const FieldSpec& spec, const GridPtr& grid) {
  if (!(spec.l2_norm_target > 0.0)) throw ConfigError("l2 norm target must be positive");
  SpectralVectorField out = sample_family(spec, grid);
  const double norm2 = l2_norm_squared(out);
  if (!(norm2 > 0.0)) throw ResolutionError("field family has no resolvable modes on this grid");
  out *= spec.l2_norm_target / std::sqrt(norm2);
  return out;
}

double oracle_energy(const FieldSpec& spec, double l_box) {
  const double v = l_box * l_box * l_box;
  switch (spec.family) {
    case FieldFamily::taylor_green:
      // two components, each a product of two squared harmonics averaging 1/4
      return 0.5 * v;
    case FieldFamily::abc_flow:
      // every component is a sum of two orthogonal harmonics averaging 1/2
      return (spec.abc_a * spec.abc_a + spec.abc_b * spec.abc_b + spec.abc_c * spec.abc_c) * v;
    case FieldFamily::random_solenoidal:
      break;
  }
  throw ConfigError("random_solenoidal has no closed-form energy");
}

}  // namespace nsledger
