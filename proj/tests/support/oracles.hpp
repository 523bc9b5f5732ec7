#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// the library's transforms: coefficients come from direct summation and
// fields from closed-form samples.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include "nsledger/spectral_core.hpp"

namespace oracle {

using nsledger::cplx;
using nsledger::GridPtr;
using nsledger::RealVectorField;
using nsledger::SpectralVectorField;

inline constexpr double pi = std::numbers::pi;

using VectorFn = std::function<std::array<double, 3>(double, double, double)>;

inline RealVectorField sample(const GridPtr& g, const VectorFn& f) {
  RealVectorField out(g);
  const int n = g->n();
  const double dx = g->dx();
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const auto v = f(ix * dx, iy * dx, iz * dx);
        const std::size_t i = g->flat(ix, iy, iz);
        for (int c = 0; c < 3; ++c) out.samples[c][i] = v[c];
      }
  return out;
}

inline RealVectorField random_physical(const GridPtr& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  RealVectorField out(g);
  for (auto& comp : out.samples)
    for (auto& v : comp) v = nd(rng);
  return out;
}

// c_k = V^{1/2} n^{-3} sum_x f(x) exp(-i xi.x), by direct summation.
inline cplx dft_coefficient(const RealVectorField& f, int comp, int kx, int ky, int kz) {
  const auto& g = *f.grid;
  const int n = g.n();
  const double dxi = g.dxi(), dx = g.dx();
  cplx acc(0.0, 0.0);
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const double phase = dxi * dx * (kx * ix + ky * iy + kz * iz);
        acc += f.samples[comp][g.flat(ix, iy, iz)] * std::polar(1.0, -phase);
      }
  return acc * std::sqrt(g.volume()) / std::pow(double(n), 3);
}

inline double physical_energy(const RealVectorField& f) {
  double s = 0.0;
  for (const auto& comp : f.samples)
    for (double v : comp) s += v * v;
  return s * std::pow(f.grid->dx(), 3);
}

inline double max_abs_diff(const RealVectorField& a, const RealVectorField& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.samples[c].size(); ++i)
      m = std::max(m, std::abs(a.samples[c][i] - b.samples[c][i]));
  return m;
}

inline double max_abs(const RealVectorField& a) {
  double m = 0.0;
  for (const auto& comp : a.samples)
    for (double v : comp) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs_diff(const SpectralVectorField& a, const SpectralVectorField& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.coeffs[c].size(); ++i)
      m = std::max(m, std::abs(a.coeffs[c][i] - b.coeffs[c][i]));
  return m;
}

inline double max_abs(const SpectralVectorField& a) {
  double m = 0.0;
  for (const auto& comp : a.coeffs)
    for (const auto& v : comp) m = std::max(m, std::abs(v));
  return m;
}

// Coefficients below tol times the largest one set to exact zeros.
inline SpectralVectorField clean(SpectralVectorField w, double tol = 1e-12) {
  const double cut = tol * max_abs(w);
  for (auto& comp : w.coeffs)
    for (auto& v : comp)
      if (std::abs(v) < cut) v = cplx(0.0, 0.0);
  return w;
}

// Unit-amplitude Taylor-Green vortex with wavenumber k.
inline VectorFn taylor_green(double k = 1.0) {
  return [k](double x, double y, double) -> std::array<double, 3> {
    return {std::sin(k * x) * std::cos(k * y), -std::cos(k * x) * std::sin(k * y), 0.0};
  };
}

// Divergence-free single Fourier mode: amplitude along y, wave along x.
inline VectorFn shear_mode(double k, double amp = 1.0) {
  return [k, amp](double x, double, double) -> std::array<double, 3> {
    return {0.0, amp * std::sin(k * x), 0.0};
  };
}

}  // namespace oracle
