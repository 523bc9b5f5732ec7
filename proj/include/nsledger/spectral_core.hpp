#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "nsledger/errors.hpp"

namespace nsledger {

using cplx = std::complex<double>;
using ComplexArray = std::vector<cplx>;
using MultiIndex = std::array<int, 3>;

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

// Periodic cube [0, l_box)^3 sampled at n points per axis.
//
// Flat index layout is (iz * n + iy) * n + ix with x fastest. Axis index i
// carries signed wavenumber k = i for i < n/2 and i - n otherwise, so the
// frequency set per axis is {-n/2, ..., n/2 - 1} and xi = k * dxi.
//
// The transform is unitary: u(x) = V^{-1/2} sum_k c_k exp(i xi.x), hence
// sum |c_k|^2 equals the integral of |u|^2 over the box.
class Grid {
 public:
  static GridPtr build(int n, double l_box);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int n() const { return n_; }
  double l_box() const { return l_box_; }
  double dxi() const { return dxi_; }
  double dx() const { return l_box_ / n_; }
  double volume() const { return l_box_ * l_box_ * l_box_; }
  std::size_t size() const { return size_; }

  std::size_t flat(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * n_ + iy) * n_ + ix;
  }
  std::array<int, 3> axes(std::size_t idx) const {
    return {static_cast<int>(idx % n_), static_cast<int>((idx / n_) % n_),
            static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_))};
  }
  int wavenumber(int i) const { return i < n_ / 2 ? i : i - n_; }
  // Signed wavenumber triple of a flat index.
  std::array<int, 3> k(std::size_t idx) const;
  // Continuous frequency component xi_axis at a flat index.
  double xi(std::size_t idx, int axis) const { return xi_axis_[axes(idx)[axis]]; }
  double xi_norm(std::size_t idx) const { return xi_norm_[idx]; }
  const std::vector<double>& xi_axis() const { return xi_axis_; }
  // Flat index of -k.
  std::size_t mirror(std::size_t idx) const;
  // Any axis at the Nyquist index n/2.
  bool nyquist(std::size_t idx) const { return (flags_[idx] & kNyquist) != 0; }
  // Kept by the 2/3 rule (3|k_i| < n on every axis); never true at Nyquist.
  bool retained(std::size_t idx) const { return (flags_[idx] & kRetained) != 0; }
  // Some axis has |k_i| > 2n/9: the upper third of the retained band.
  bool tail(std::size_t idx) const { return (flags_[idx] & kTail) != 0; }
  // Index k = (kx, ky, kz) mapped to storage; wavenumbers taken modulo n.
  std::size_t index_of(int kx, int ky, int kz) const;

  // In-place unitary transforms over n^3 complex values.
  void forward(cplx* data) const;
  void inverse(cplx* data) const;

  bool same_as(const Grid& other) const {
    return n_ == other.n_ && l_box_ == other.l_box_;
  }

 private:
  Grid(int n, double l_box);

  static constexpr std::uint8_t kNyquist = 1;
  static constexpr std::uint8_t kRetained = 2;
  static constexpr std::uint8_t kTail = 4;

  int n_;
  double l_box_;
  double dxi_;
  std::size_t size_;
  std::vector<double> xi_axis_;
  std::vector<double> xi_norm_;
  std::vector<std::uint8_t> flags_;
  void* plan_forward_ = nullptr;
  void* plan_inverse_ = nullptr;
};

inline GridPtr build_grid(int n, double l_box) { return Grid::build(n, l_box); }

void require_same_grid(const Grid& a, const Grid& b);

struct SpectralScalarField {
  GridPtr grid;
  ComplexArray coeffs;

  explicit SpectralScalarField(GridPtr g);
};

struct RealVectorField {
  GridPtr grid;
  std::array<std::vector<double>, 3> samples;

  explicit RealVectorField(GridPtr g);
  double max_magnitude() const;
};

// Three Fourier coefficient arrays of a real vector field.
struct SpectralVectorField {
  GridPtr grid;
  std::array<ComplexArray, 3> coeffs;
  // Cached knowledge that the field is divergence free; never inferred.
  bool solenoidal = false;

  explicit SpectralVectorField(GridPtr g);

  cplx& at(int comp, std::size_t idx) { return coeffs[comp][idx]; }
  const cplx& at(int comp, std::size_t idx) const { return coeffs[comp][idx]; }

  SpectralVectorField& operator+=(const SpectralVectorField& o);
  SpectralVectorField& operator-=(const SpectralVectorField& o);
  SpectralVectorField& operator*=(double a);
  // this += a * o
  SpectralVectorField& axpy(double a, const SpectralVectorField& o);
};

SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b);
SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b);
SpectralVectorField operator*(double a, SpectralVectorField b);

SpectralVectorField transform_forward(const RealVectorField& f);
RealVectorField transform_inverse(const SpectralVectorField& w);
SpectralScalarField transform_forward(const std::vector<double>& f, GridPtr grid);
std::vector<double> transform_inverse(const SpectralScalarField& p);

// Multiplies every coefficient by (i xi)^beta and zeroes Nyquist modes.
SpectralVectorField spectral_derivative(const SpectralVectorField& w, MultiIndex beta);
SpectralScalarField spectral_derivative(const SpectralScalarField& p, MultiIndex beta);

// Applies I - xi xi^T / |xi|^2 per mode; the zero mode passes through.
SpectralVectorField leray_project(const SpectralVectorField& w);
// Zeroes modes outside the 2/3 band and all Nyquist modes.
SpectralVectorField dealias(const SpectralVectorField& w);
void dealias_in_place(SpectralVectorField& w);
void zero_nyquist(SpectralVectorField& w);

double l2_inner(const SpectralVectorField& a, const SpectralVectorField& b);
double l2_norm_squared(const SpectralVectorField& a);

SpectralScalarField divergence(const SpectralVectorField& w);
SpectralVectorField curl(const SpectralVectorField& w);
SpectralVectorField gradient(const SpectralScalarField& p);

// max_xi |xi.w(xi)| / |xi| divided by max_xi |w(xi)|; 0 for the zero field.
double solenoidality_defect(const SpectralVectorField& w);
// max_k |c(k) - conj(c(-k))| divided by max |c|; 0 for the zero field.
double hermitian_defect(const SpectralVectorField& w);
double hermitian_defect(const SpectralScalarField& p);

int order(const MultiIndex& beta);
// All multi-indices with |beta| == m, in lexicographic order.
std::vector<MultiIndex> multi_indices_of_order(int m);

// Multiplies each coefficient by symbol(|xi|).
template <class Symbol>
SpectralVectorField apply_radial_symbol(const SpectralVectorField& w, Symbol&& symbol) {
  SpectralVectorField out(w.grid);
  const Grid& g = *w.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double m = symbol(g.xi_norm(i));
    for (int c = 0; c < 3; ++c) out.coeffs[c][i] = m * w.coeffs[c][i];
  }
  out.solenoidal = w.solenoidal;
  return out;
}

}  // namespace nsledger
