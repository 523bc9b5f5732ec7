#include "nsledger/spectral_core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace nsledger {

namespace {

// FFTW planning is not thread safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Grid::Grid(int n, double l_box)
    : n_(n), l_box_(l_box), dxi_(2.0 * std::numbers::pi / l_box),
      size_(static_cast<std::size_t>(n) * n * n) {
  xi_axis_.resize(n_);
  for (int i = 0; i < n_; ++i) xi_axis_[i] = wavenumber(i) * dxi_;

  xi_norm_.resize(size_);
  flags_.assign(size_, 0);
  for (int iz = 0; iz < n_; ++iz) {
    for (int iy = 0; iy < n_; ++iy) {
      for (int ix = 0; ix < n_; ++ix) {
        const std::size_t idx = flat(ix, iy, iz);
        const double a = xi_axis_[ix], b = xi_axis_[iy], c = xi_axis_[iz];
        xi_norm_[idx] = std::sqrt(a * a + b * b + c * c);
        std::uint8_t f = 0;
        const int h = n_ / 2;
        if (ix == h || iy == h || iz == h) f |= kNyquist;
        bool keep = true, tail = false;
        for (int i : {ix, iy, iz}) {
          const int k = std::abs(wavenumber(i));
          if (3 * k >= n_) keep = false;
          if (9 * k > 2 * n_) tail = true;
        }
        if (keep && !(f & kNyquist)) f |= kRetained;
        if (tail) f |= kTail;
        flags_[idx] = f;
      }
    }
  }

  std::lock_guard<std::mutex> lock(planner_mutex());
  cplx* buf = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * size_));
  plan_forward_ = fftw_plan_dft_3d(n_, n_, n_, as_fftw(buf), as_fftw(buf), FFTW_FORWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_inverse_ = fftw_plan_dft_3d(n_, n_, n_, as_fftw(buf), as_fftw(buf), FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
}

Grid::~Grid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_forward_) fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  if (plan_inverse_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
}

GridPtr Grid::build(int n, double l_box) {
  if (n < 8 || n % 2 != 0)
    throw ConfigError("grid size must be an even integer >= 8, got " + std::to_string(n));
  if (!(l_box > 0.0) || !std::isfinite(l_box))
    throw ConfigError("box length must be positive and finite");
  return GridPtr(new Grid(n, l_box));
}

std::array<int, 3> Grid::k(std::size_t idx) const {
  const auto a = axes(idx);
  return {wavenumber(a[0]), wavenumber(a[1]), wavenumber(a[2])};
}

std::size_t Grid::mirror(std::size_t idx) const {
  const auto a = axes(idx);
  auto m = [this](int i) { return i == 0 ? 0 : n_ - i; };
  return flat(m(a[0]), m(a[1]), m(a[2]));
}

std::size_t Grid::index_of(int kx, int ky, int kz) const {
  auto w = [this](int k) { return ((k % n_) + n_) % n_; };
  return flat(w(kx), w(ky), w(kz));
}

void Grid::forward(cplx* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_forward_), as_fftw(data), as_fftw(data));
  const double scale = std::sqrt(volume()) / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) data[i] *= scale;
}

void Grid::inverse(cplx* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_inverse_), as_fftw(data), as_fftw(data));
  const double scale = 1.0 / std::sqrt(volume());
  for (std::size_t i = 0; i < size_; ++i) data[i] *= scale;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!a.same_as(b)) throw GridMismatch("fields live on different grids");
}

SpectralScalarField::SpectralScalarField(GridPtr g) : grid(std::move(g)) {
  coeffs.assign(grid->size(), cplx(0.0, 0.0));
}

RealVectorField::RealVectorField(GridPtr g) : grid(std::move(g)) {
  for (auto& s : samples) s.assign(grid->size(), 0.0);
}

double RealVectorField::max_magnitude() const {
  double m = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double a = samples[0][i], b = samples[1][i], c = samples[2][i];
    m = std::max(m, a * a + b * b + c * c);
  }
  return std::sqrt(m);
}

SpectralVectorField::SpectralVectorField(GridPtr g) : grid(std::move(g)) {
  for (auto& c : coeffs) c.assign(grid->size(), cplx(0.0, 0.0));
}

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& o) {
  require_same_grid(*grid, *o.grid);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < grid->size(); ++i) coeffs[c][i] += o.coeffs[c][i];
  solenoidal = solenoidal && o.solenoidal;
  return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& o) {
  return axpy(-1.0, o);
}

SpectralVectorField& SpectralVectorField::operator*=(double a) {
  for (auto& comp : coeffs)
    for (auto& v : comp) v *= a;
  return *this;
}

SpectralVectorField& SpectralVectorField::axpy(double a, const SpectralVectorField& o) {
  require_same_grid(*grid, *o.grid);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < grid->size(); ++i) coeffs[c][i] += a * o.coeffs[c][i];
  solenoidal = solenoidal && o.solenoidal;
  return *this;
}

SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) {
  a += b;
  return a;
}
SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) {
  a -= b;
  return a;
}
SpectralVectorField operator*(double a, SpectralVectorField b) {
  b *= a;
  return b;
}

SpectralVectorField transform_forward(const RealVectorField& f) {
  const Grid& g = *f.grid;
  SpectralVectorField out(f.grid);
  for (int c = 0; c < 3; ++c) {
    if (f.samples[c].size() != g.size()) throw GridMismatch("sample array has wrong size");
    auto& dst = out.coeffs[c];
    for (std::size_t i = 0; i < g.size(); ++i) dst[i] = cplx(f.samples[c][i], 0.0);
    g.forward(dst.data());
  }
  return out;
}

RealVectorField transform_inverse(const SpectralVectorField& w) {
  const Grid& g = *w.grid;
  RealVectorField out(w.grid);
  ComplexArray buf(g.size());
  for (int c = 0; c < 3; ++c) {
    std::copy(w.coeffs[c].begin(), w.coeffs[c].end(), buf.begin());
    g.inverse(buf.data());
    for (std::size_t i = 0; i < g.size(); ++i) out.samples[c][i] = buf[i].real();
  }
  return out;
}

SpectralScalarField transform_forward(const std::vector<double>& f, GridPtr grid) {
  if (f.size() != grid->size()) throw GridMismatch("sample array has wrong size");
  SpectralScalarField out(grid);
  for (std::size_t i = 0; i < f.size(); ++i) out.coeffs[i] = cplx(f[i], 0.0);
  grid->forward(out.coeffs.data());
  return out;
}

std::vector<double> transform_inverse(const SpectralScalarField& p) {
  ComplexArray buf = p.coeffs;
  p.grid->inverse(buf.data());
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
  return out;
}

int order(const MultiIndex& beta) { return beta[0] + beta[1] + beta[2]; }

std::vector<MultiIndex> multi_indices_of_order(int m) {
  std::vector<MultiIndex> out;
  for (int a = m; a >= 0; --a)
    for (int b = m - a; b >= 0; --b) out.push_back({a, b, m - a - b});
  return out;
}

namespace {

void check_beta(const MultiIndex& beta) {
  for (int b : beta)
    if (b < 0) throw DomainError("negative derivative order");
  if (order(beta) > 3) throw DomainError("derivative order above 3 is unsupported");
}

// (i xi)^beta at a flat index.
cplx derivative_symbol(const Grid& g, std::size_t idx, const MultiIndex& beta) {
  cplx m(1.0, 0.0);
  for (int a = 0; a < 3; ++a) {
    const cplx f(0.0, g.xi(idx, a));
    for (int p = 0; p < beta[a]; ++p) m *= f;
  }
  return m;
}

}  // namespace

SpectralVectorField spectral_derivative(const SpectralVectorField& w, MultiIndex beta) {
  check_beta(beta);
  const Grid& g = *w.grid;
  SpectralVectorField out(w.grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.nyquist(i)) continue;
    const cplx m = derivative_symbol(g, i, beta);
    for (int c = 0; c < 3; ++c) out.coeffs[c][i] = m * w.coeffs[c][i];
  }
  out.solenoidal = w.solenoidal;
  return out;
}

SpectralScalarField spectral_derivative(const SpectralScalarField& p, MultiIndex beta) {
  check_beta(beta);
  const Grid& g = *p.grid;
  SpectralScalarField out(p.grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.nyquist(i)) continue;
    out.coeffs[i] = derivative_symbol(g, i, beta) * p.coeffs[i];
  }
  return out;
}

SpectralVectorField leray_project(const SpectralVectorField& w) {
  const Grid& g = *w.grid;
  SpectralVectorField out(w.grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.nyquist(i)) continue;
    const double k2 = g.xi_norm(i) * g.xi_norm(i);
    if (k2 == 0.0) {
      for (int c = 0; c < 3; ++c) out.coeffs[c][i] = w.coeffs[c][i];
      continue;
    }
    const double x[3] = {g.xi(i, 0), g.xi(i, 1), g.xi(i, 2)};
    const cplx dot = x[0] * w.coeffs[0][i] + x[1] * w.coeffs[1][i] + x[2] * w.coeffs[2][i];
    for (int c = 0; c < 3; ++c) out.coeffs[c][i] = w.coeffs[c][i] - (x[c] / k2) * dot;
  }
  out.solenoidal = true;
  return out;
}

void dealias_in_place(SpectralVectorField& w) {
  const Grid& g = *w.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.retained(i)) continue;
    for (int c = 0; c < 3; ++c) w.coeffs[c][i] = cplx(0.0, 0.0);
  }
}

SpectralVectorField dealias(const SpectralVectorField& w) {
  SpectralVectorField out = w;
  dealias_in_place(out);
  return out;
}

void zero_nyquist(SpectralVectorField& w) {
  const Grid& g = *w.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.nyquist(i)) continue;
    for (int c = 0; c < 3; ++c) w.coeffs[c][i] = cplx(0.0, 0.0);
  }
}

double l2_inner(const SpectralVectorField& a, const SpectralVectorField& b) {
  require_same_grid(*a.grid, *b.grid);
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto& x = a.coeffs[c];
    const auto& y = b.coeffs[c];
    for (std::size_t i = 0; i < x.size(); ++i)
      s += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
  }
  return s;
}

double l2_norm_squared(const SpectralVectorField& a) { return l2_inner(a, a); }

SpectralScalarField divergence(const SpectralVectorField& w) {
  const Grid& g = *w.grid;
  SpectralScalarField out(w.grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.nyquist(i)) continue;
    cplx d(0.0, 0.0);
    for (int c = 0; c < 3; ++c) d += cplx(0.0, g.xi(i, c)) * w.coeffs[c][i];
    out.coeffs[i] = d;
  }
  return out;
}

SpectralVectorField curl(const SpectralVectorField& w) {
  const Grid& g = *w.grid;
  SpectralVectorField out(w.grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.nyquist(i)) continue;
    const cplx kx(0.0, g.xi(i, 0)), ky(0.0, g.xi(i, 1)), kz(0.0, g.xi(i, 2));
    const cplx a = w.coeffs[0][i], b = w.coeffs[1][i], c = w.coeffs[2][i];
    out.coeffs[0][i] = ky * c - kz * b;
    out.coeffs[1][i] = kz * a - kx * c;
    out.coeffs[2][i] = kx * b - ky * a;
  }
  out.solenoidal = true;
  return out;
}

SpectralVectorField gradient(const SpectralScalarField& p) {
  const Grid& g = *p.grid;
  SpectralVectorField out(p.grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.nyquist(i)) continue;
    for (int c = 0; c < 3; ++c) out.coeffs[c][i] = cplx(0.0, g.xi(i, c)) * p.coeffs[i];
  }
  return out;
}

double solenoidality_defect(const SpectralVectorField& w) {
  const Grid& g = *w.grid;
  double worst = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double m2 = 0.0;
    for (int c = 0; c < 3; ++c) m2 += std::norm(w.coeffs[c][i]);
    peak = std::max(peak, std::sqrt(m2));
    const double k = g.xi_norm(i);
    if (k == 0.0) continue;
    cplx d(0.0, 0.0);
    for (int c = 0; c < 3; ++c) d += g.xi(i, c) * w.coeffs[c][i];
    worst = std::max(worst, std::abs(d) / k);
  }
  return peak > 0.0 ? worst / peak : 0.0;
}

namespace {

double hermitian_defect_of(const Grid& g, const ComplexArray& a, double& peak) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    peak = std::max(peak, std::abs(a[i]));
    worst = std::max(worst, std::abs(a[i] - std::conj(a[g.mirror(i)])));
  }
  return worst;
}

}  // namespace

double hermitian_defect(const SpectralVectorField& w) {
  double peak = 0.0, worst = 0.0;
  for (int c = 0; c < 3; ++c)
    worst = std::max(worst, hermitian_defect_of(*w.grid, w.coeffs[c], peak));
  return peak > 0.0 ? worst / peak : 0.0;
}

double hermitian_defect(const SpectralScalarField& p) {
  double peak = 0.0;
  const double worst = hermitian_defect_of(*p.grid, p.coeffs, peak);
  return peak > 0.0 ? worst / peak : 0.0;
}

}  // namespace nsledger
