#include "nsledger/cutoffs.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <set>

namespace nsledger {

namespace {

// Transition pieces on (1,2): a = g(2 - r), b = g(r - 1), g(s) = exp(-1/s).
struct Transition {
  double a, b;
  explicit Transition(double r) : a(std::exp(-1.0 / (2.0 - r))), b(std::exp(-1.0 / (r - 1.0))) {}
  double phi() const { return a / (a + b); }
  double one_minus_phi() const { return b / (a + b); }
  double slope(double r) const {
    const double inv = 1.0 / ((2.0 - r) * (2.0 - r)) + 1.0 / ((r - 1.0) * (r - 1.0));
    const double den = (a + b) * (a + b);
    return -a * b * inv / den;
  }
};

void require_radius(double r) {
  if (!(r >= 0.0)) throw DomainError("radius must be nonnegative");
}

double beta_of(double alpha) { return 0.5 + 2.0 * alpha; }
double r0_of(double alpha) { return 0.5 + alpha; }

}  // namespace

const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::phi: return "phi";
    case ProfileKind::one_minus_phi: return "one_minus_phi";
    case ProfileKind::tilde: return "tilde";
    case ProfileKind::chi: return "chi";
  }
  return "unknown";
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.125)) throw DomainError("alpha must lie in (0, 1/8)");
}

double phi_eval(double r) {
  require_radius(r);
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  return Transition(r).phi();
}

double phi_slope(double r) {
  require_radius(r);
  if (r <= 1.0 || r >= 2.0) return 0.0;
  return Transition(r).slope(r);
}

double chi_eval(double r, double alpha) {
  require_alpha(alpha);
  return CutoffProfile::chi(alpha).value(r);
}

CutoffProfile CutoffProfile::chi(double alpha) {
  require_alpha(alpha);
  return CutoffProfile(ProfileKind::chi, alpha);
}

double CutoffProfile::value(double r) const {
  require_radius(r);
  switch (kind_) {
    case ProfileKind::phi: return phi_eval(r);
    case ProfileKind::one_minus_phi:
      if (r <= 1.0) return 0.0;
      if (r >= 2.0) return 1.0;
      return Transition(r).one_minus_phi();
    case ProfileKind::tilde: {
      if (r <= 1.0) return 0.0;
      if (r >= 2.0) return 1.0;
      const Transition t(r);
      return std::sqrt(t.one_minus_phi() * (1.0 + t.phi()));
    }
    case ProfileKind::chi: {
      const double beta = beta_of(alpha_), r0 = r0_of(alpha_);
      if (r == 0.0) return 0.0;
      if (r <= r0) return std::pow(r, beta);
      return std::pow(r0, beta) * phi_eval(r);
    }
  }
  return 0.0;
}

double CutoffProfile::slope(double r) const {
  require_radius(r);
  switch (kind_) {
    case ProfileKind::phi: return phi_slope(r);
    case ProfileKind::one_minus_phi: return -phi_slope(r);
    case ProfileKind::tilde: {
      const double t = value(r);
      return t > 0.0 ? -phi_eval(r) * phi_slope(r) / t : 0.0;
    }
    case ProfileKind::chi: {
      const double beta = beta_of(alpha_), r0 = r0_of(alpha_);
      if (r == 0.0) return std::numeric_limits<double>::infinity();
      if (r <= r0) return beta * std::pow(r, beta - 1.0);
      return std::pow(r0, beta) * phi_slope(r);
    }
  }
  return 0.0;
}

double CutoffProfile::dilation_density(double r) const {
  require_radius(r);
  const double dphi2 = 2.0 * r * phi_eval(r) * phi_slope(r);  // r (phi^2)'
  switch (kind_) {
    case ProfileKind::phi: return dphi2;
    case ProfileKind::one_minus_phi: return -2.0 * r * value(r) * phi_slope(r);
    case ProfileKind::tilde: return -dphi2;
    case ProfileKind::chi: {
      const double beta = beta_of(alpha_), r0 = r0_of(alpha_);
      if (r <= r0) return r == 0.0 ? 0.0 : 2.0 * beta * std::pow(r, 2.0 * beta);
      const double c = std::pow(r0, beta);
      return c * c * dphi2;
    }
  }
  return 0.0;
}

SpectralVectorField apply_profile(const SpectralVectorField& w, const CutoffProfile& psi,
                                  double scale) {
  return apply_radial_symbol(w, [&](double k) { return psi.value(scale * k); });
}

Decomposition decompose(const SpectralVectorField& w, double alpha, double scale) {
  return Decomposition{apply_profile(w, CutoffProfile::phi(), scale),
                       apply_profile(w, CutoffProfile::one_minus_phi(), scale),
                       apply_profile(w, CutoffProfile::tilde(), scale),
                       apply_profile(w, CutoffProfile::chi(alpha), scale)};
}

double dilation_flux(const SpectralVectorField& w, const CutoffProfile& psi, double scale) {
  const Grid& g = *w.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = psi.dilation_density(scale * g.xi_norm(i));
    if (d == 0.0) continue;
    s += d * (std::norm(w.coeffs[0][i]) + std::norm(w.coeffs[1][i]) + std::norm(w.coeffs[2][i]));
  }
  return s;
}

double bernstein_constant(double alpha, double m) {
  require_alpha(alpha);
  if (!(m >= 4.0)) throw DomainError("norm index must lie in [4, inf]");
  const double beta = beta_of(alpha), r0 = r0_of(alpha);
  const double mp = std::isinf(m) ? 1.0 : m / (m - 1.0);   // conjugate exponent
  const double q = 2.0 * mp / (2.0 - mp);                  // 1/mp = 1/q + 1/2
  const double p = 2.0 - beta * q;                         // radial power
  if (!(p > -1.0)) throw NumericalError("divergent radial integral in bernstein_constant");
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double radial = integrator.integrate([p](double r) { return std::pow(r, p); }, 0.0, 2.0);
  const double ball = 4.0 * std::numbers::pi * radial;
  const double hy = std::pow(2.0 * std::numbers::pi, -1.5 * (1.0 - (std::isinf(m) ? 0.0 : 2.0 / m)));
  const double k = std::pow(2.0 / r0, beta);  // sup of (phi/chi) * r^beta on the ball
  return hy * k * std::pow(ball, 1.0 / q);
}

double a_integrand(double r, double alpha) {
  if (r < 0.0 || r > 1.0) throw DomainError("A density is defined on [0, 1]");
  const auto chi = CutoffProfile::chi(alpha);
  const double c2 = chi.value(r) * chi.value(r);
  return -0.25 * chi.dilation_density(r) - r * r * c2 + (0.25 + alpha) * c2;
}

double b_integrand(double r, double alpha) {
  if (r < 1.0 || r > 2.0) throw DomainError("B density is defined on [1, 2]");
  require_alpha(alpha);
  const double c = std::pow(r0_of(alpha), beta_of(alpha));
  const double p = phi_eval(r);
  const double dens = CutoffProfile::phi().dilation_density(r);
  return 0.25 * (1.0 - c * c) * dens - (r * r - 0.25 - alpha) * c * c * p * p;
}

ShellScan scan_sign_integrands(const Grid& g, double alpha, double scale) {
  std::set<long> shells;  // |k|^2 is an integer label for each shell
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto k = g.k(i);
    shells.insert(static_cast<long>(k[0]) * k[0] + static_cast<long>(k[1]) * k[1] +
                  static_cast<long>(k[2]) * k[2]);
  }
  ShellScan out;
  for (long k2 : shells) {
    const double r = scale * g.dxi() * std::sqrt(static_cast<double>(k2));
    if (r <= 1.0) {
      out.max_a = std::max(out.max_a, a_integrand(r, alpha));
      ++out.shells_a;
    }
    if (r >= 1.0 && r <= 2.0) {
      out.max_b = std::max(out.max_b, b_integrand(r, alpha));
      ++out.shells_b;
    }
  }
  return out;
}

void write_profile_table(std::ostream& os, const std::vector<CutoffProfile>& profiles,
                         double r_max, int points) {
  if (points < 2 || !(r_max > 0.0)) throw ConfigError("profile table needs >= 2 points");
  os << "profile,alpha,r,psi,dpsi_dr\n";
  char buf[160];
  for (const auto& p : profiles) {
    for (int j = 0; j < points; ++j) {
      const double r = r_max * j / (points - 1);
      const double d = p.slope(r);
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g\n", to_string(p.kind()),
                    p.alpha(), r, p.value(r), d);
      os << buf;
    }
  }
}

}  // namespace nsledger
