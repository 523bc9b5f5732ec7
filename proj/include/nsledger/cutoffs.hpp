#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "nsledger/spectral_core.hpp"

namespace nsledger {

enum class ProfileKind { phi, one_minus_phi, tilde, chi };

const char* to_string(ProfileKind k);

// Smooth radial cutoff: 1 on [0,1], 0 on [2,inf), nonincreasing.
double phi_eval(double r);
double phi_slope(double r);
// r^beta for r <= r0 and r0^beta * phi(r) beyond, with beta = 1/2 + 2 alpha
// and r0 = 1/2 + alpha.
double chi_eval(double r, double alpha);

// Radial multiplier psi(|xi|) with analytic derivative.
class CutoffProfile {
 public:
  static CutoffProfile phi() { return CutoffProfile(ProfileKind::phi, 0.0); }
  static CutoffProfile one_minus_phi() { return CutoffProfile(ProfileKind::one_minus_phi, 0.0); }
  static CutoffProfile tilde() { return CutoffProfile(ProfileKind::tilde, 0.0); }
  static CutoffProfile chi(double alpha);

  ProfileKind kind() const { return kind_; }
  double alpha() const { return alpha_; }

  double value(double r) const;
  // d psi / dr; +inf for chi at r = 0.
  double slope(double r) const;
  // r * d(psi^2)/dr, finite everywhere including r = 0.
  double dilation_density(double r) const;

 private:
  CutoffProfile(ProfileKind k, double alpha) : kind_(k), alpha_(alpha) {}
  ProfileKind kind_;
  double alpha_;
};

void require_alpha(double alpha);

struct Decomposition {
  SpectralVectorField low;      // phi
  SpectralVectorField high;     // 1 - phi
  SpectralVectorField tilde;    // sqrt(1 - phi^2)
  SpectralVectorField chi_low;  // chi
};

// Coefficient at xi multiplied by psi(scale * |xi|).
SpectralVectorField apply_profile(const SpectralVectorField& w, const CutoffProfile& psi,
                                  double scale = 1.0);
Decomposition decompose(const SpectralVectorField& w, double alpha, double scale = 1.0);

// sum over modes of (s|xi|) (psi^2)'(s|xi|) |w(xi)|^2.
double dilation_flux(const SpectralVectorField& w, const CutoffProfile& psi,
                     double scale = 1.0);

// Hausdorff-Young/Hoelder bound of ||phi f||_{L^m} by ||chi f||_{L^2}, m in [4, inf].
double bernstein_constant(double alpha, double m);

// Mode densities whose shell sums are the dropped linear terms of the
// combined chi/tilde energy balance; both are <= 0 on their ranges.
double a_integrand(double r, double alpha);  // r in [0, 1]
double b_integrand(double r, double alpha);  // r in [1, 2]

struct ShellScan {
  std::size_t shells_a = 0;
  std::size_t shells_b = 0;
  double max_a = -std::numeric_limits<double>::infinity();
  double max_b = -std::numeric_limits<double>::infinity();
  bool nonpositive() const { return max_a <= 0.0 && max_b <= 0.0; }
};

// Evaluates the A and B densities on every distinct radius scale*|xi| of the grid.
ShellScan scan_sign_integrands(const Grid& g, double alpha, double scale = 1.0);

// CSV rows "r,psi,dpsi_dr" for each profile on a uniform r grid.
void write_profile_table(std::ostream& os, const std::vector<CutoffProfile>& profiles,
                         double r_max, int points);

}  // namespace nsledger
