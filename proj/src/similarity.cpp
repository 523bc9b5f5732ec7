#include "nsledger/similarity.hpp"

#include <cmath>

namespace nsledger {

namespace {

void require_horizon(double t_horizon) {
  if (!(t_horizon > 0.0) || !std::isfinite(t_horizon))
    throw DomainError("horizon must be positive and finite");
}

// T - t without cancellation for the common T = 1 case.
double remaining(double t, double t_horizon) { return t_horizon - t; }

}  // namespace

SimilarityFrame make_frame(double t, double t_horizon) {
  require_horizon(t_horizon);
  if (!(t >= 0.0)) throw DomainError("physical time must be nonnegative");
  if (!(t < t_horizon)) throw DomainError("physical time must stay below the horizon");
  SimilarityFrame fr;
  fr.t_horizon = t_horizon;
  fr.t = t;
  fr.tau = t_horizon == 1.0 ? -std::log1p(-t) : -std::log(remaining(t, t_horizon));
  fr.scale = std::sqrt(remaining(t, t_horizon));
  return fr;
}

double t_of_tau(double tau, double t_horizon) {
  require_horizon(t_horizon);
  if (t_horizon == 1.0) return -std::expm1(-tau);
  return t_horizon - std::exp(-tau);
}

SimilarityFrame frame_at_tau(double tau, double t_horizon) {
  require_horizon(t_horizon);
  SimilarityFrame fr;
  fr.t_horizon = t_horizon;
  fr.tau = tau;
  fr.t = t_of_tau(tau, t_horizon);
  if (std::abs(fr.t) < 1e-14 * t_horizon) fr.t = 0.0;  // tau = -ln T lands on t = 0
  fr.scale = std::exp(-0.5 * tau);
  if (!(fr.t < t_horizon)) throw DomainError("tau maps beyond the horizon");
  return fr;
}

double similarity_norm(const SpectralVectorField& u, const SimilarityFrame& fr, MultiIndex beta) {
  const double d = l2_norm_squared(spectral_derivative(u, beta));
  return std::pow(fr.scale, 2.0 * order(beta) - 1.0) * d;
}

SpectralVectorField similarity_filter(const SpectralVectorField& u, const SimilarityFrame& fr,
                                      const CutoffProfile& psi) {
  return apply_profile(u, psi, fr.scale);
}

double similarity_filtered_energy(const SpectralVectorField& u, const SimilarityFrame& fr,
                                  const CutoffProfile& psi) {
  return l2_norm_squared(similarity_filter(u, fr, psi)) / fr.scale;
}

double blowup_rate_ratio(double sup_norm, const SimilarityFrame& fr) {
  if (!(sup_norm >= 0.0)) throw DomainError("sup norm must be nonnegative");
  return sup_norm * fr.scale;
}

}  // namespace nsledger
