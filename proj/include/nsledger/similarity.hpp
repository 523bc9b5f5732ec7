#pragma once

#include "nsledger/cutoffs.hpp"
#include "nsledger/spectral_core.hpp"

namespace nsledger {

// Physical time t < T paired with tau = -ln(T - t) and scale s = sqrt(T - t).
struct SimilarityFrame {
  double t_horizon = 1.0;
  double t = 0.0;
  double tau = 0.0;
  double scale = 1.0;
};

SimilarityFrame make_frame(double t, double t_horizon);
SimilarityFrame frame_at_tau(double tau, double t_horizon);
double t_of_tau(double tau, double t_horizon);

// int |D^beta w|^2 dy = s^(2|beta| - 1) int |D^beta u|^2 dx.
double similarity_norm(const SpectralVectorField& u, const SimilarityFrame& fr, MultiIndex beta);
// Coefficient at physical frequency xi multiplied by psi(s |xi|).
SpectralVectorField similarity_filter(const SpectralVectorField& u, const SimilarityFrame& fr,
                                      const CutoffProfile& psi);
// s^-1 sum |psi(s|xi|) u(xi)|^2.
double similarity_filtered_energy(const SpectralVectorField& u, const SimilarityFrame& fr,
                                  const CutoffProfile& psi);
// sup |u| * s, which equals sup |w|.
double blowup_rate_ratio(double sup_norm, const SimilarityFrame& fr);

}  // namespace nsledger
