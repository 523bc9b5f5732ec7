#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nsledger/similarity.hpp"
#include "nsledger/spectral_core.hpp"

namespace nsledger {

struct SimState {
  double t = 0.0;
  SpectralVectorField u_hat;
};

enum class ResolutionPolicy { error, warn };

struct TrajectoryConfig {
  int n = 64;
  double l_box = 0.0;  // 0 selects 16 pi
  double t_horizon = 1.0;
  double dt_max = 0.01;
  double cfl = 0.5;
  std::vector<double> sample_taus;
  double delta = 0.05;
  double alpha = 0.1;
  bool nonlinear = true;
  // Rescale the initial field to norm delta on entry.
  bool normalize = true;
  ResolutionPolicy resolution = ResolutionPolicy::error;
  double tail_threshold = 1e-8;

  void validate() const;
  double box() const;
};

// taus = tau_min, tau_min + dtau, ..., up to tau_max inclusive.
std::vector<double> uniform_taus(double tau_min, double tau_max, double dtau);

struct Snapshot {
  SimilarityFrame frame;
  SpectralVectorField u_hat;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::size_t steps = 0;
  bool resolution_ok = true;
  double max_tail_fraction = 0.0;
  double max_solenoidality_defect = 0.0;
};

// P[(u.grad)u] with the product formed in physical space from dealiased
// inputs and the result restricted to the 2/3 band. If umax is given it
// receives max |u| over the collocation points.
SpectralVectorField nonlinear_term(const SpectralVectorField& u, double* umax = nullptr);
// (u.grad)u without projection, dealiased.
SpectralVectorField advection_raw(const SpectralVectorField& u);

class NavierStokesSolver {
 public:
  NavierStokesSolver(double dt_max, double cfl, bool nonlinear = true)
      : dt_max_(dt_max), cfl_(cfl), nonlinear_(nonlinear) {}

  // -P[(u.grad)u] - |xi|^2 u.
  SpectralVectorField rhs(const SpectralVectorField& u) const;
  // min(dt_max, cfl * dx / max|u|).
  double max_stable_dt(const SpectralVectorField& u) const;
  // One integrating-factor RK4 step; rejects dt <= 0, dt > dt_max and CFL violations.
  SimState step(const SimState& s, double dt) const;

  bool nonlinear() const { return nonlinear_; }

 private:
  SpectralVectorField n_term(const SpectralVectorField& u, double* umax) const;
  double dt_max_;
  double cfl_;
  bool nonlinear_;
};

using SnapshotSink = std::function<void(const Snapshot&)>;

// Integrates from t = 0 and records a snapshot at every requested tau.
Trajectory simulate(const SpectralVectorField& u0, const TrajectoryConfig& cfg);
// Same integration, handing each snapshot to sink instead of storing it.
Trajectory simulate(const SpectralVectorField& u0, const TrajectoryConfig& cfg,
                    const SnapshotSink& sink);

// Fraction of energy held by modes with some |k_i| > 2n/9.
double spectral_tail_fraction(const SpectralVectorField& u);

// Smooth solenoidal test field theta(t) Phi(x), theta a C-infinity bump on (t_a, t_b).
struct WeakTestField {
  SpectralVectorField phi;
  double t_a = 0.0;
  double t_b = 1.0;
};

struct WeakResidual {
  double raw = 0.0;
  // Time integral of |theta'| |u||Phi| + |theta| |grad u||grad Phi| + |theta| |N||Phi|.
  double magnitude = 0.0;
  double normalized = 0.0;
};

double bump(double t, double t_a, double t_b);
double bump_derivative(double t, double t_a, double t_b);

// Trapezoidal quadrature in tau of the space-time weak form; the window
// (t_a, t_b) must lie inside the sampled time range.
WeakResidual weak_residual(const std::vector<Snapshot>& snaps, const WeakTestField& test);

// lambda u(lambda x) on the same box, placed on target (by default u's grid).
SpectralVectorField rescale_data(const SpectralVectorField& u, int lambda,
                                 const GridPtr& target = nullptr);

// p with -Laplace p = d_i d_j (u_i u_j): p = i xi.N / |xi|^2, zero mean.
SpectralScalarField pressure_recover(const SpectralVectorField& u);

}  // namespace nsledger
