#include "nsledger/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nsledger {

namespace {

// Inverse transform of the dealiased part of one coefficient array.
void to_physical(const Grid& g, const ComplexArray& src, ComplexArray& dst) {
  dst.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) dst[i] = g.retained(i) ? src[i] : cplx(0.0, 0.0);
  g.inverse(dst.data());
}

void restrict_to_band(const Grid& g, ComplexArray& a) {
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g.retained(i)) a[i] = cplx(0.0, 0.0);
}

}  // namespace

SpectralVectorField nonlinear_term(const SpectralVectorField& u, double* umax) {
  const Grid& g = *u.grid;
  const SpectralVectorField om = curl(u);
  std::array<ComplexArray, 3> up, wp;
  for (int c = 0; c < 3; ++c) {
    to_physical(g, u.coeffs[c], up[c]);
    to_physical(g, om.coeffs[c], wp[c]);
  }
  double m2 = 0.0;
  SpectralVectorField cross(u.grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a0 = up[0][i].real(), a1 = up[1][i].real(), a2 = up[2][i].real();
    const double w0 = wp[0][i].real(), w1 = wp[1][i].real(), w2 = wp[2][i].real();
    m2 = std::max(m2, a0 * a0 + a1 * a1 + a2 * a2);
    // (u.grad)u = omega x u + grad |u|^2/2; the gradient is removed by projection.
    cross.coeffs[0][i] = cplx(w1 * a2 - w2 * a1, 0.0);
    cross.coeffs[1][i] = cplx(w2 * a0 - w0 * a2, 0.0);
    cross.coeffs[2][i] = cplx(w0 * a1 - w1 * a0, 0.0);
  }
  if (umax) *umax = std::sqrt(m2);
  for (int c = 0; c < 3; ++c) {
    g.forward(cross.coeffs[c].data());
    restrict_to_band(g, cross.coeffs[c]);
  }
  return leray_project(cross);
}

SpectralVectorField advection_raw(const SpectralVectorField& u) {
  const Grid& g = *u.grid;
  std::array<ComplexArray, 3> up;
  for (int c = 0; c < 3; ++c) to_physical(g, u.coeffs[c], up[c]);
  SpectralVectorField out(u.grid);
  ComplexArray d(g.size());
  for (int j = 0; j < 3; ++j) {
    MultiIndex beta{0, 0, 0};
    beta[j] = 1;
    const SpectralVectorField du = spectral_derivative(u, beta);
    for (int k = 0; k < 3; ++k) {
      to_physical(g, du.coeffs[k], d);
      for (std::size_t i = 0; i < g.size(); ++i) out.coeffs[k][i] += up[j][i].real() * d[i].real();
    }
  }
  for (int c = 0; c < 3; ++c) {
    for (auto& v : out.coeffs[c]) v = cplx(v.real(), 0.0);
    g.forward(out.coeffs[c].data());
    restrict_to_band(g, out.coeffs[c]);
  }
  return out;
}

SpectralVectorField NavierStokesSolver::n_term(const SpectralVectorField& u, double* umax) const {
  if (nonlinear_) {
    SpectralVectorField nt = nonlinear_term(u, umax);
    nt *= -1.0;
    return nt;
  }
  if (umax) *umax = transform_inverse(u).max_magnitude();
  SpectralVectorField zero(u.grid);
  zero.solenoidal = true;
  return zero;
}

SpectralVectorField NavierStokesSolver::rhs(const SpectralVectorField& u) const {
  SpectralVectorField out = n_term(u, nullptr);
  const Grid& g = *u.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.retained(i)) continue;
    const double k2 = g.xi_norm(i) * g.xi_norm(i);
    for (int c = 0; c < 3; ++c) out.coeffs[c][i] -= k2 * u.coeffs[c][i];
  }
  return out;
}

double NavierStokesSolver::max_stable_dt(const SpectralVectorField& u) const {
  const double umax = transform_inverse(u).max_magnitude();
  if (umax == 0.0) return dt_max_;
  return std::min(dt_max_, cfl_ * u.grid->dx() / umax);
}

SimState NavierStokesSolver::step(const SimState& s, double dt) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StepSizeError("time step must be positive");
  if (dt > dt_max_ * (1.0 + 1e-12)) throw StepSizeError("time step exceeds dt_max");
  const SpectralVectorField& u = s.u_hat;
  const Grid& g = *u.grid;

  // Integrating factor over half a step, exact for the viscous term.
  std::vector<double> e(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    e[i] = g.retained(i) ? std::exp(-0.5 * dt * g.xi_norm(i) * g.xi_norm(i)) : 0.0;
  auto mul = [&](const SpectralVectorField& f, int power) {
    SpectralVectorField out = f;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < g.size(); ++i)
        out.coeffs[c][i] *= power == 1 ? e[i] : e[i] * e[i];
    return out;
  };

  double umax = 0.0;
  SpectralVectorField k1 = n_term(u, &umax);
  if (umax > 0.0 && dt > cfl_ * g.dx() / umax * (1.0 + 1e-8))
    throw StepSizeError("time step violates the CFL limit");
  k1 *= dt;

  SpectralVectorField eu = mul(u, 1);
  SpectralVectorField a = eu;
  a.axpy(0.5, mul(k1, 1));
  SpectralVectorField k2 = n_term(a, nullptr);
  k2 *= dt;

  SpectralVectorField b = eu;
  b.axpy(0.5, k2);
  SpectralVectorField k3 = n_term(b, nullptr);
  k3 *= dt;

  SpectralVectorField c = mul(u, 2);
  c += mul(k3, 1);
  SpectralVectorField k4 = n_term(c, nullptr);
  k4 *= dt;

  SpectralVectorField next = mul(u, 2);
  SpectralVectorField mid = k2;
  mid += k3;
  next.axpy(1.0 / 6.0, mul(k1, 2));
  next.axpy(2.0 / 6.0, mul(mid, 1));
  next.axpy(1.0 / 6.0, k4);
  next.solenoidal = true;
  return SimState{s.t + dt, std::move(next)};
}

double TrajectoryConfig::box() const { return l_box > 0.0 ? l_box : 16.0 * std::numbers::pi; }

void TrajectoryConfig::validate() const {
  if (n < 8 || n % 2 != 0) throw ConfigError("n must be an even integer >= 8");
  if (!(t_horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (!(dt_max > 0.0)) throw ConfigError("dt_max must be positive");
  if (!(cfl > 0.0)) throw ConfigError("cfl must be positive");
  if (normalize && !(delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(alpha > 0.0 && alpha < 0.125)) throw ConfigError("alpha must lie in (0, 1/8)");
  if (sample_taus.empty()) throw ConfigError("at least one sample tau is required");
  for (std::size_t i = 1; i < sample_taus.size(); ++i)
    if (!(sample_taus[i] > sample_taus[i - 1])) throw ConfigError("sample taus must increase");
  if (sample_taus.front() < -std::log(t_horizon) - 1e-12)
    throw ConfigError("first sample tau precedes t = 0");
  if (!(tail_threshold > 0.0)) throw ConfigError("tail threshold must be positive");
}

std::vector<double> uniform_taus(double tau_min, double tau_max, double dtau) {
  if (!(dtau > 0.0) || !(tau_max >= tau_min)) throw ConfigError("invalid tau range");
  const long count = std::lround(std::floor((tau_max - tau_min) / dtau + 1e-9));
  std::vector<double> out;
  out.reserve(count + 1);
  for (long j = 0; j <= count; ++j) out.push_back(tau_min + j * dtau);
  return out;
}

double spectral_tail_fraction(const SpectralVectorField& u) {
  const Grid& g = *u.grid;
  double tail = 0.0, total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double e = std::norm(u.coeffs[0][i]) + std::norm(u.coeffs[1][i]) + std::norm(u.coeffs[2][i]);
    total += e;
    if (g.tail(i)) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

Trajectory simulate(const SpectralVectorField& u0, const TrajectoryConfig& cfg) {
  std::vector<Snapshot> snaps;
  Trajectory traj = simulate(u0, cfg, [&snaps](const Snapshot& s) { snaps.push_back(s); });
  traj.snapshots = std::move(snaps);
  return traj;
}

Trajectory simulate(const SpectralVectorField& u0, const TrajectoryConfig& cfg,
                    const SnapshotSink& sink) {
  cfg.validate();
  const GridPtr grid = u0.grid;
  if (grid->n() != cfg.n || std::abs(grid->l_box() - cfg.box()) > 1e-12 * cfg.box())
    throw GridMismatch("initial field does not live on the configured grid");

  SpectralVectorField u = dealias(leray_project(u0));
  if (cfg.normalize) {
    const double norm2 = l2_norm_squared(u);
    if (norm2 > 0.0) u *= cfg.delta / std::sqrt(norm2);
  }
  u.solenoidal = true;

  const NavierStokesSolver solver(cfg.dt_max, cfg.cfl, cfg.nonlinear);
  Trajectory traj;
  SimState state{0.0, std::move(u)};
  for (double tau : cfg.sample_taus) {
    const SimilarityFrame fr = frame_at_tau(tau, cfg.t_horizon);
    const double target = fr.t;
    while (target - state.t > 1e-14 * cfg.t_horizon) {
      const double remaining = target - state.t;
      const double allowed = solver.max_stable_dt(state.u_hat);
      const double nsub = std::max(1.0, std::ceil(remaining / allowed - 1e-9));
      const double h = remaining / nsub;
      state = solver.step(state, h);
      if (nsub == 1.0) state.t = target;
      ++traj.steps;
    }
    const double tail = spectral_tail_fraction(state.u_hat);
    traj.max_tail_fraction = std::max(traj.max_tail_fraction, tail);
    if (tail > cfg.tail_threshold) {
      traj.resolution_ok = false;
      if (cfg.resolution == ResolutionPolicy::error)
        throw ResolutionError("spectral tail fraction " + std::to_string(tail) +
                              " exceeds threshold at tau = " + std::to_string(tau));
    }
    traj.max_solenoidality_defect =
        std::max(traj.max_solenoidality_defect, solenoidality_defect(state.u_hat));
    sink(Snapshot{fr, state.u_hat});
  }
  return traj;
}

double bump(double t, double t_a, double t_b) {
  const double z = (2.0 * t - t_a - t_b) / (t_b - t_a);
  if (std::abs(z) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - z * z));
}

double bump_derivative(double t, double t_a, double t_b) {
  const double z = (2.0 * t - t_a - t_b) / (t_b - t_a);
  if (std::abs(z) >= 1.0) return 0.0;
  const double q = 1.0 - z * z;
  return std::exp(-1.0 / q) * (-2.0 * z / (q * q)) * (2.0 / (t_b - t_a));
}

WeakResidual weak_residual(const std::vector<Snapshot>& snaps, const WeakTestField& test) {
  if (solenoidality_defect(test.phi) > 1e-10) throw DomainError("test field is not solenoidal");
  if (!(test.t_b > test.t_a)) throw DomainError("empty test window");
  if (snaps.size() < 2) throw DomainError("weak residual needs at least two snapshots");
  if (test.t_a < snaps.front().frame.t || test.t_b > snaps.back().frame.t)
    throw DomainError("test window leaves the sampled time range");

  const Grid& g = *test.phi.grid;
  const double phi_norm = std::sqrt(l2_norm_squared(test.phi));
  double grad_phi2 = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.size(); ++i)
      grad_phi2 += g.xi_norm(i) * g.xi_norm(i) * std::norm(test.phi.coeffs[c][i]);
  const double grad_phi = std::sqrt(grad_phi2);

  std::vector<double> f(snaps.size(), 0.0), m(snaps.size(), 0.0);
  for (std::size_t j = 0; j < snaps.size(); ++j) {
    const auto& s = snaps[j];
    require_same_grid(*s.u_hat.grid, g);
    const double th = bump(s.frame.t, test.t_a, test.t_b);
    const double dth = bump_derivative(s.frame.t, test.t_a, test.t_b);
    if (th == 0.0 && dth == 0.0) continue;
    const SpectralVectorField& u = s.u_hat;
    double grad_pair = 0.0, grad_u2 = 0.0;
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double k2 = g.xi_norm(i) * g.xi_norm(i);
        const cplx a = u.coeffs[c][i], b = test.phi.coeffs[c][i];
        grad_pair += k2 * (a.real() * b.real() + a.imag() * b.imag());
        grad_u2 += k2 * std::norm(a);
      }
    }
    const SpectralVectorField nl = nonlinear_term(u);
    const double pair = l2_inner(u, test.phi);
    const double nl_pair = l2_inner(nl, test.phi);
    const double dtdtau = s.frame.scale * s.frame.scale;
    f[j] = (-dth * pair + th * grad_pair + th * nl_pair) * dtdtau;
    m[j] = (std::abs(dth) * std::sqrt(l2_norm_squared(u)) * phi_norm +
            std::abs(th) * std::sqrt(grad_u2) * grad_phi +
            std::abs(th) * std::sqrt(l2_norm_squared(nl)) * phi_norm) * dtdtau;
  }
  WeakResidual out;
  for (std::size_t j = 0; j + 1 < snaps.size(); ++j) {
    const double h = snaps[j + 1].frame.tau - snaps[j].frame.tau;
    out.raw += 0.5 * h * (f[j] + f[j + 1]);
    out.magnitude += 0.5 * h * (m[j] + m[j + 1]);
  }
  out.normalized = out.magnitude > 0.0 ? std::abs(out.raw) / out.magnitude : 0.0;
  return out;
}

SpectralVectorField rescale_data(const SpectralVectorField& u, int lambda, const GridPtr& target) {
  if (lambda < 1) throw ConfigError("rescale factor must be a positive integer");
  const GridPtr dst_grid = target ? target : u.grid;
  const Grid& src = *u.grid;
  const Grid& dst = *dst_grid;
  if (std::abs(src.l_box() - dst.l_box()) > 1e-12 * src.l_box())
    throw GridMismatch("rescaling keeps the box; target box differs");
  SpectralVectorField out(dst_grid);
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (u.coeffs[0][i] == cplx(0.0, 0.0) && u.coeffs[1][i] == cplx(0.0, 0.0) &&
        u.coeffs[2][i] == cplx(0.0, 0.0))
      continue;
    const auto k = src.k(i);
    for (int a = 0; a < 3; ++a)
      if (src.nyquist(i) || 3 * std::abs(lambda * k[a]) >= dst.n())
        throw ResolutionError("rescaled frequencies escape the target band");
    const std::size_t j = dst.index_of(lambda * k[0], lambda * k[1], lambda * k[2]);
    for (int c = 0; c < 3; ++c) out.coeffs[c][j] = static_cast<double>(lambda) * u.coeffs[c][i];
  }
  out.solenoidal = u.solenoidal;
  return out;
}

SpectralScalarField pressure_recover(const SpectralVectorField& u) {
  const SpectralVectorField adv = advection_raw(u);
  const Grid& g = *u.grid;
  SpectralScalarField p(u.grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k2 = g.xi_norm(i) * g.xi_norm(i);
    if (k2 == 0.0 || g.nyquist(i)) continue;
    cplx dot(0.0, 0.0);
    for (int c = 0; c < 3; ++c) dot += g.xi(i, c) * adv.coeffs[c][i];
    p.coeffs[i] = cplx(0.0, 1.0) * dot / k2;
  }
  return p;
}

}  // namespace nsledger
