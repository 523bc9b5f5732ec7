#include <doctest.h>

#include "nsledger/dynamics.hpp"
#include "nsledger/synthetic_fields.hpp"
#include "support/oracles.hpp"

using namespace nsledger;
using oracle::pi;

namespace {

SpectralVectorField tg(const GridPtr& g, double amp = 1.0) {
  auto u = transform_forward(oracle::sample(g, oracle::taylor_green()));
  u *= amp;
  u.solenoidal = true;
  return u;
}

SpectralVectorField random_band(const GridPtr& g, std::uint64_t seed, double norm) {
  FieldSpec spec;
  spec.seed = seed;
  spec.xi_max = 1.7;  // below the tail guard of a 16-point 4 pi grid
  spec.l2_norm_target = norm;
  return generate(spec, g);
}

TrajectoryConfig tg_config(int n, std::vector<double> taus) {
  TrajectoryConfig cfg;
  cfg.n = n;
  cfg.l_box = 2 * pi;
  cfg.t_horizon = 1.0;
  cfg.dt_max = 0.005;
  cfg.normalize = false;
  cfg.sample_taus = std::move(taus);
  return cfg;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("Taylor-Green and shear modes have no projected nonlinearity") {
  const auto g = Grid::build(16, 2 * pi);
  CHECK(oracle::max_abs(nonlinear_term(tg(g))) < 1e-12);
  const auto s = transform_forward(oracle::sample(g, oracle::shear_mode(2.0)));
  CHECK(oracle::max_abs(nonlinear_term(s)) < 1e-12);
  CHECK(oracle::max_abs(advection_raw(s)) < 1e-12);
}

TEST_CASE("nonlinear term is orthogonal to the field") {
  const auto g = Grid::build(16, 4 * pi);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto u = random_band(g, seed, 1.0);
    const auto n = nonlinear_term(u);
    CHECK(std::abs(l2_inner(u, n)) < 1e-13 * std::sqrt(l2_norm_squared(n)));
    CHECK(solenoidality_defect(n) < 1e-12);
  }
}

TEST_CASE("nonlinear term reports the sup norm") {
  const auto g = Grid::build(16, 2 * pi);
  double umax = 0.0;
  nonlinear_term(tg(g, 3.0), &umax);
  CHECK(umax == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("Taylor-Green pressure") {
  const auto g = Grid::build(16, 2 * pi);
  const auto u = tg(g);
  const auto p = transform_inverse(pressure_recover(u));
  double err = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto a = g->axes(i);
    const double x = a[0] * g->dx(), y = a[1] * g->dx();
    err = std::max(err, std::abs(p[i] - 0.25 * (std::cos(2 * x) + std::cos(2 * y))));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("advection splits into projection and pressure gradient") {
  const auto g = Grid::build(16, 4 * pi);
  const auto u = random_band(g, 3, 1.0);
  const auto adv = advection_raw(u);
  const auto rest = adv - nonlinear_term(u) + gradient(pressure_recover(u));
  CHECK(oracle::max_abs(rest) < 1e-12 * oracle::max_abs(adv));
}

TEST_CASE("right-hand side of a Stokes mode") {
  const auto g = Grid::build(16, 2 * pi);
  const auto u = transform_forward(oracle::sample(g, oracle::shear_mode(2.0)));
  const NavierStokesSolver s(0.01, 0.5, false);
  CHECK(oracle::max_abs_diff(s.rhs(u), -4.0 * u) < 1e-12);
}

TEST_CASE("step preconditions") {
  const auto g = Grid::build(16, 2 * pi);
  const NavierStokesSolver s(0.01, 0.5);
  const SimState st{0.0, tg(g, 100.0)};
  CHECK_THROWS_AS(s.step(st, 0.0), StepSizeError);
  CHECK_THROWS_AS(s.step(st, -1e-3), StepSizeError);
  CHECK_THROWS_AS(s.step(st, 0.02), StepSizeError);
  CHECK_THROWS_AS(s.step(st, 0.01), StepSizeError);  // CFL: 0.5 * dx / 100 < 0.01
  CHECK(s.max_stable_dt(st.u_hat) == doctest::Approx(0.5 * g->dx() / 100.0).epsilon(1e-12));
}

TEST_CASE("Taylor-Green decays at the exact viscous rate") {
  const auto g = Grid::build(16, 2 * pi);
  const auto u0 = tg(g, 0.5);
  const auto cfg = tg_config(16, uniform_taus(0.0, std::log(2.0), 0.1));
  const auto traj = simulate(u0, cfg);
  REQUIRE(traj.snapshots.size() == cfg.sample_taus.size());
  for (const auto& s : traj.snapshots) {
    CHECK(s.frame.tau == doctest::Approx(cfg.sample_taus[&s - &traj.snapshots[0]]));
    const auto exact = std::exp(-2.0 * s.frame.t) * u0;
    CHECK(oracle::max_abs_diff(s.u_hat, exact) < 1e-10 * oracle::max_abs(u0));
  }
}

TEST_CASE("linear run matches the heat semigroup") {
  const auto g = Grid::build(16, 4 * pi);
  const auto u0 = random_band(g, 1, 2.0);
  auto cfg = tg_config(16, {0.0, 0.5, 1.0});
  cfg.l_box = 4 * pi;
  cfg.nonlinear = false;
  cfg.resolution = ResolutionPolicy::warn;
  const auto traj = simulate(u0, cfg);
  const auto& last = traj.snapshots.back();
  const auto exact = apply_radial_symbol(u0, [&](double k) { return std::exp(-k * k * last.frame.t); });
  CHECK(oracle::max_abs_diff(last.u_hat, exact) < 1e-12 * oracle::max_abs(u0));
}

TEST_CASE("energy equality along a nonlinear run") {
  const auto g = Grid::build(16, 4 * pi);
  const auto u0 = random_band(g, 2, 1.0);
  auto cfg = tg_config(16, uniform_taus(0.0, 0.2, 0.01));
  cfg.l_box = 4 * pi;
  cfg.dt_max = 0.001;
  cfg.resolution = ResolutionPolicy::warn;
  const auto traj = simulate(u0, cfg);
  // d/dt |u|^2 = -2 |grad u|^2, checked by trapezoidal integration in t.
  double dissipated = 0.0;
  auto grad2 = [&](const SpectralVectorField& u) {
    double s = 0.0;
    for (const auto& b : multi_indices_of_order(1)) s += l2_norm_squared(spectral_derivative(u, b));
    return s;
  };
  for (std::size_t j = 0; j + 1 < traj.snapshots.size(); ++j) {
    const auto& a = traj.snapshots[j];
    const auto& b = traj.snapshots[j + 1];
    dissipated += (b.frame.t - a.frame.t) * (grad2(a.u_hat) + grad2(b.u_hat));
  }
  const double e0 = l2_norm_squared(traj.snapshots.front().u_hat);
  const double e1 = l2_norm_squared(traj.snapshots.back().u_hat);
  CHECK(e0 - e1 == doctest::Approx(dissipated).epsilon(1e-3));
  CHECK(e1 < e0);
}

TEST_CASE("normalization and the zero field") {
  const auto g = Grid::build(16, 4 * pi);
  auto cfg = tg_config(16, {0.0, 0.1, 0.2, 0.3, 0.4});
  cfg.l_box = 4 * pi;
  cfg.normalize = true;
  cfg.delta = 0.25;
  cfg.resolution = ResolutionPolicy::warn;
  const auto t = simulate(random_band(g, 5, 7.0), cfg);
  CHECK(std::sqrt(l2_norm_squared(t.snapshots.front().u_hat)) == doctest::Approx(0.25).epsilon(1e-12));
  const auto z = simulate(SpectralVectorField(g), cfg);
  for (const auto& s : z.snapshots) CHECK(l2_norm_squared(s.u_hat) == 0.0);
}

TEST_CASE("streaming sink sees every sample in order") {
  const auto g = Grid::build(16, 2 * pi);
  const auto cfg = tg_config(16, {0.0, 0.05, 0.1, 0.2});
  std::vector<double> seen;
  const auto traj = simulate(tg(g, 0.1), cfg, [&](const Snapshot& s) { seen.push_back(s.frame.tau); });
  CHECK(traj.snapshots.empty());
  REQUIRE(seen.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(seen[i] == doctest::Approx(cfg.sample_taus[i]));
}

TEST_CASE("trajectory configuration errors") {
  const auto g = Grid::build(16, 2 * pi);
  auto cfg = tg_config(16, {0.0, 0.1});
  CHECK_THROWS_AS(simulate(tg(g), tg_config(32, {0.0})), GridMismatch);
  cfg.sample_taus = {0.1, 0.05};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.sample_taus = {-1.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.sample_taus = {};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = tg_config(16, {0.0});
  cfg.alpha = 0.2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = tg_config(12, {0.0});
  cfg.n = 7;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(uniform_taus(0.0, 1.0, 0.0), ConfigError);
  CHECK(uniform_taus(0.0, 4.0, 0.02).size() == 201);
}

TEST_CASE("tail fraction and the resolution guard") {
  const auto g = Grid::build(16, 2 * pi);
  CHECK(spectral_tail_fraction(tg(g)) < 1e-28);
  CHECK(spectral_tail_fraction(SpectralVectorField(g)) == 0.0);
  // k = 4 has 4 > 32/9 and sits inside the retained band.
  const auto hi = transform_forward(oracle::sample(g, oracle::shear_mode(4.0)));
  CHECK(spectral_tail_fraction(hi) == doctest::Approx(1.0));
  auto cfg = tg_config(16, {0.0, 0.01});
  CHECK_THROWS_AS(simulate(hi, cfg), ResolutionError);
  cfg.resolution = ResolutionPolicy::warn;
  const auto t = simulate(hi, cfg);
  CHECK_FALSE(t.resolution_ok);
  CHECK(t.max_tail_fraction == doctest::Approx(1.0));
}

TEST_CASE("bump function") {
  CHECK(bump(0.0, 0.0, 1.0) == 0.0);
  CHECK(bump(1.0, 0.0, 1.0) == 0.0);
  CHECK(bump(0.5, 0.0, 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(bump_derivative(0.5, 0.0, 1.0) == doctest::Approx(0.0));
  for (double t : {0.1, 0.3, 0.7, 0.95}) {
    const double h = 1e-6;
    const double fd = (bump(t + h, 0.0, 1.0) - bump(t - h, 0.0, 1.0)) / (2 * h);
    CHECK(bump_derivative(t, 0.0, 1.0) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("weak residual of an exact solution is small") {
  const auto g = Grid::build(16, 2 * pi);
  const auto cfg = tg_config(16, uniform_taus(0.0, 1.0, 0.005));
  const auto traj = simulate(tg(g, 0.5), cfg);
  WeakTestField test{tg(g), 0.1, 0.5};
  const auto r = weak_residual(traj.snapshots, test);
  CHECK(r.magnitude > 0.0);
  CHECK(r.normalized < 1e-4);
}

TEST_CASE("weak residual domain errors") {
  const auto g = Grid::build(16, 2 * pi);
  const auto traj = simulate(tg(g, 0.5), tg_config(16, {0.0, 0.1, 0.2}));
  const auto grad = transform_forward(oracle::sample(g, [](double x, double, double) -> std::array<double, 3> {
    return {std::cos(x), 0.0, 0.0};
  }));
  CHECK_THROWS_AS(weak_residual(traj.snapshots, {grad, 0.0, 0.1}), DomainError);
  CHECK_THROWS_AS(weak_residual(traj.snapshots, {tg(g), 0.1, 0.1}), DomainError);
  CHECK_THROWS_AS(weak_residual(traj.snapshots, {tg(g), 0.0, 0.5}), DomainError);
  CHECK_THROWS_AS(weak_residual({traj.snapshots.front()}, {tg(g), 0.0, 0.0}), DomainError);
}

TEST_CASE("rescaling a shear mode") {
  const auto g = Grid::build(16, 2 * pi);
  const auto u = oracle::clean(transform_forward(oracle::sample(g, oracle::shear_mode(1.0))));
  const auto r = rescale_data(u, 2);
  const auto want = transform_forward(oracle::sample(g, oracle::shear_mode(2.0, 2.0)));
  CHECK(oracle::max_abs_diff(r, want) < 1e-12);
  CHECK(std::sqrt(l2_norm_squared(r) / l2_norm_squared(u)) == doctest::Approx(2.0));
  CHECK(oracle::max_abs_diff(rescale_data(u, 1), u) == 0.0);
}

TEST_CASE("rescaling onto a finer grid") {
  const auto g = Grid::build(16, 4 * pi);
  const auto fine = Grid::build(32, 4 * pi);
  const auto u = random_band(g, 4, 1.0);
  const auto r = rescale_data(u, 2, fine);
  CHECK(l2_norm_squared(r) == doctest::Approx(4.0 * l2_norm_squared(u)).epsilon(1e-13));
  CHECK(solenoidality_defect(r) < 1e-12);
}

TEST_CASE("rescaling preconditions") {
  const auto g = Grid::build(16, 4 * pi);
  const auto u = random_band(g, 4, 1.0);
  CHECK_THROWS_AS(rescale_data(u, 0), ConfigError);
  CHECK_THROWS_AS(rescale_data(u, 2), ResolutionError);
  CHECK_THROWS_AS(rescale_data(u, 2, Grid::build(32, pi)), GridMismatch);
}

}
