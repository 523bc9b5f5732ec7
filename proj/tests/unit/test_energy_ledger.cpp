#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "nsledger/energy_ledger.hpp"
#include "nsledger/synthetic_fields.hpp"
#include "support/oracles.hpp"

using namespace nsledger;
using oracle::pi;

namespace {

SpectralVectorField tg(const GridPtr& g, double amp) {
  auto u = transform_forward(oracle::sample(g, oracle::taylor_green()));
  u *= amp;
  u.solenoidal = true;
  return u;
}

double sum_order(const SpectralVectorField& u, int m) {
  double s = 0.0;
  for (const auto& b : multi_indices_of_order(m)) s += l2_norm_squared(spectral_derivative(u, b));
  return s;
}

// Short small-data run on a coarse grid shared by the check tests.
const std::vector<EnergyRecord>& small_run() {
  static const std::vector<EnergyRecord> recs = [] {
    const auto g = Grid::build(16, 8 * pi);
    FieldSpec spec;
    spec.seed = 3;
    spec.xi_max = 0.85;
    TrajectoryConfig cfg;
    cfg.n = 16;
    cfg.l_box = 8 * pi;
    cfg.delta = 0.05;
    cfg.dt_max = 0.005;
    cfg.sample_taus = uniform_taus(0.0, 1.0, 0.02);
    RecordBuilder build(cfg);
    std::vector<EnergyRecord> out;
    simulate(generate(spec, g), cfg, [&](const Snapshot& s) { out.push_back(build(s)); });
    return out;
  }();
  return recs;
}

}  // namespace

TEST_SUITE("energy_ledger") {

TEST_CASE("record of Taylor-Green at s = 1/2") {
  const auto g = Grid::build(16, 2 * pi);
  const auto u = tg(g, 0.3);
  const Snapshot snap{make_frame(0.75, 1.0), u};
  const auto r = compute_record(snap, 0.1);
  const double s = 0.5, e = l2_norm_squared(u);
  CHECK(r.tau == doctest::Approx(std::log(4.0)));
  CHECK(r.scale == doctest::Approx(s));
  CHECK(r.E0 == doctest::Approx(e / s).epsilon(1e-13));
  CHECK(r.E1 == doctest::Approx(s * sum_order(u, 1)).epsilon(1e-13));
  CHECK(r.E2 == doctest::Approx(s * s * s * 4.0 * e).epsilon(1e-13));
  CHECK(r.E3 == doctest::Approx(std::pow(s, 5) * 8.0 * e).epsilon(1e-13));
  // Every mode sits at r = s sqrt(2), inside the phi plateau and beyond the chi knee.
  CHECK(r.E0_low == doctest::Approx(r.E0).epsilon(1e-13));
  CHECK(r.E0_high < 1e-25);
  CHECK(r.E0_tilde < 1e-25);
  const double c = std::pow(0.6, 0.7);
  CHECK(r.E0_low_chi == doctest::Approx(c * c * r.E0).epsilon(1e-13));
  CHECK(std::abs(r.flux_phi) < 1e-25);
  CHECK(std::abs(r.T_grad) < 1e-14);
  CHECK(r.sup_norm_w == doctest::Approx(s * 0.3).epsilon(1e-12));
  CHECK(r.resolved);
  CHECK(r.tail_fraction < 1e-28);
}

TEST_CASE("primary energies follow the rescaling identities on random fields") {
  const auto g = Grid::build(16, 8 * pi);
  FieldSpec spec;
  spec.xi_max = 0.85;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    spec.seed = seed;
    const auto u = generate(spec, g);
    const auto fr = make_frame(0.4, 1.0);
    const auto r = compute_record(Snapshot{fr, u}, 0.06);
    CHECK(r.E0 == doctest::Approx(l2_norm_squared(u) / fr.scale).epsilon(1e-12));
    CHECK(r.E1 == doctest::Approx(fr.scale * sum_order(u, 1)).epsilon(1e-12));
    CHECK(r.E0_low + r.E0_tilde == doctest::Approx(r.E0).epsilon(1e-12));
    CHECK(r.flux_phi <= 0.0);
    CHECK(r.flux_one_minus_phi >= 0.0);
    CHECK(r.a_term <= 0.0);
    CHECK(r.b_term <= 0.0);
    CHECK(r.sup_low_w <= r.sup_norm_w * (1 + 1e-12) + 1e-300);
  }
}

TEST_CASE("frozen scales") {
  const std::vector<double> taus{0.0, 0.1, 0.2};
  const auto s = neighbour_scales(taus, 0, 1.0);
  REQUIRE(s.size() == 2 * kFrozenHalf + 1);
  CHECK(std::isnan(s[kFrozenHalf - 1]));
  CHECK(s[kFrozenHalf] == doctest::Approx(1.0));
  CHECK(s[kFrozenHalf + 2] == doctest::Approx(std::exp(-0.1)));
  CHECK(std::isnan(s[kFrozenHalf + 3]));

  const auto g = Grid::build(16, 2 * pi);
  const auto u = tg(g, 1.0);
  const auto rec = compute_record(Snapshot{frame_at_tau(0.1, 1.0), u}, 0.1, 1e-8, neighbour_scales(taus, 1, 1.0));
  CHECK(rec.chi_frozen[kFrozenHalf] == doctest::Approx(rec.E0_low_chi).epsilon(1e-13));
  CHECK(std::isnan(rec.chi_frozen[0]));
}

TEST_CASE("record builder enforces sample order") {
  const auto g = Grid::build(16, 2 * pi);
  TrajectoryConfig cfg;
  cfg.n = 16;
  cfg.l_box = 2 * pi;
  cfg.sample_taus = {0.0, 0.1};
  RecordBuilder b(cfg);
  CHECK_THROWS_AS(b(Snapshot{frame_at_tau(0.1, 1.0), tg(g, 1.0)}), ConfigError);
  RecordBuilder c(cfg);
  CHECK_NOTHROW(c(Snapshot{frame_at_tau(0.0, 1.0), tg(g, 1.0)}));
  CHECK_NOTHROW(c(Snapshot{frame_at_tau(0.1, 1.0), tg(g, 1.0)}));
  CHECK_THROWS_AS(c(Snapshot{frame_at_tau(0.2, 1.0), tg(g, 1.0)}), ConfigError);
}

TEST_CASE("finite-difference weights") {
  const auto w = fd_weights(0.0, {-1.0, 0.0, 1.0}, 1);
  CHECK(w[0] == doctest::Approx(-0.5));
  CHECK(w[1] == doctest::Approx(0.0));
  CHECK(w[2] == doctest::Approx(0.5));
  const auto w2 = fd_weights(0.0, {-1.0, 0.0, 1.0}, 2);
  CHECK(w2[0] == doctest::Approx(1.0));
  CHECK(w2[1] == doctest::Approx(-2.0));
  CHECK(w2[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(fd_weights(0.0, {0.0, 1.0}, 2), ConfigError);
}

TEST_CASE("rate estimates are exact on polynomials of the stencil degree") {
  for (int order : {2, 4, 6}) {
    Series s;
    for (int i = 0; i <= 20; ++i) {
      const double t = 0.1 * i;
      s.emplace_back(t, std::pow(t, order) - 3 * t + 1);
    }
    const auto d = rate_estimate(s, order);
    for (const auto& [t, v] : d)
      CHECK(v == doctest::Approx(order * std::pow(t, order - 1) - 3).epsilon(1e-9).scale(1.0));
  }
  CHECK_THROWS_AS(rate_estimate({{0, 1}, {1, 2}}, 2), ConfigError);
  CHECK_THROWS_AS(rate_estimate({{0, 1}, {1, 2}, {2, 3}}, 3), ConfigError);
  CHECK_THROWS_AS(rate_estimate({{0, 1}, {0, 2}, {2, 3}}, 2), ConfigError);
}

TEST_CASE("rate estimate converges at its order on a smooth series") {
  auto err = [](double h) {
    Series s;
    const int m = static_cast<int>(std::lround(1.0 / h));
    for (int i = 0; i <= 2 * m; ++i) s.emplace_back(i * h, std::exp(-0.7 * i * h));
    const auto d = rate_estimate(s, 4);
    return std::abs(d[m].second + 0.7 * std::exp(-0.7));
  };
  CHECK(err(0.05) / err(0.025) > 12.0);  // 2^4 = 16 for fourth order
}

TEST_CASE("interior range") {
  CHECK(interior_range(10, 6) == std::pair<std::size_t, std::size_t>{3, 6});
  const auto [lo, hi] = interior_range(4, 6);
  CHECK(hi < lo);
}

TEST_CASE("decay fit recovers an exponential rate") {
  Series s;
  for (int i = 0; i <= 100; ++i) s.emplace_back(0.04 * i, 3.0 * std::exp(-0.4 * 0.04 * i));
  CHECK(fit_decay_rate(s, 1.0, 4.0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK_THROWS_AS(fit_decay_rate(s, 10.0, 11.0), NumericalError);
  s[50].second = 0.0;
  CHECK_THROWS_AS(fit_decay_rate(s, 1.0, 4.0), NumericalError);
}

TEST_CASE("check registry") {
  CHECK(known_checks().size() == 15);
  const auto& recs = small_run();
  CHECK_THROWS_AS(check_inequality("no-such-check", recs), ConfigError);
  const std::vector<EnergyRecord> few(recs.begin(), recs.begin() + 4);
  CHECK_THROWS_AS(check_inequality("lemma2.1", few), ConfigError);
}

TEST_CASE("energy identities hold on a small-data run") {
  const auto& recs = small_run();
  CheckOptions opts;
  opts.delta = 0.05;
  for (const char* name : {"lemma2.1", "lemma2.2-grad", "lemma2.2-lap", "eq3.7-identity", "eq3.21-chi",
                           "plancherel-split", "flux-signs"}) {
    CAPTURE(name);
    const auto s = summarize(check_inequality(name, recs, opts));
    CHECK(s.pass);
    CHECK(s.samples > 0);
  }
}

TEST_CASE("a deliberately corrupted series fails the energy equality") {
  auto recs = small_run();
  recs[20].E0 *= 1.01;
  const auto s = summarize(check_inequality("lemma2.1", recs));
  CHECK_FALSE(s.pass);
  CHECK(s.max_residual > s.tolerance);
}

TEST_CASE("records csv and report json") {
  const auto& recs = small_run();
  std::ostringstream os;
  write_records_csv(os, recs);
  std::istringstream is(os.str());
  std::string header, line;
  std::getline(is, header);
  CHECK(header.rfind("tau,E0,E1,E2,E3,", 0) == 0);
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == recs.size());
  CHECK(std::count(header.begin(), header.end(), ',') == static_cast<long>(record_fields().size()));  // plus resolved

  const auto summary = summarize(check_inequality("lemma2.1", recs));
  const auto j = nlohmann::json::parse(report_json("unit", {summary}));
  CHECK(j["scenario"] == "unit");
  REQUIRE(j["checks"].size() == 1);
  CHECK(j["checks"][0]["name"] == "lemma2.1");
  CHECK(j["checks"][0]["pass"] == summary.pass);
  CHECK(j["checks"][0]["max_residual"].get<double>() == summary.max_residual);
}

}
