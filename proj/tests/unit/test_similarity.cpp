#include <doctest.h>

#include "nsledger/similarity.hpp"
#include "support/oracles.hpp"

using namespace nsledger;
using oracle::pi;

TEST_SUITE("similarity") {

TEST_CASE("frame at t = 0 with unit horizon") {
  const auto f = make_frame(0.0, 1.0);
  CHECK(f.tau == 0.0);
  CHECK(f.scale == 1.0);
}

TEST_CASE("frame at t = 3/4") {
  const auto f = make_frame(0.75, 1.0);
  CHECK(f.tau == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(f.scale == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("tau and t round trip") {
  for (double T : {0.25, 1.0, 2.0})
    for (double tau = -std::log(T); tau < 6.0; tau += 0.37) {
      const auto f = frame_at_tau(tau, T);
      CHECK(f.scale == doctest::Approx(std::sqrt(T - f.t)).epsilon(1e-13));
      if (f.t > 0.0) {
        const auto g = make_frame(f.t, T);
        CHECK(g.tau == doctest::Approx(tau).epsilon(1e-12));
      }
    }
}

TEST_CASE("the horizon start maps exactly to t = 0") {
  CHECK(frame_at_tau(-std::log(2.0), 2.0).t == 0.0);
  CHECK(frame_at_tau(0.0, 1.0).t == 0.0);
}

TEST_CASE("frame domain errors") {
  CHECK_THROWS_AS(make_frame(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(make_frame(1.5, 1.0), DomainError);
  CHECK_THROWS_AS(make_frame(-0.1, 1.0), DomainError);
  CHECK_THROWS_AS(make_frame(0.1, 0.0), DomainError);
  CHECK_THROWS_AS(frame_at_tau(0.0, -1.0), DomainError);
}

TEST_CASE("similarity norms scale with the frame") {
  const auto g = Grid::build(16, 2 * pi);
  const auto u = transform_forward(oracle::sample(g, oracle::taylor_green()));
  const double e = l2_norm_squared(u);
  const auto f = make_frame(0.75, 1.0);  // s = 1/2
  CHECK(similarity_norm(u, f, {0, 0, 0}) == doctest::Approx(2.0 * e).epsilon(1e-13));
  // |xi|^2 = 2 on every Taylor-Green mode, so the gradient energy is 2e and s^{1} = 1/2.
  double grad = 0.0;
  for (const auto& b : multi_indices_of_order(1)) grad += similarity_norm(u, f, b);
  CHECK(grad == doctest::Approx(e).epsilon(1e-13));
}

TEST_CASE("filtered energy of an identity-like cutoff") {
  const auto g = Grid::build(16, 2 * pi);
  const auto u = transform_forward(oracle::sample(g, oracle::shear_mode(1.0)));
  const auto f = make_frame(0.75, 1.0);
  // r = s |xi| = 1/2 lies inside the phi plateau.
  CHECK(similarity_filtered_energy(u, f, CutoffProfile::phi()) ==
        doctest::Approx(similarity_norm(u, f, {0, 0, 0})).epsilon(1e-14));
  CHECK(similarity_filtered_energy(u, f, CutoffProfile::one_minus_phi()) < 1e-25);
}

TEST_CASE("filtering is linear and matches apply_profile") {
  const auto g = Grid::build(16, 4 * pi);
  const auto u = transform_forward(oracle::random_physical(g, 4));
  const auto f = make_frame(0.3, 1.0);
  const auto psi = CutoffProfile::chi(0.05);
  CHECK(oracle::max_abs_diff(similarity_filter(u, f, psi), apply_profile(u, psi, f.scale)) == 0.0);
  const auto two = similarity_filter(2.0 * u, f, psi);
  CHECK(oracle::max_abs_diff(two, 2.0 * similarity_filter(u, f, psi)) < 1e-14 * oracle::max_abs(two));
}

TEST_CASE("blow-up ratio") {
  CHECK(blowup_rate_ratio(4.0, make_frame(0.75, 1.0)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(blowup_rate_ratio(-1.0, make_frame(0.0, 1.0)), DomainError);
}

}
