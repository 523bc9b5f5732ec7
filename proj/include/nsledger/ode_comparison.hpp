#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nsledger {

// h' = C delta - B h + h^5 with quadratic majorant C delta - B h + h^2 on [0, 1].
struct ComparisonParams {
  double B = 1.0;
  double C = 1.0;
  double delta = 0.0;
  double h0 = 0.0;

  double c_delta() const { return C * delta; }
};

double comparison_rhs(const ComparisonParams& p, double h);
// Smaller root of C delta - B h + h^2.
double h_minus(const ComparisonParams& p);

// Classical RK4 on the equality dynamics; includes the initial point.
std::vector<std::pair<double, double>> integrate_h(const ComparisonParams& p, double horizon,
                                                   double dt);

enum class TrapVerdict { trapped, escaped, vacuous };
const char* to_string(TrapVerdict v);

struct TrappingResult {
  TrapVerdict verdict = TrapVerdict::vacuous;
  double h_minus = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
  double h_final = 0.0;
  bool trapped() const { return verdict == TrapVerdict::trapped; }
};

// Integrates with dt = min(0.01, 0.5 / B) and tests h in [0, h_minus + 1e-9].
// Requires h_minus in (0, 1) and 0 <= h0 < h_minus, or h0 = h_minus; otherwise vacuous.
TrappingResult trapping_check(const ComparisonParams& p, double horizon);

struct DrawStatistics {
  std::size_t draws = 0;
  std::size_t trapped = 0;
  std::size_t escaped = 0;
  std::size_t vacuous = 0;
  double max_overshoot = 0.0;     // max over draws of h_max - h_minus
  double min_final_margin = 0.0;  // min over draws of h_minus - h(horizon)
};

// Parameters drawn so that h_minus in (0, 1) and h0 in [0, h_minus).
DrawStatistics random_trapping_draws(std::size_t count, std::uint64_t seed, double horizon);
std::string draw_statistics_json(const DrawStatistics& s);

// max over a uniform grid on [0, 1] of F(h) - (C delta - B h + h^2); <= 0 expected.
double majorant_gap(const ComparisonParams& p, int points);

}  // namespace nsledger
