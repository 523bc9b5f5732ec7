#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nsledger/dynamics.hpp"

namespace nsledger {

// Similarity-variable functionals at one sample, all computed from the
// physical field through exact rescaling identities. With r = s|xi|,
// e = |u(xi)|^2 and p = Re(u(xi)* . P[(u.grad)u](xi)):
//   quadratic terms are s^-1 sum m(r) e, cubic terms are s sum m(r) p.
struct EnergyRecord {
  double tau = 0.0;
  double E0 = 0.0;            // |w|^2
  double E1 = 0.0;            // |grad w|^2
  double E2 = 0.0;            // |Laplace w|^2
  double E3 = 0.0;            // |grad Laplace w|^2
  double E0_low_chi = 0.0;    // chi-filtered energy
  double E0_tilde = 0.0;      // tilde-filtered energy
  double E0_low = 0.0;        // phi-filtered energy
  double E1_high = 0.0;       // |(1-phi) grad w|^2
  double E2_high = 0.0;       // |(1-phi) grad^2 w|^2
  double T_grad = 0.0;        // sum_jkl int d_j w_k d_j w_l d_l w_k
  double T_lap = 0.0;         // int Laplace w . Laplace((w.grad)w)
  double T_low = 0.0;         // phi-filtered cubic term
  double T_chi = 0.0;         // chi-filtered cubic term
  double flux_phi = 0.0;      // <= 0
  double flux_chi = 0.0;      // <= 0
  double flux_one_minus_phi = 0.0;  // >= 0
  double sup_norm_w = 0.0;    // max |w| = s max |u|

  double t = 0.0;
  double scale = 1.0;
  double E0_high = 0.0;       // |(1-phi) w|^2
  double E1_low = 0.0;        // |grad phi w|^2
  double E1_low_chi = 0.0;    // |grad chi w|^2
  double E1_tilde = 0.0;      // |grad tilde w|^2
  double T_high_grad = 0.0;   // (1-phi)^2 r^2 weighted cubic term
  double flux_high_grad = 0.0;  // (1-phi) flux of grad w, >= 0
  double a_term = 0.0;        // A density summed over r <= 1, <= 0
  double b_term = 0.0;        // B density summed over 1 < r <= 2, <= 0
  double tilde_gap = 0.0;     // (1 - r^2)(1 - phi^2)/4 summed, <= 0
  double sup_low_w = 0.0;     // max |phi w|
  double sup_low_grad = 0.0;  // max |grad phi w|
  double l4_low_w = 0.0;      // L4 norm of phi w
  double tail_fraction = 0.0;
  bool resolved = true;
  // E0_low_chi of this field at the scales of samples i - kFrozenHalf .. i + kFrozenHalf;
  // NaN where no such sample exists. Chi is only Lipschitz at r = 1/2 + alpha, so the
  // tau series of E0_low_chi has derivative jumps whenever a grid shell crosses that
  // radius; differencing at a frozen scale avoids them.
  std::vector<double> chi_frozen;
};

inline constexpr int kFrozenHalf = 4;

struct RecordField {
  const char* name;
  double EnergyRecord::*member;
};

// CSV column order: the primary block first, then the extras.
const std::vector<RecordField>& record_fields();

// frozen_scales, if nonempty, holds 2 kFrozenHalf + 1 scales (NaN for missing samples).
EnergyRecord compute_record(const Snapshot& snap, double alpha, double tail_threshold = 1e-8,
                            const std::vector<double>& frozen_scales = {});
std::vector<EnergyRecord> compute_records(const std::vector<Snapshot>& snaps, double alpha,
                                          double tail_threshold = 1e-8);

// Scales of the samples around index i of taus, in compute_record's frozen layout.
std::vector<double> neighbour_scales(const std::vector<double>& taus, std::size_t i,
                                     double t_horizon);

// Streams snapshots of one trajectory into records, in sample order.
class RecordBuilder {
 public:
  explicit RecordBuilder(const TrajectoryConfig& cfg)
      : taus_(cfg.sample_taus), horizon_(cfg.t_horizon), alpha_(cfg.alpha),
        tail_threshold_(cfg.tail_threshold) {}
  EnergyRecord operator()(const Snapshot& snap);

 private:
  std::vector<double> taus_;
  double horizon_;
  double alpha_;
  double tail_threshold_;
  std::size_t next_ = 0;
};

using Series = std::vector<std::pair<double, double>>;

Series series_of(const std::vector<EnergyRecord>& recs, double EnergyRecord::*member);

// Finite-difference weights for derivative m at x0 over arbitrary nodes.
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int m);

// d/dtau by (order+1)-point stencils: centered in the interior, one sided at the ends.
Series rate_estimate(const Series& series, int order = 2);

// Indices whose centered stencil of the given order fits inside [0, count).
std::pair<std::size_t, std::size_t> interior_range(std::size_t count, int order);

// Least-squares slope of -ln(value) against tau over samples in [tau_min, tau_max].
double fit_decay_rate(const Series& series, double tau_min, double tau_max);

struct InequalityReport {
  std::string name;
  double tau = 0.0;
  double lhs_rate = 0.0;
  double rhs_bound = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::optional<double> empirical_constant;
};

struct CheckOptions {
  double alpha = 0.1;
  double delta = 0.05;
  double tolerance_scale = 1.0;
  int fd_order = 6;
  double identity_rel = 1e-5;
  double identity_abs = 1e-10;
  double decay_tau_min = 1.0;
  double decay_tau_max = 4.0;
  double lemma43_margin = 0.2;
};

struct CheckResult {
  std::string name;
  std::vector<InequalityReport> reports;
  std::optional<double> fitted_rate;
  std::map<std::string, double> extras;
};

struct CheckSummary {
  std::string name;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::optional<double> empirical_constant;
  std::optional<double> fitted_rate;
  std::map<std::string, double> extras;
  bool pass = true;
};

const std::vector<std::string>& known_checks();

CheckResult check_inequality(const std::string& name, const std::vector<EnergyRecord>& recs,
                             const CheckOptions& opts = {});
CheckSummary summarize(const CheckResult& r);

void write_records_csv(std::ostream& os, const std::vector<EnergyRecord>& recs);
// {scenario, checks: [...], fitted_rates: {...}}
std::string report_json(const std::string& scenario, const std::vector<CheckSummary>& checks);

}  // namespace nsledger
