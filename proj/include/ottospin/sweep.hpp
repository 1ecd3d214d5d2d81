#ifndef OTTOSPIN_SWEEP_HPP
#define OTTOSPIN_SWEEP_HPP

#include <string>
#include <vector>

#include "ottospin/otto_cycle.hpp"

// Uniform one-parameter sweeps with CSV emission, and the crossover
// coupling where the efficiency falls back to the uncoupled value.

namespace ottospin {

enum class SweepVariable { exchange, field_hot, field_cold, temp_hot, temp_cold };

const char* variable_name(SweepVariable v);  // "J", "B1", "B2", "T1", "T2"

struct SweepSpec {
  // fixed parameter values; the swept slot is ignored
  double exchange = 0.0;
  double field_hot = 0.0;
  double field_cold = 0.0;
  double temp_hot = 0.0;
  double temp_cold = 0.0;

  SweepVariable variable = SweepVariable::exchange;
  double lo = 0.0;
  double hi = 0.0;  // lo < hi
  int steps = 0;    // >= 2 grid points, uniform, endpoints included
};

struct SweepRow {
  double value;  // swept-variable value
  CycleResult result;
  RegimeReport regime;
};

// Evaluates every grid point in ascending order.  Throws std::domain_error
// naming the offending value if any grid point violates CycleParams.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr const char* csv_header =
    "var,Q1,Q2,W,eta,eta0,bound,eta_carnot,leak,q1,q2,t1_local,t2_local,"
    "is_engine,beats_uncoupled,local_counterflow";

// 17 significant digits (round-trip exact), booleans as true/false,
// undefined values as empty fields, LF line endings.
std::string to_csv(const std::vector<SweepRow>& rows);

// Writes to a temporary sibling and renames, so no partial file is ever
// visible.  Throws std::runtime_error on I/O failure.
void write_csv_atomic(const std::string& path, const std::string& content);

struct CrossoverResult {
  bool found = false;
  double j_star = 0.0;      // final bracket midpoint
  double bracket_lo = 0.0;  // eta > eta0 side
  double bracket_hi = 0.0;  // eta < eta0 side; width < 1e-9 when found
  double eta_at_j_star = 0.0;
  std::string note;  // reason when not found
};

// Locates J* where eta(J) crosses back down through eta0 = 1 - B2/B1 for a
// field-decrease configuration.  B1 > 4J is necessary for eta > eta0, so
// the scan works inside (0, B1/4): geometric points B1/4 (1 - 2^-k)
// upward, falling back to halving below B1/8 when even the first scan
// point is already past the crossing.  Bisection then shrinks the bracket
// under 1e-9 and the result is certified by |eta(J*) - eta0| < 1e-7.
// The J component of params is ignored.  A missing crossing is a report,
// not an error.
CrossoverResult find_crossover(const CycleParams& params);

}  // namespace ottospin

#endif
