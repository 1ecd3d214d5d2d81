#ifndef OTTOSPIN_OTTO_CYCLE_HPP
#define OTTOSPIN_OTTO_CYCLE_HPP

#include <optional>

#include "ottospin/spin_model.hpp"

// Four-stage Otto cycle on the coupled pair: the field moves B1 -> B2 and
// back along branches that hold every occupation fixed, and the pair
// thermalizes isochorically with a hot bath (T1, field B1) and a cold
// bath (T2, field B2).  Heats are signed into the working medium.

namespace ottospin {

// zero band for regime flags; heats and work are O(1) here
inline constexpr double classify_eps = 1e-12;

struct CycleParams {
  double exchange;    // J >= 0
  double field_hot;   // B1 > 0, applied while coupled to the hot bath
  double field_cold;  // B2 > 0
  double temp_hot;    // T1
  double temp_cold;   // T2, with T1 > T2 > 0

  // throws std::domain_error on violated ranges
  CycleParams(double exchange, double field_hot, double field_cold,
              double temp_hot, double temp_cold);
};

struct CycleResult {
  LevelProbabilities probs_hot;   // thermal at (J, B1, T1)
  LevelProbabilities probs_cold;  // thermal at (J, B2, T2)

  double heat_hot;         // Q1 = leak + 2 q1
  double heat_cold;        // Q2 = -leak + 2 q2
  double work;             // W = 2 w
  double local_heat_hot;   // q1 = B1 d, d = (p2'-p2) + (p4-p4'), per spin
  double local_heat_cold;  // q2 = -B2 d
  double local_work;       // w = q1 + q2
  double leak;             // 8J (p1'-p1): heat passed through the coupling,
                           // never available as work

  std::optional<double> efficiency;        // W/Q1 when Q1 > classify_eps
  std::optional<double> local_efficiency;  // w/q1 when B1 > B2, w/q2 when
                                           // B2 > B1; unset when degenerate
                                           // or the denominator sits in the
                                           // zero band
  double uncoupled_efficiency;             // eta0 = 1 - B2/B1
  double carnot_efficiency;                // 1 - T2/T1
  std::optional<double> bound;             // eta0 / (1 - 4J/B1) when B1 > 4J

  LocalTemperature local_temp_hot;   // T1'
  LocalTemperature local_temp_cold;  // T2'
};

enum class FieldCase { decrease, increase, degenerate };

struct RegimeReport {
  bool is_engine;         // W, Q1 above the band and Q2 below it
  FieldCase field_case;   // sign of B1 - B2
  bool beats_uncoupled;   // engine, field-decrease, and eta > eta0 strictly
  bool local_counterflow; // q1 < -eps and q2 > eps
  bool bound_ok;          // eta < bound < carnot where the bound applies;
                          // true (vacuous) elsewhere
  bool carnot_ok;         // eta < 1 - T2/T1 whenever eta is defined
  bool pwc_condition;     // B2/T2 > B1/T1
  bool audit_ok;          // bound_audit(...).all()
};

// Every link of the chain that forces eta < eta0/(1 - 4J/B1) whenever a
// field-decrease engine beats eta0.  Links are reported, never thrown: a
// false link would falsify the model, not the caller.
struct BoundAudit {
  bool applicable;             // field-decrease engine with eta > eta0
  bool ordering_ok;            // p1 > p1', p3 > p3', p4 > p4', p2' > p2
  bool ratio_ok;               // p2'/p1' > p2/p1 (cross-multiplied)
  bool exponent_ok;            // (B2-4J)/T2 > (B1-4J)/T1; same inequality as
                               // the Boltzmann-factor form, overflow-free
  bool level_config_ok;        // B1 > 4J and B2 > 4J
  bool population_balance_ok;  // p1 - p1' < (p4 - p4') + (p2' - p2)
  bool bound_chain_ok;         // eta < eta0/(1 - 4J/B1) < 1 - T2/T1

  // vacuously true when not applicable
  bool all() const {
    return !applicable || (ordering_ok && ratio_ok && exponent_ok &&
                           level_config_ok && population_balance_ok &&
                           bound_chain_ok);
  }
};

// The identity 8J (p1'-p1) = Q1 (1 - eta/eta0) ties the sign of the leak
// to the side of eta0 the efficiency lands on.  Signs are reported in
// {-1, 0, +1} with the classification band mapped to 0; a 0 on either
// side means the point is inside the band, which is compatible with any
// sign of the other.
struct SignLink {
  bool applicable;  // field-decrease with Q1 > eps (eta defined)
  int leak_sign;    // sign of 8J (p1' - p1)
  int gap_sign;     // sign of eta0 - eta
  bool consistent;
};

CycleResult run_cycle(const CycleParams& params);

RegimeReport classify(const CycleParams& params, const CycleResult& result);

// eta0 / (1 - 4J/B1) when B1 > 4J, else unset.  Evaluated verbatim for
// either field order; for B2 > B1 the value is informational only (eta0
// is negative there) and no flag asserts it.
std::optional<double> efficiency_bound(const CycleParams& params);

BoundAudit bound_audit(const CycleParams& params, const CycleResult& result);

SignLink sign_link(const CycleParams& params);

}  // namespace ottospin

#endif
