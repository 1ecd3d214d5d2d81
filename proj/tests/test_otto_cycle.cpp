#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "ottospin/otto_cycle.hpp"

using namespace ottospin;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

struct TraceHeats {
  double heat_hot;
  double heat_cold;
};

// heats from explicit density matrices: the eigenbasis is field-independent,
// so occupations carried across an adiabat keep their matrix form
TraceHeats trace_heats(const CycleParams& cp) {
  const TwoSpinState rho_hot =
      gibbs_state_oracle({cp.exchange, cp.field_hot, cp.temp_hot});
  const TwoSpinState rho_cold =
      gibbs_state_oracle({cp.exchange, cp.field_cold, cp.temp_cold});
  const Eigen::Matrix4d h_hot = pair_hamiltonian(cp.exchange, cp.field_hot);
  const Eigen::Matrix4d h_cold = pair_hamiltonian(cp.exchange, cp.field_cold);
  return {((rho_hot - rho_cold) * h_hot).trace(),
          ((rho_cold - rho_hot) * h_cold).trace()};
}

const CycleParams reference(0.1, 4.0, 3.0, 1.0, 0.5);

}  // namespace

TEST_CASE("reference cycle values") {
  const CycleResult r = run_cycle(reference);
  // occupation differences carry ~1 ulp of the O(1) values, scaled by B
  CHECK(close(r.heat_hot, 0.00778394725517373, 8e-15));
  CHECK(close(r.heat_cold, -0.005694890964223178, 8e-15));
  CHECK(close(r.work, 0.0020890562909505523, 4e-15));
  CHECK(close(r.local_heat_hot, 0.0041781125819011047, 4e-15));
  CHECK(close(r.local_heat_cold, -0.0031335844364258285, 4e-15));
  CHECK(close(r.local_work, 0.0010445281454752762, 1e-15));
  CHECK(close(r.leak, -0.00057227790862847905, 1e-15));

  REQUIRE(r.efficiency.has_value());
  CHECK(close(*r.efficiency, 0.26838006765295413, 5e-13));
  REQUIRE(r.local_efficiency.has_value());
  CHECK(close(*r.local_efficiency, 0.25, 1e-15));
  CHECK(r.uncoupled_efficiency == 0.25);
  CHECK(r.carnot_efficiency == 0.5);
  REQUIRE(r.bound.has_value());
  CHECK(close(*r.bound, 0.2777777777777778, 1e-15));

  CHECK(close(r.local_temp_hot.value, 1.0634932863321247, 1e-13));
  CHECK(close(r.local_temp_cold.value, 0.5499913408452494, 1e-13));

  const RegimeReport regime = classify(reference, r);
  CHECK(regime.is_engine);
  CHECK(regime.field_case == FieldCase::decrease);
  CHECK(regime.beats_uncoupled);
  CHECK_FALSE(regime.local_counterflow);
  CHECK(regime.pwc_condition);
  CHECK(regime.carnot_ok);
  CHECK(regime.bound_ok);
  CHECK(regime.audit_ok);
}

TEST_CASE("heats agree with the density-matrix oracle") {
  for (const CycleParams cp :
       {reference, CycleParams(0.25, 2.5, 1.25, 2.0, 0.5),
        CycleParams(1.5, 8.0, 6.0, 5.0, 2.5),
        CycleParams(0.05, 0.9, 1.8, 3.0, 0.4),
        CycleParams(0.4, 0.5, 1.0, 1.0, 0.2),
        CycleParams(2.0, 7.0, 7.0, 1.3, 0.9)}) {
    const CycleResult r = run_cycle(cp);
    const TraceHeats t = trace_heats(cp);
    CHECK(close(r.heat_hot, t.heat_hot, 1e-12));
    CHECK(close(r.heat_cold, t.heat_cold, 1e-12));
    CHECK(close(r.work, t.heat_hot + t.heat_cold, 1e-12));
  }
}

TEST_CASE("zero coupling reduces to the bare two-level cycle") {
  const CycleParams cp(0.0, 4.0, 3.0, 1.0, 0.5);
  const CycleResult r = run_cycle(cp);

  REQUIRE(r.efficiency.has_value());
  CHECK(close(*r.efficiency, 0.25, 1e-14));
  CHECK(r.leak == 0.0);
  CHECK_FALSE(std::signbit(r.leak));
  // leak = 0 makes the first law bitwise here
  CHECK(r.work == r.heat_hot + r.heat_cold);

  const RegimeReport regime = classify(cp, r);
  CHECK(regime.is_engine);
  CHECK_FALSE(regime.beats_uncoupled);

  const SignLink link = sign_link(cp);
  CHECK(link.applicable);
  CHECK(link.leak_sign == 0);
  CHECK(link.gap_sign == 0);
  CHECK(link.consistent);
}

TEST_CASE("equal fields give zero work for any coupling") {
  const CycleParams cp(0.7, 3.0, 3.0, 1.0, 0.5);
  const CycleResult r = run_cycle(cp);
  CHECK(r.work == 0.0);
  CHECK(r.local_work == 0.0);
  CHECK(r.local_heat_hot == -r.local_heat_cold);
  CHECK_FALSE(r.local_efficiency.has_value());

  const RegimeReport regime = classify(cp, r);
  CHECK(regime.field_case == FieldCase::degenerate);
  CHECK_FALSE(regime.is_engine);
}

TEST_CASE("no uncoupled engine when the field rises") {
  const CycleParams cp(0.0, 3.0, 4.0, 1.0, 0.5);
  const CycleResult r = run_cycle(cp);
  CHECK(r.work < 0.0);
  CHECK_FALSE(classify(cp, r).is_engine);
}

TEST_CASE("field-increase engine reference point") {
  const CycleParams cp(0.4, 0.5, 1.0, 1.0, 0.2);
  const CycleResult r = run_cycle(cp);

  CHECK(close(r.heat_hot, 0.36932591058185107, 1e-13));
  CHECK(close(r.heat_cold, -0.28967030652344780, 1e-13));
  CHECK(close(r.work, 0.07965560405840327, 1e-13));
  CHECK(close(r.local_heat_hot, -0.039827802029201635, 1e-14));
  CHECK(close(r.local_heat_cold, 0.079655604058403270, 1e-14));
  CHECK(close(r.leak, 0.44898151464025434, 1e-13));
  REQUIRE(r.efficiency.has_value());
  CHECK(close(*r.efficiency, 0.21567835284805929, 1e-12));

  // per-spin cycle: w/q2 = 1 - B1/B2, exact for power-of-two fields
  REQUIRE(r.local_efficiency.has_value());
  CHECK(*r.local_efficiency == 0.5);

  CHECK(close(r.local_temp_hot.value, 6.0743280983090436, 1e-11));
  CHECK(close(r.local_temp_cold.value, 404.42801551934759, 1e-9));
  CHECK(r.local_temp_cold.value > r.local_temp_hot.value);
  // B1/T1' > B2/T2': the absorbing stage is locally hotter per its field
  CHECK(r.local_temp_hot.log_gap > r.local_temp_cold.log_gap);

  const RegimeReport regime = classify(cp, r);
  CHECK(regime.is_engine);
  CHECK(regime.field_case == FieldCase::increase);
  CHECK(regime.local_counterflow);
  CHECK_FALSE(regime.beats_uncoupled);
  CHECK(regime.pwc_condition);
  CHECK(regime.carnot_ok);
  CHECK_FALSE(r.bound.has_value());  // B1 < 4J

  const LevelProbabilities& p = r.probs_hot;
  const LevelProbabilities& q = r.probs_cold;
  CHECK(p.anti_aligned > q.anti_aligned);
  CHECK(p.triplet_zero > q.triplet_zero);
  CHECK(p.aligned > q.aligned);
  CHECK(q.singlet > p.singlet);

  const BoundAudit audit = bound_audit(cp, r);
  CHECK_FALSE(audit.applicable);
  CHECK(audit.all());
}

TEST_CASE("bound formula cases") {
  CHECK(*efficiency_bound(CycleParams(0.0, 4.0, 3.0, 1.0, 0.5)) == 0.25);
  CHECK(*efficiency_bound(CycleParams(0.25, 4.0, 3.0, 1.0, 0.5)) ==
        0.25 / 0.75);
  // B1 = 4J sits on the excluded boundary
  CHECK_FALSE(efficiency_bound(CycleParams(1.0, 4.0, 3.0, 1.0, 0.5)));
  CHECK_FALSE(efficiency_bound(CycleParams(1.5, 4.0, 3.0, 1.0, 0.5)));
}

TEST_CASE("bound audit chain at the reference engine point") {
  const CycleResult r = run_cycle(reference);
  const BoundAudit audit = bound_audit(reference, r);
  CHECK(audit.applicable);
  CHECK(audit.ordering_ok);
  CHECK(audit.ratio_ok);
  CHECK(audit.exponent_ok);
  CHECK(audit.level_config_ok);
  CHECK(audit.population_balance_ok);
  CHECK(audit.bound_chain_ok);
  CHECK(audit.all());

  const CycleParams uncoupled(0.0, 4.0, 3.0, 1.0, 0.5);
  const BoundAudit vacuous = bound_audit(uncoupled, run_cycle(uncoupled));
  CHECK_FALSE(vacuous.applicable);
  CHECK(vacuous.all());
}

TEST_CASE("leak sign tracks the efficiency gap") {
  const SignLink below = sign_link(reference);
  CHECK(below.applicable);
  CHECK(below.leak_sign == -1);
  CHECK(below.gap_sign == -1);
  CHECK(below.consistent);

  // past the crossover the leak turns positive and eta drops under eta0
  const SignLink above = sign_link(CycleParams(0.5, 4.0, 3.0, 1.0, 0.5));
  CHECK(above.applicable);
  CHECK(above.leak_sign == 1);
  CHECK(above.gap_sign == 1);
  CHECK(above.consistent);

  CHECK(sign_link(CycleParams(0.9, 4.0, 3.0, 1.0, 0.5)).consistent);
}

TEST_CASE("leak equals the heat-weighted efficiency gap") {
  for (const CycleParams cp :
       {reference, CycleParams(0.3, 4.0, 3.0, 1.0, 0.5),
        CycleParams(0.45, 4.0, 3.0, 1.0, 0.5)}) {
    const CycleResult r = run_cycle(cp);
    REQUIRE(r.efficiency.has_value());
    const double gap_form =
        r.heat_hot * (1.0 - *r.efficiency / r.uncoupled_efficiency);
    CHECK(close(r.leak, gap_form, 1e-12));
  }
}

TEST_CASE("pwc condition flag") {
  const CycleResult r = run_cycle(reference);
  CHECK(classify(reference, r).pwc_condition);  // 3/0.5 > 4/1

  const CycleParams narrow(0.1, 4.0, 3.0, 1.0, 0.8);
  CHECK_FALSE(classify(narrow, run_cycle(narrow)).pwc_condition);  // 3.75 < 4
}

TEST_CASE("cycle parameter domain rejection") {
  CHECK_THROWS_AS(CycleParams(-0.1, 4.0, 3.0, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(CycleParams(0.1, 0.0, 3.0, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(CycleParams(0.1, 4.0, -3.0, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(CycleParams(0.1, 4.0, 3.0, 0.5, 0.5), std::domain_error);
  CHECK_THROWS_AS(CycleParams(0.1, 4.0, 3.0, 0.4, 0.5), std::domain_error);
  CHECK_THROWS_AS(CycleParams(0.1, 4.0, 3.0, 1.0, 0.0), std::domain_error);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(CycleParams(nan, 4.0, 3.0, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(CycleParams(0.1, 4.0, 3.0, nan, 0.5), std::domain_error);
}
