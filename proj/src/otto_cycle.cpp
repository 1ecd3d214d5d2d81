#include "ottospin/otto_cycle.hpp"

#include <cmath>
#include <stdexcept>

namespace ottospin {

namespace {

int band_sign(double v) {
  if (v > classify_eps) return 1;
  if (v < -classify_eps) return -1;
  return 0;
}

bool engine_flags(const CycleResult& r) {
  return r.work > classify_eps && r.heat_hot > classify_eps &&
         r.heat_cold < -classify_eps;
}

}  // namespace

CycleParams::CycleParams(double exchange_, double field_hot_,
                         double field_cold_, double temp_hot_,
                         double temp_cold_)
    : exchange(exchange_),
      field_hot(field_hot_),
      field_cold(field_cold_),
      temp_hot(temp_hot_),
      temp_cold(temp_cold_) {
  if (!(exchange >= 0.0) || !std::isfinite(exchange))
    throw std::domain_error("exchange constant must satisfy J >= 0");
  if (!(field_hot > 0.0) || !std::isfinite(field_hot))
    throw std::domain_error("hot-stage field must satisfy B1 > 0");
  if (!(field_cold > 0.0) || !std::isfinite(field_cold))
    throw std::domain_error("cold-stage field must satisfy B2 > 0");
  if (!(temp_hot > temp_cold) || !(temp_cold > 0.0) ||
      !std::isfinite(temp_hot) || !std::isfinite(temp_cold))
    throw std::domain_error("bath temperatures must satisfy T1 > T2 > 0");
}

CycleResult run_cycle(const CycleParams& cp) {
  CycleResult r{};
  r.probs_hot = thermal_probs({cp.exchange, cp.field_hot, cp.temp_hot});
  r.probs_cold = thermal_probs({cp.exchange, cp.field_cold, cp.temp_cold});
  const LevelProbabilities& p = r.probs_hot;
  const LevelProbabilities& q = r.probs_cold;

  // net polarization transfer (p2' - p2) + (p4 - p4')
  const double d = (q.aligned - p.aligned) + (p.anti_aligned - q.anti_aligned);

  r.local_heat_hot = cp.field_hot * d;
  r.local_heat_cold = -cp.field_cold * d;
  r.local_work = r.local_heat_hot + r.local_heat_cold;
  r.leak = 8.0 * cp.exchange * (q.singlet - p.singlet);
  if (r.leak == 0.0) r.leak = 0.0;  // normalize -0

  // W = 2w, Q1 = leak + 2 q1, Q2 = -leak + 2 q2 hold exactly as computed
  r.work = 2.0 * r.local_work;
  r.heat_hot = r.leak + 2.0 * r.local_heat_hot;
  r.heat_cold = -r.leak + 2.0 * r.local_heat_cold;

  r.uncoupled_efficiency = 1.0 - cp.field_cold / cp.field_hot;
  r.carnot_efficiency = 1.0 - cp.temp_cold / cp.temp_hot;

  if (r.heat_hot > classify_eps) r.efficiency = r.work / r.heat_hot;
  if (cp.field_hot > cp.field_cold) {
    if (std::abs(r.local_heat_hot) > classify_eps)
      r.local_efficiency = r.local_work / r.local_heat_hot;
  } else if (cp.field_cold > cp.field_hot) {
    if (std::abs(r.local_heat_cold) > classify_eps)
      r.local_efficiency = r.local_work / r.local_heat_cold;
  }
  r.bound = efficiency_bound(cp);

  r.local_temp_hot =
      local_temperature(ModelPoint{cp.exchange, cp.field_hot, cp.temp_hot});
  r.local_temp_cold =
      local_temperature(ModelPoint{cp.exchange, cp.field_cold, cp.temp_cold});
  return r;
}

std::optional<double> efficiency_bound(const CycleParams& cp) {
  const double four_j = 4.0 * cp.exchange;
  if (!(cp.field_hot > four_j)) return std::nullopt;
  const double eta0 = 1.0 - cp.field_cold / cp.field_hot;
  return eta0 / (1.0 - four_j / cp.field_hot);
}

RegimeReport classify(const CycleParams& cp, const CycleResult& r) {
  RegimeReport rep{};
  rep.is_engine = engine_flags(r);
  rep.field_case = cp.field_hot > cp.field_cold   ? FieldCase::decrease
                   : cp.field_hot < cp.field_cold ? FieldCase::increase
                                                  : FieldCase::degenerate;
  rep.beats_uncoupled = rep.is_engine &&
                        rep.field_case == FieldCase::decrease &&
                        r.efficiency.has_value() &&
                        *r.efficiency > r.uncoupled_efficiency;
  rep.local_counterflow = r.local_heat_hot < -classify_eps &&
                          r.local_heat_cold > classify_eps;
  rep.carnot_ok =
      !r.efficiency.has_value() || *r.efficiency < r.carnot_efficiency;
  rep.pwc_condition =
      cp.field_cold / cp.temp_cold > cp.field_hot / cp.temp_hot;

  const BoundAudit audit = bound_audit(cp, r);
  rep.audit_ok = audit.all();
  rep.bound_ok = !audit.applicable ||
                 (r.bound.has_value() && *r.efficiency < *r.bound &&
                  *r.bound < r.carnot_efficiency);
  return rep;
}

BoundAudit bound_audit(const CycleParams& cp, const CycleResult& r) {
  BoundAudit a{};
  a.applicable = cp.field_hot > cp.field_cold && engine_flags(r) &&
                 r.efficiency.has_value() &&
                 *r.efficiency > r.uncoupled_efficiency;
  if (!a.applicable) {
    a.ordering_ok = a.ratio_ok = a.exponent_ok = a.level_config_ok =
        a.population_balance_ok = a.bound_chain_ok = true;
    return a;
  }
  const LevelProbabilities& p = r.probs_hot;
  const LevelProbabilities& q = r.probs_cold;

  a.ordering_ok = p.singlet > q.singlet && p.triplet_zero > q.triplet_zero &&
                  p.anti_aligned > q.anti_aligned && q.aligned > p.aligned;
  // cross-multiplied so an extreme singlet weight cannot force 0/0 or
  // inf/inf; both products stay normal wherever the chain actually holds
  a.ratio_ok = q.aligned * p.singlet > p.aligned * q.singlet;
  a.exponent_ok =
      (cp.field_cold - 4.0 * cp.exchange) / cp.temp_cold >
      (cp.field_hot - 4.0 * cp.exchange) / cp.temp_hot;
  a.level_config_ok = cp.field_hot > 4.0 * cp.exchange &&
                      cp.field_cold > 4.0 * cp.exchange;
  a.population_balance_ok =
      (p.singlet - q.singlet) <
      (p.anti_aligned - q.anti_aligned) + (q.aligned - p.aligned);
  a.bound_chain_ok = r.bound.has_value() && *r.efficiency < *r.bound &&
                     *r.bound < r.carnot_efficiency;
  return a;
}

SignLink sign_link(const CycleParams& cp) {
  const CycleResult r = run_cycle(cp);
  SignLink link{};
  link.applicable = cp.field_hot > cp.field_cold &&
                    r.heat_hot > classify_eps && r.efficiency.has_value();
  link.leak_sign = band_sign(r.leak);
  link.gap_sign = link.applicable
                      ? band_sign(r.uncoupled_efficiency - *r.efficiency)
                      : 0;
  link.consistent = !link.applicable || link.leak_sign == link.gap_sign ||
                    link.leak_sign == 0 || link.gap_sign == 0;
  return link;
}

}  // namespace ottospin
