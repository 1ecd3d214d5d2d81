#include "ottospin/verify.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <string>
#include <thread>

namespace ottospin {

namespace {

constexpr double grid = 1.0 / 67108864.0;  // 2^-26

// top 26 bits of the raw engine word; identical on every platform, unlike
// the standard distribution adapters
double draw26(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 38);
}

enum Invariant : std::size_t {
  inv_normalization,
  inv_range_order,
  inv_spectrum,
  inv_oracle_probs,
  inv_oracle_trace,
  inv_first_law,
  inv_local_decomp,
  inv_second_law,
  inv_bound_audit,
  inv_field_increase,
  inv_temp_elevation,
  inv_temp_gradient,
  inv_uncoupled_engine,
  inv_uncoupled_temp,
  inv_evaluation,
  n_invariants
};

constexpr const char* invariant_names[n_invariants] = {
    "probability normalization",
    "probability range and order",
    "spectrum identities",
    "oracle level probabilities",
    "oracle partial trace",
    "first law",
    "local decomposition",
    "second law",
    "efficiency bound audit",
    "field-increase conditions",
    "local temperature elevation",
    "local temperature gradient",
    "uncoupled engine criterion",
    "uncoupled local temperature",
    "evaluation completes",
};

struct Stats {
  std::array<VerifyInvariant, n_invariants> inv{};
  std::uint64_t engines = 0;
  std::uint64_t field_decrease_engines = 0;
  std::uint64_t field_increase_engines = 0;
};

std::string num17(double v) {
  char buf[32];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string describe(const SamplePoint& sp) {
  return "J=" + num17(sp.exchange) + " B1=" + num17(sp.field_hot) +
         " B2=" + num17(sp.field_cold) + " T1=" + num17(sp.temp_hot) +
         " T2=" + num17(sp.temp_cold);
}

void record(Stats& st, Invariant which, std::uint64_t idx, bool ok,
            const SamplePoint& sp, const char* what) {
  VerifyInvariant& s = st.inv[which];
  ++s.checked;
  if (ok) return;
  ++s.failed;
  if (idx < s.first_fail_index) {
    s.first_fail_index = idx;
    s.first_fail_detail = describe(sp) + ": " + what;
  }
}

// strict order, except that equality is excused once both values sit deep
// in the underflow zone where doubles can no longer resolve the gap
bool prob_above(double hi, double lo) {
  return hi > lo || (hi == lo && hi <= 1e-280);
}

struct ProbFlags {
  bool normalized;
  bool in_range;
  bool ordered;
};

ProbFlags probe_probs(const LevelProbabilities& p, const ModelPoint& mp) {
  const double s = 8.0 * mp.exchange / mp.temperature;
  const double b = 2.0 * mp.field / mp.temperature;
  const double shift = std::max({s, b, 0.0});
  const double logw[4] = {s - shift, b - shift, -shift, -b - shift};
  const double v[4] = {p.singlet, p.aligned, p.triplet_zero, p.anti_aligned};

  ProbFlags f;
  const double sum = v[0] + v[1] + v[2] + v[3];
  f.normalized = std::abs(sum - 1.0) <= 1e-14;

  // analytic values are open-interval; a closed endpoint is excused only
  // when the shifted exponent says the double had to round there
  f.in_range = true;
  for (int i = 0; i < 4 && f.in_range; ++i) {
    if (!(v[i] >= 0.0 && v[i] <= 1.0)) f.in_range = false;
    if (v[i] == 0.0 && !(logw[i] < -708.0)) f.in_range = false;
    if (v[i] == 1.0)
      for (int k = 0; k < 4; ++k)
        if (k != i && !(logw[k] < -36.0)) f.in_range = false;
  }

  f.ordered = prob_above(v[1], v[2]) && prob_above(v[2], v[3]);
  return f;
}

bool probs_close(const LevelProbabilities& a, const LevelProbabilities& b,
                 double tol) {
  return std::abs(a.singlet - b.singlet) <= tol &&
         std::abs(a.aligned - b.aligned) <= tol &&
         std::abs(a.triplet_zero - b.triplet_zero) <= tol &&
         std::abs(a.anti_aligned - b.anti_aligned) <= tol;
}

bool traces_match(const ModelPoint& mp, const LevelProbabilities& p) {
  const TwoSpinState rho = gibbs_state_oracle(mp);
  const SingleSpinState direct = reduced_state(p);
  for (int keep = 0; keep < 2; ++keep) {
    const Eigen::Matrix2d red = partial_trace(rho, keep);
    if (std::abs(red(0, 0) - direct.up) > 1e-12) return false;
    if (std::abs(red(1, 1) - direct.down) > 1e-12) return false;
    if (std::abs(red(0, 1)) > 1e-12 || std::abs(red(1, 0)) > 1e-12)
      return false;
  }
  return true;
}

void check_point(std::uint64_t idx, const SamplePoint& sp, Stats& st) {
  const CycleParams cp(sp.exchange, sp.field_hot, sp.field_cold, sp.temp_hot,
                       sp.temp_cold);
  const CycleResult r = run_cycle(cp);
  const RegimeReport regime = classify(cp, r);
  const ModelPoint hot(cp.exchange, cp.field_hot, cp.temp_hot);
  const ModelPoint cold(cp.exchange, cp.field_cold, cp.temp_cold);

  if (regime.is_engine) {
    ++st.engines;
    if (regime.field_case == FieldCase::decrease) ++st.field_decrease_engines;
    if (regime.field_case == FieldCase::increase) ++st.field_increase_engines;
  }

  const ProbFlags ph = probe_probs(r.probs_hot, hot);
  const ProbFlags pc = probe_probs(r.probs_cold, cold);
  record(st, inv_normalization, idx, ph.normalized && pc.normalized, sp,
         "occupations do not sum to 1");
  record(st, inv_range_order, idx,
         ph.in_range && pc.in_range && ph.ordered && pc.ordered, sp,
         "occupation outside (0,1) or field-split order broken");

  // the sampler's dyadic grid makes these gaps exact, so compare bitwise
  const Spectrum sh = spectrum(hot);
  const Spectrum sc = spectrum(cold);
  const bool spec_ok = sh.anti_aligned - sh.aligned == 4.0 * cp.field_hot &&
                       sc.anti_aligned - sc.aligned == 4.0 * cp.field_cold &&
                       sh.triplet_zero - sh.singlet == 8.0 * cp.exchange &&
                       sc.triplet_zero - sc.singlet == 8.0 * cp.exchange &&
                       sh.triplet_zero == 2.0 * cp.exchange &&
                       sc.triplet_zero == 2.0 * cp.exchange;
  record(st, inv_spectrum, idx, spec_ok, sp, "level gaps off the closed form");

  record(st, inv_oracle_probs, idx,
         probs_close(oracle_level_probs(hot), r.probs_hot, 1e-10) &&
             probs_close(oracle_level_probs(cold), r.probs_cold, 1e-10),
         sp, "diagonalized occupations disagree with the closed form");

  record(st, inv_oracle_trace, idx,
         traces_match(hot, r.probs_hot) && traces_match(cold, r.probs_cold),
         sp, "partial trace disagrees with the reduced closed form");

  const double scale =
      std::max({std::abs(r.work), std::abs(r.heat_hot), std::abs(r.heat_cold)});
  record(st, inv_first_law, idx,
         std::abs(r.work - (r.heat_hot + r.heat_cold)) <=
             std::max(1e-13 * scale, 1e-15),
         sp, "W != Q1 + Q2");

  // same expressions run_cycle used, so equality is exact
  const bool decomp_ok =
      r.work == 2.0 * r.local_work &&
      r.heat_hot == r.leak + 2.0 * r.local_heat_hot &&
      r.heat_cold == -r.leak + 2.0 * r.local_heat_cold &&
      r.local_work == r.local_heat_hot + r.local_heat_cold;
  record(st, inv_local_decomp, idx, decomp_ok, sp,
         "global quantities do not decompose into per-spin terms");

  if (regime.is_engine)
    record(st, inv_second_law, idx,
           r.efficiency && *r.efficiency < r.carnot_efficiency, sp,
           "engine efficiency not below Carnot");

  const BoundAudit audit = bound_audit(cp, r);
  if (audit.applicable)
    record(st, inv_bound_audit, idx, audit.all() && regime.bound_ok, sp,
           "a link of the bound chain failed");

  if (regime.is_engine && regime.field_case == FieldCase::increase) {
    const LevelProbabilities& p = r.probs_hot;
    const LevelProbabilities& q = r.probs_cold;
    const bool order_ok =
        p.anti_aligned > q.anti_aligned && p.triplet_zero > q.triplet_zero &&
        p.aligned > q.aligned && q.singlet > p.singlet;
    const bool sign_ok = r.local_heat_hot < 0.0 && r.local_heat_cold > 0.0;
    const bool eff_ok = std::abs(r.local_work / r.local_heat_cold -
                                 (1.0 - cp.field_hot / cp.field_cold)) <= 1e-12;
    record(st, inv_field_increase, idx, order_ok && sign_ok && eff_ok, sp,
           "field-increase engine without the required occupation flow");
  }

  if (cp.exchange > 0.0)
    record(st, inv_temp_elevation, idx,
           r.local_temp_hot.value > cp.temp_hot &&
               r.local_temp_cold.value > cp.temp_cold,
           sp, "coupling failed to raise a local temperature");

  // engines must draw from the locally hotter side; compare inverse local
  // temperatures through log_gap, which stays finite where T' overflows
  if (regime.is_engine && regime.field_case != FieldCase::degenerate) {
    const double lg1 = r.local_temp_hot.log_gap;
    const double lg2 = r.local_temp_cold.log_gap;
    bool grad_ok;
    if (regime.field_case == FieldCase::decrease)
      grad_ok = lg2 > lg1 &&
                std::log(cp.field_hot) - lg1 > std::log(cp.field_cold) - lg2;
    else
      grad_ok = lg1 > lg2 &&
                std::log(cp.field_cold) - lg2 > std::log(cp.field_hot) - lg1;
    record(st, inv_temp_gradient, idx, grad_ok, sp,
           "local bath ordering broken at an engine point");
  }

  // companion point at zero coupling: the engine window must reduce to the
  // bare two-level criterion, modulo the classification band
  const CycleParams cp0(0.0, cp.field_hot, cp.field_cold, cp.temp_hot,
                        cp.temp_cold);
  const CycleResult r0 = run_cycle(cp0);
  const RegimeReport reg0 = classify(cp0, r0);
  const bool criterion =
      cp.field_hot > cp.field_cold &&
      cp.field_cold / cp.temp_cold > cp.field_hot / cp.temp_hot;
  bool unc_ok = true;
  if (reg0.is_engine && !criterion) unc_ok = false;
  if (criterion && r0.work > 1e-11 && r0.heat_hot > 1e-11 &&
      r0.heat_cold < -1e-11 && !reg0.is_engine)
    unc_ok = false;
  record(st, inv_uncoupled_engine, idx, unc_ok, sp,
         "zero-coupling engine window off the two-level criterion");

  const LocalTemperature u1 =
      local_temperature(ModelPoint(0.0, cp.field_hot, cp.temp_hot));
  const LocalTemperature u2 =
      local_temperature(ModelPoint(0.0, cp.field_cold, cp.temp_cold));
  record(st, inv_uncoupled_temp, idx,
         std::abs(u1.value - cp.temp_hot) <= 1e-10 &&
             std::abs(u2.value - cp.temp_cold) <= 1e-10,
         sp, "zero-coupling local temperature drifted off the bath");
}

void run_chunk(const std::vector<SamplePoint>& pts, std::uint64_t lo,
               std::uint64_t hi, Stats& st) {
  for (std::uint64_t i = lo; i < hi; ++i) {
    try {
      check_point(i, pts[i], st);
      record(st, inv_evaluation, i, true, pts[i], "");
    } catch (const std::exception& e) {
      record(st, inv_evaluation, i, false, pts[i], e.what());
    }
  }
}

void merge(Stats& into, const Stats& from) {
  for (std::size_t k = 0; k < n_invariants; ++k) {
    into.inv[k].checked += from.inv[k].checked;
    into.inv[k].failed += from.inv[k].failed;
    if (from.inv[k].first_fail_index < into.inv[k].first_fail_index) {
      into.inv[k].first_fail_index = from.inv[k].first_fail_index;
      into.inv[k].first_fail_detail = from.inv[k].first_fail_detail;
    }
  }
  into.engines += from.engines;
  into.field_decrease_engines += from.field_decrease_engines;
  into.field_increase_engines += from.field_increase_engines;
}

unsigned thread_count(std::uint64_t samples) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("OTTO_SPIN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      n = static_cast<unsigned>(std::min(v, 64L));
  }
  const std::uint64_t cap = std::max<std::uint64_t>(1, samples / 1024);
  return static_cast<unsigned>(std::min<std::uint64_t>(n, cap));
}

}  // namespace

std::vector<SamplePoint> sample_points(std::uint64_t count,
                                       std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<SamplePoint> pts;
  pts.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double kj = draw26(eng);
    const double kb1 = draw26(eng);
    const double kb2 = draw26(eng);
    const double kt2 = draw26(eng);
    const double kt1 = draw26(eng);
    SamplePoint sp;
    sp.exchange = 5.0 * (kj * grid);
    sp.field_hot = 10.0 * ((kb1 + 1.0) * grid);
    sp.field_cold = 10.0 * ((kb2 + 1.0) * grid);
    sp.temp_cold = 0.05 + 4.95 * (kt2 * grid);
    sp.temp_hot = std::min(
        10.0, sp.temp_cold + (10.0 - sp.temp_cold) * ((kt1 + 1.0) * grid));
    pts.push_back(sp);
  }
  return pts;
}

bool VerifyReport::all_passed() const {
  for (const VerifyInvariant& s : invariants)
    if (s.failed != 0) return false;
  return true;
}

VerifyReport run_verification(std::uint64_t samples, std::uint64_t seed) {
  const std::vector<SamplePoint> pts = sample_points(samples, seed);
  const unsigned workers = thread_count(samples);
  std::vector<Stats> stats(workers);

  if (workers == 1) {
    run_chunk(pts, 0, samples, stats[0]);
  } else {
    std::vector<std::thread> threads;
    const std::uint64_t chunk = (samples + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
      const std::uint64_t lo = t * chunk;
      const std::uint64_t hi = std::min<std::uint64_t>(samples, lo + chunk);
      if (lo >= hi) break;
      threads.emplace_back(
          [&pts, lo, hi, &st = stats[t]] { run_chunk(pts, lo, hi, st); });
    }
    for (std::thread& th : threads) th.join();
  }

  Stats total;
  for (const Stats& st : stats) merge(total, st);

  VerifyReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.engines = total.engines;
  rep.field_decrease_engines = total.field_decrease_engines;
  rep.field_increase_engines = total.field_increase_engines;
  rep.invariants.assign(total.inv.begin(), total.inv.end());
  for (std::size_t k = 0; k < n_invariants; ++k)
    rep.invariants[k].name = invariant_names[k];
  return rep;
}

std::string format_report(const VerifyReport& rep) {
  std::string out;
  out += "verification: samples=" + std::to_string(rep.samples) +
         " seed=" + std::to_string(rep.seed) + "\n";
  out += "engines: total=" + std::to_string(rep.engines) +
         " field_decrease=" + std::to_string(rep.field_decrease_engines) +
         " field_increase=" + std::to_string(rep.field_increase_engines) +
         "\n";
  for (const VerifyInvariant& s : rep.invariants) {
    std::string name(s.name);
    if (name.size() < 28) name.append(28 - name.size(), ' ');
    out += (s.passed() ? "ok   " : "FAIL ") + name +
           " checked=" + std::to_string(s.checked) +
           " failed=" + std::to_string(s.failed) + "\n";
    if (!s.passed())
      out += "     first failure: sample " + std::to_string(s.first_fail_index) +
             ", " + s.first_fail_detail + "\n";
  }
  out += rep.all_passed() ? "result: PASS\n" : "result: FAIL\n";
  return out;
}

}  // namespace ottospin
