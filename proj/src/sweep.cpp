#include "ottospin/sweep.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <system_error>

namespace ottospin {

namespace {

CycleParams params_at(const SweepSpec& spec, double v) {
  double j = spec.exchange, b1 = spec.field_hot, b2 = spec.field_cold,
         t1 = spec.temp_hot, t2 = spec.temp_cold;
  switch (spec.variable) {
    case SweepVariable::exchange: j = v; break;
    case SweepVariable::field_hot: b1 = v; break;
    case SweepVariable::field_cold: b2 = v; break;
    case SweepVariable::temp_hot: t1 = v; break;
    case SweepVariable::temp_cold: t2 = v; break;
  }
  return CycleParams(j, b1, b2, t1, t2);
}

std::string format17(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

const char* variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::exchange: return "J";
    case SweepVariable::field_hot: return "B1";
    case SweepVariable::field_cold: return "B2";
    case SweepVariable::temp_hot: return "T1";
    case SweepVariable::temp_cold: return "T2";
  }
  return "?";
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.steps < 2) throw std::domain_error("sweep needs steps >= 2");
  if (!(spec.lo < spec.hi))
    throw std::domain_error("sweep range needs lo < hi");

  std::vector<SweepRow> rows;
  rows.reserve(static_cast<size_t>(spec.steps));
  double prev = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < spec.steps; ++k) {
    const double v = k == spec.steps - 1
                         ? spec.hi
                         : spec.lo + (spec.hi - spec.lo) * k / (spec.steps - 1);
    if (!(v > prev))
      throw std::domain_error("sweep grid too fine: repeated value " +
                              format17(v));
    prev = v;
    try {
      const CycleParams cp = params_at(spec, v);
      const CycleResult r = run_cycle(cp);
      rows.push_back({v, r, classify(cp, r)});
    } catch (const std::domain_error& e) {
      throw std::domain_error(std::string("sweep grid point ") +
                              variable_name(spec.variable) + " = " +
                              format17(v) + ": " + e.what());
    }
  }
  return rows;
}

namespace {

void append_field(std::string& out, double v) { out += format17(v); }

void append_field(std::string& out, const std::optional<double>& v) {
  if (v) out += format17(*v);
}

void append_field(std::string& out, bool v) { out += v ? "true" : "false"; }

}  // namespace

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = csv_header;
  out += '\n';
  for (const SweepRow& row : rows) {
    const CycleResult& r = row.result;
    append_field(out, row.value); out += ',';
    append_field(out, r.heat_hot); out += ',';
    append_field(out, r.heat_cold); out += ',';
    append_field(out, r.work); out += ',';
    append_field(out, r.efficiency); out += ',';
    append_field(out, r.uncoupled_efficiency); out += ',';
    append_field(out, r.bound); out += ',';
    append_field(out, r.carnot_efficiency); out += ',';
    append_field(out, r.leak); out += ',';
    append_field(out, r.local_heat_hot); out += ',';
    append_field(out, r.local_heat_cold); out += ',';
    append_field(out, r.local_temp_hot.value); out += ',';
    append_field(out, r.local_temp_cold.value); out += ',';
    append_field(out, row.regime.is_engine); out += ',';
    append_field(out, row.regime.beats_uncoupled); out += ',';
    append_field(out, row.regime.local_counterflow); out += '\n';
  }
  return out;
}

void write_csv_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + tmp);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place: " + path);
  }
}

namespace {

// eta(J) - eta0, or unset when the point is not efficiency-defined
std::optional<double> eta_gap(const CycleParams& base, double j) {
  const CycleParams cp(j, base.field_hot, base.field_cold, base.temp_hot,
                       base.temp_cold);
  const CycleResult r = run_cycle(cp);
  if (!r.efficiency) return std::nullopt;
  return *r.efficiency - r.uncoupled_efficiency;
}

bool gap_positive(const std::optional<double>& g) { return g && *g > 0.0; }

}  // namespace

CrossoverResult find_crossover(const CycleParams& params) {
  CrossoverResult out;
  if (!(params.field_hot > params.field_cold)) {
    out.note = "not a field-decrease configuration";
    return out;
  }
  const double jmax = params.field_hot / 4.0;

  // geometric scan toward B1/4; remember the last eta > eta0 point
  double lo = std::numeric_limits<double>::quiet_NaN();
  double hi = std::numeric_limits<double>::quiet_NaN();
  double first_scan = 0.0;
  for (int k = 1; k <= 40; ++k) {
    const double j = jmax * (1.0 - std::ldexp(1.0, -k));
    if (k == 1) first_scan = j;
    const auto g = eta_gap(params, j);
    if (gap_positive(g)) {
      lo = j;
    } else if (!std::isnan(lo)) {
      hi = j;
      break;
    }
  }
  if (std::isnan(lo)) {
    // even the first scan point is past the crossing; halve downward to
    // find the eta > eta0 side
    double right = first_scan;
    for (int m = 1; m <= 60; ++m) {
      const double j = std::ldexp(first_scan, -m);
      if (gap_positive(eta_gap(params, j))) {
        lo = j;
        hi = right;
        break;
      }
      right = j;
    }
  }
  if (std::isnan(lo) || std::isnan(hi)) {
    out.note = "no eta > eta0 crossing inside (0, B1/4)";
    return out;
  }

  while (hi - lo >= 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (gap_positive(eta_gap(params, mid)))
      lo = mid;
    else
      hi = mid;
  }

  const double j_star = 0.5 * (lo + hi);
  const auto g = eta_gap(params, j_star);
  if (!g || std::abs(*g) >= 1e-7) {
    out.note = "bracket located but |eta(J*) - eta0| certificate failed";
    return out;
  }
  out.found = true;
  out.j_star = j_star;
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  out.eta_at_j_star =
      *g + (1.0 - params.field_cold / params.field_hot);
  return out;
}

}  // namespace ottospin
