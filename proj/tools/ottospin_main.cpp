#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "ottospin/otto_cycle.hpp"
#include "ottospin/sweep.hpp"
#include "ottospin/verify.hpp"

// Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
// 3 I/O error.

namespace {

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt12(const std::optional<double>& v) {
  return v ? fmt12(*v) : "undefined";
}

const char* bool_str(bool v) { return v ? "true" : "false"; }

void line(std::string& out, const char* key, const std::string& value) {
  std::string k(key);
  if (k.size() < 19) k.append(19 - k.size(), ' ');
  out += k + value + "\n";
}

int cmd_cycle(double j, double b1, double b2, double t1, double t2) {
  const ottospin::CycleParams cp(j, b1, b2, t1, t2);
  const ottospin::CycleResult r = ottospin::run_cycle(cp);
  const ottospin::RegimeReport regime = ottospin::classify(cp, r);
  const ottospin::BoundAudit audit = ottospin::bound_audit(cp, r);
  const ottospin::SignLink link = ottospin::sign_link(cp);

  const char* field_case = regime.field_case == ottospin::FieldCase::decrease
                               ? "decrease"
                           : regime.field_case == ottospin::FieldCase::increase
                               ? "increase"
                               : "degenerate";

  std::string out;
  line(out, "parameters", "J=" + fmt12(j) + " B1=" + fmt12(b1) +
                              " B2=" + fmt12(b2) + " T1=" + fmt12(t1) +
                              " T2=" + fmt12(t2));
  line(out, "Q1", fmt12(r.heat_hot));
  line(out, "Q2", fmt12(r.heat_cold));
  line(out, "W", fmt12(r.work));
  line(out, "q1", fmt12(r.local_heat_hot));
  line(out, "q2", fmt12(r.local_heat_cold));
  line(out, "w", fmt12(r.local_work));
  line(out, "leak", fmt12(r.leak));
  line(out, "eta", fmt12(r.efficiency));
  line(out, "eta_local", fmt12(r.local_efficiency));
  line(out, "eta0", fmt12(r.uncoupled_efficiency));
  line(out, "bound", fmt12(r.bound));
  line(out, "eta_carnot", fmt12(r.carnot_efficiency));
  line(out, "T1_local", fmt12(r.local_temp_hot.value));
  line(out, "T2_local", fmt12(r.local_temp_cold.value));
  line(out, "is_engine", bool_str(regime.is_engine));
  line(out, "field_case", field_case);
  line(out, "beats_uncoupled", bool_str(regime.beats_uncoupled));
  line(out, "local_counterflow", bool_str(regime.local_counterflow));
  line(out, "pwc_condition", bool_str(regime.pwc_condition));
  line(out, "carnot_ok", bool_str(regime.carnot_ok));
  line(out, "bound_ok", bool_str(regime.bound_ok));
  line(out, "audit_applicable", bool_str(audit.applicable));
  line(out, "audit_ordering", bool_str(audit.ordering_ok));
  line(out, "audit_ratio", bool_str(audit.ratio_ok));
  line(out, "audit_exponent", bool_str(audit.exponent_ok));
  line(out, "audit_levels", bool_str(audit.level_config_ok));
  line(out, "audit_balance", bool_str(audit.population_balance_ok));
  line(out, "audit_chain", bool_str(audit.bound_chain_ok));
  line(out, "audit_ok", bool_str(audit.all()));
  line(out, "sign_applicable", bool_str(link.applicable));
  line(out, "leak_sign", std::to_string(link.leak_sign));
  line(out, "gap_sign", std::to_string(link.gap_sign));
  line(out, "sign_consistent", bool_str(link.consistent));
  std::fputs(out.c_str(), stdout);
  return 0;
}

ottospin::SweepVariable parse_variable(const std::string& s) {
  if (s == "j") return ottospin::SweepVariable::exchange;
  if (s == "b1") return ottospin::SweepVariable::field_hot;
  if (s == "b2") return ottospin::SweepVariable::field_cold;
  if (s == "t1") return ottospin::SweepVariable::temp_hot;
  return ottospin::SweepVariable::temp_cold;
}

int cmd_sweep(const std::string& var, double j, double b1, double b2,
              double t1, double t2, double lo, double hi, int steps,
              const std::string& output) {
  ottospin::SweepSpec spec;
  spec.variable = parse_variable(var);
  spec.exchange = j;
  spec.field_hot = b1;
  spec.field_cold = b2;
  spec.temp_hot = t1;
  spec.temp_cold = t2;
  spec.lo = lo;
  spec.hi = hi;
  spec.steps = steps;

  const double fixed[5] = {j, b1, b2, t1, t2};
  const char* flags[5] = {"--j", "--b1", "--b2", "--t1", "--t2"};
  for (int i = 0; i < 5; ++i) {
    if (static_cast<ottospin::SweepVariable>(i) == spec.variable) continue;
    if (!std::isfinite(fixed[i]))
      throw std::domain_error(std::string("sweep requires ") + flags[i]);
  }

  const std::vector<ottospin::SweepRow> rows = ottospin::run_sweep(spec);
  ottospin::write_csv_atomic(output, ottospin::to_csv(rows));
  std::printf("wrote %s (%zu rows)\n", output.c_str(), rows.size());
  return 0;
}

int cmd_verify(std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0)
    throw std::domain_error("--samples requires N >= 1");
  const ottospin::VerifyReport rep = ottospin::run_verification(samples, seed);
  std::fputs(ottospin::format_report(rep).c_str(), stdout);
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled two-spin Otto cycle calculator"};
  app.require_subcommand(1);

  constexpr double unset = std::numeric_limits<double>::quiet_NaN();

  CLI::App* cyc = app.add_subcommand("cycle", "evaluate one cycle");
  double cj = unset, cb1 = unset, cb2 = unset, ct1 = unset, ct2 = unset;
  cyc->add_option("--j", cj, "exchange constant J >= 0")->required();
  cyc->add_option("--b1", cb1, "hot-stage field B1 > 0")->required();
  cyc->add_option("--b2", cb2, "cold-stage field B2 > 0")->required();
  cyc->add_option("--t1", ct1, "hot bath temperature")->required();
  cyc->add_option("--t2", ct2, "cold bath temperature, T1 > T2 > 0")
      ->required();

  CLI::App* swp = app.add_subcommand("sweep", "sweep one parameter to CSV");
  std::string var, output;
  double sj = unset, sb1 = unset, sb2 = unset, st1 = unset, st2 = unset;
  double lo = unset, hi = unset;
  int steps = 0;
  swp->add_option("--var", var, "swept parameter")
      ->required()
      ->check(CLI::IsMember({"j", "b1", "b2", "t1", "t2"}));
  swp->add_option("--lo", lo, "sweep start")->required();
  swp->add_option("--hi", hi, "sweep end, lo < hi")->required();
  swp->add_option("--steps", steps, "grid points, >= 2")->required();
  swp->add_option("--j", sj, "fixed J (ignored when swept)");
  swp->add_option("--b1", sb1, "fixed B1 (ignored when swept)");
  swp->add_option("--b2", sb2, "fixed B2 (ignored when swept)");
  swp->add_option("--t1", st1, "fixed T1 (ignored when swept)");
  swp->add_option("--t2", st2, "fixed T2 (ignored when swept)");
  swp->add_option("--output", output, "CSV destination path")->required();

  CLI::App* ver = app.add_subcommand("verify", "run the sampled checks");
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  ver->add_option("--samples", samples, "sample count, >= 1");
  ver->add_option("--seed", seed, "sampler seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cyc) return cmd_cycle(cj, cb1, cb2, ct1, ct2);
    if (*swp)
      return cmd_sweep(var, sj, sb1, sb2, st1, st2, lo, hi, steps, output);
    return cmd_verify(samples, seed);
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
