#ifndef OTTOSPIN_VERIFY_HPP
#define OTTOSPIN_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ottospin/otto_cycle.hpp"

// Seeded random sampling of valid cycle parameters and the property suite
// the `verify` subcommand runs over them.

namespace ottospin {

struct SamplePoint {
  double exchange;    // [0, 5]
  double field_hot;   // (0, 10]
  double field_cold;  // (0, 10]
  double temp_hot;    // (T2, 10]
  double temp_cold;   // [0.05, 5)
};

// Deterministic across platforms: raw mt19937_64 output quantized to a
// 2^-26 grid (no distribution adapters).  J and the fields land on exact
// dyadic multiples, which keeps the spectrum identities bit-exact.
std::vector<SamplePoint> sample_points(std::uint64_t count,
                                       std::uint64_t seed);

inline constexpr std::uint64_t no_failure = ~std::uint64_t{0};

struct VerifyInvariant {
  const char* name = "";
  std::uint64_t checked = 0;  // points where the precondition applied
  std::uint64_t failed = 0;
  std::uint64_t first_fail_index = no_failure;  // lowest failing sample
  std::string first_fail_detail;

  bool passed() const { return failed == 0; }
};

struct VerifyReport {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t engines = 0;
  std::uint64_t field_decrease_engines = 0;
  std::uint64_t field_increase_engines = 0;
  std::vector<VerifyInvariant> invariants;

  bool all_passed() const;
};

// Evaluates every invariant of the model over `samples` seeded points.
// Concurrency is capped by the OTTO_SPIN_THREADS environment variable;
// aggregation is order-independent (counts plus lowest failing index), so
// the report does not depend on the thread count.
VerifyReport run_verification(std::uint64_t samples, std::uint64_t seed);

// Fixed field order; failing points printed to full precision.
std::string format_report(const VerifyReport& report);

}  // namespace ottospin

#endif
