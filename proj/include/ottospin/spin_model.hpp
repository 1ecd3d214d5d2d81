#ifndef OTTOSPIN_SPIN_MODEL_HPP
#define OTTOSPIN_SPIN_MODEL_HPP

#include <Eigen/Dense>

// Two exchange-coupled spin-1/2 particles in a shared magnetic field,
//   H = J (cross-coupling of the two spins) + B (sz1 + sz2),
// antiferromagnetic coupling only (J >= 0), k_B = 1.
// Product basis order is fixed everywhere: {|11>, |10>, |01>, |00>}.

namespace ottospin {

struct ModelPoint {
  double exchange;     // J >= 0
  double field;        // B >= 0
  double temperature;  // T > 0

  // throws std::domain_error on violated ranges
  ModelPoint(double exchange, double field, double temperature);
};

// Energy eigenvalues.  Level order is fixed: singlet (|10>-|01>)/sqrt2,
// field-aligned |00>, triplet zero (|10>+|01>)/sqrt2, field-opposed |11>.
struct Spectrum {
  double singlet;       // -6J
  double aligned;       // 2J - 2B
  double triplet_zero;  // 2J
  double anti_aligned;  // 2J + 2B
};

// Thermal occupations, same level order as Spectrum.  Entries sum to 1.
// The analytic values are strictly inside (0,1); an entry can round to a
// closed endpoint once exponent gaps pass the double range (~708).
struct LevelProbabilities {
  double singlet;       // ~ exp(8J/T)
  double aligned;       // ~ exp(2B/T)
  double triplet_zero;  // ~ 1
  double anti_aligned;  // ~ exp(-2B/T)
};

// Diagonal of one spin's reduced density matrix in the {|1>, |0>} basis.
// Off-diagonals vanish for every thermal state of this model.
struct SingleSpinState {
  double up;    // 1/2 - (p_aligned - p_anti_aligned)/2
  double down;  // 1/2 + (p_aligned - p_anti_aligned)/2
};

// Real symmetric 4x4 density matrix in the fixed product basis.
using TwoSpinState = Eigen::Matrix4d;

Spectrum spectrum(const ModelPoint& pt);

// Closed-form Gibbs occupations with max-shifted exponentials, so large
// 8J/T or 2B/T never overflow.
LevelProbabilities thermal_probs(const ModelPoint& pt);

// H as an explicit matrix: diagonal (2J+2B, -2J, -2J, 2J-2B) plus a 4J
// coupling between |10> and |01>.
Eigen::Matrix4d pair_hamiltonian(double exchange, double field);

// exp(-H/T)/Z built by numeric diagonalization of pair_hamiltonian; a
// deliberately independent route from thermal_probs.
TwoSpinState gibbs_state_oracle(const ModelPoint& pt);

// Occupations of the numeric eigenvectors, matched to the analytic level
// order by eigenvalue.  Gibbs weights depend on the energy alone, so the
// matching is unambiguous even at level crossings.
LevelProbabilities oracle_level_probs(const ModelPoint& pt);

SingleSpinState reduced_state(const LevelProbabilities& probs);

// Numeric partial trace keeping spin 0 (first) or spin 1 (second); the
// thermal states of this model give the same result for either.
Eigen::Matrix2d partial_trace(const TwoSpinState& rho, int keep);

// Temperature of the two-level Gibbs state matching one spin's reduced
// populations under its local splitting 2B.  Direct textbook form;
// throws std::domain_error when B <= 0, when the polarization
// p_aligned - p_anti_aligned vanishes, or when it has rounded to 1 (use
// the ModelPoint overload there).
double local_temperature(double field, const LevelProbabilities& probs);

// Same temperature from the model point, evaluated in the log domain:
//   gap = log((1+x)/(1-x)),  x = p_aligned - p_anti_aligned,
//   value = 2B / gap.
// Stays accurate where x rounds to 1.  log_gap = log(gap) is finite even
// when gap itself underflows (value then +inf); since B/T' = gap/2, the
// log_gap fields order local inverse temperatures without overflow.
struct LocalTemperature {
  double value;
  double log_gap;
};

LocalTemperature local_temperature(const ModelPoint& pt);

}  // namespace ottospin

#endif
