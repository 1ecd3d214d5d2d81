#include "ottospin/spin_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ottospin {

namespace {

// log(exp(a) + exp(b) + exp(c)) with max shift
double logsumexp3(double a, double b, double c) {
  const double m = std::max({a, b, c});
  return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

// log(sinh(b)) for b > 0 without overflowing sinh
double log_sinh(double b) {
  if (b > 350.0) return b - std::log(2.0) + std::log1p(-std::exp(-2.0 * b));
  return std::log(std::sinh(b));
}

}  // namespace

ModelPoint::ModelPoint(double exchange_, double field_, double temperature_)
    : exchange(exchange_), field(field_), temperature(temperature_) {
  if (!(exchange >= 0.0) || !std::isfinite(exchange))
    throw std::domain_error("exchange constant must satisfy J >= 0");
  if (!(field >= 0.0) || !std::isfinite(field))
    throw std::domain_error("field must satisfy B >= 0");
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw std::domain_error("temperature must satisfy T > 0");
}

Spectrum spectrum(const ModelPoint& pt) {
  const double j = pt.exchange, b = pt.field;
  return {-6.0 * j, 2.0 * j - 2.0 * b, 2.0 * j, 2.0 * j + 2.0 * b};
}

LevelProbabilities thermal_probs(const ModelPoint& pt) {
  const double s = 8.0 * pt.exchange / pt.temperature;
  const double b = 2.0 * pt.field / pt.temperature;
  const double m = std::max({s, b, 0.0});
  const double w1 = std::exp(s - m);
  const double w2 = std::exp(b - m);
  const double w3 = std::exp(-m);
  const double w4 = std::exp(-b - m);
  const double z = w1 + w2 + w3 + w4;
  return {w1 / z, w2 / z, w3 / z, w4 / z};
}

Eigen::Matrix4d pair_hamiltonian(double exchange, double field) {
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h(0, 0) = 2.0 * exchange + 2.0 * field;
  h(1, 1) = -2.0 * exchange;
  h(2, 2) = -2.0 * exchange;
  h(3, 3) = 2.0 * exchange - 2.0 * field;
  h(1, 2) = 4.0 * exchange;
  h(2, 1) = 4.0 * exchange;
  return h;
}

namespace {

struct OracleDecomposition {
  Eigen::Vector4d occupations;  // Gibbs weight of each numeric eigenvector
  Eigen::Matrix4d vectors;      // columns, eigenvalue-ascending
  Eigen::Vector4d energies;
};

OracleDecomposition decompose(const ModelPoint& pt) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(
      pair_hamiltonian(pt.exchange, pt.field));
  const Eigen::Vector4d e = solver.eigenvalues();
  Eigen::Vector4d w;
  const double e0 = e.minCoeff();
  for (int i = 0; i < 4; ++i) w(i) = std::exp(-(e(i) - e0) / pt.temperature);
  w /= w.sum();
  return {w, solver.eigenvectors(), e};
}

}  // namespace

TwoSpinState gibbs_state_oracle(const ModelPoint& pt) {
  const OracleDecomposition d = decompose(pt);
  TwoSpinState rho = TwoSpinState::Zero();
  for (int i = 0; i < 4; ++i)
    rho += d.occupations(i) * d.vectors.col(i) * d.vectors.col(i).transpose();
  return rho;
}

LevelProbabilities oracle_level_probs(const ModelPoint& pt) {
  const OracleDecomposition d = decompose(pt);
  const Spectrum s = spectrum(pt);
  const std::array<double, 4> analytic{s.singlet, s.aligned, s.triplet_zero,
                                       s.anti_aligned};
  // pair the ascending numeric eigenvalues with the ascending analytic ones;
  // equal-energy levels carry equal Gibbs weight, so ties cannot mismatch
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return analytic[a] < analytic[b]; });
  std::array<double, 4> p{};
  for (int rank = 0; rank < 4; ++rank) p[order[rank]] = d.occupations(rank);
  return {p[0], p[1], p[2], p[3]};
}

SingleSpinState reduced_state(const LevelProbabilities& probs) {
  const double x = probs.aligned - probs.anti_aligned;
  return {0.5 - 0.5 * x, 0.5 + 0.5 * x};
}

Eigen::Matrix2d partial_trace(const TwoSpinState& rho, int keep) {
  if (keep != 0 && keep != 1) throw std::domain_error("keep must be 0 or 1");
  // basis index of |ab> is 2*(1-a) + (1-b) with a, b in {1, 0}
  const auto idx = [&](int kept, int summed) {
    const int a = keep == 0 ? kept : summed;
    const int b = keep == 0 ? summed : kept;
    return 2 * (1 - a) + (1 - b);
  };
  Eigen::Matrix2d out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      // row/col 0 is the local |1> state
      const int kr = 1 - r, kc = 1 - c;
      out(r, c) = rho(idx(kr, 1), idx(kc, 1)) + rho(idx(kr, 0), idx(kc, 0));
    }
  return out;
}

double local_temperature(double field, const LevelProbabilities& probs) {
  if (!(field > 0.0))
    throw std::domain_error("local temperature undefined at B = 0");
  if (probs.aligned == probs.anti_aligned)
    throw std::domain_error(
        "local temperature undefined: polarization vanishes");
  const double denom = 1.0 + probs.anti_aligned - probs.aligned;
  if (denom <= 0.0)
    throw std::domain_error(
        "polarization saturated at double precision; evaluate from the "
        "model point instead");
  return 2.0 * field / std::log(2.0 / denom - 1.0);
}

LocalTemperature local_temperature(const ModelPoint& pt) {
  if (!(pt.field > 0.0))
    throw std::domain_error("local temperature undefined at B = 0");
  const double s = 8.0 * pt.exchange / pt.temperature;
  const double b = 2.0 * pt.field / pt.temperature;
  // (1+x)/(1-x) = (1 + e^s + 2 e^b) / (1 + e^s + 2 e^-b) = 1 + t with
  // t = 4 sinh(b) / (1 + e^s + 2 e^-b); gap = log1p(t)
  const double log_t =
      std::log(4.0) + log_sinh(b) - logsumexp3(0.0, s, std::log(2.0) - b);
  double gap, log_gap;
  if (log_t > 36.0) {
    gap = log_t + std::log1p(std::exp(-log_t));
    log_gap = std::log(gap);
  } else {
    gap = std::log1p(std::exp(log_t));  // exp may underflow; gap +0 then
    log_gap = log_t < -36.0 ? log_t : std::log(gap);
  }
  return {2.0 * pt.field / gap, log_gap};
}

}  // namespace ottospin
