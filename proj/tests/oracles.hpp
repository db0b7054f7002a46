#pragma once

// Test-only oracles, independent of the quaternion implementation path.

#include "ddsim/engine.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>

namespace oracles {

using Matrix2cd = Eigen::Matrix2cd;
inline const std::complex<double> kI{0.0, 1.0};

inline Matrix2cd sigma_x() {
  Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix2cd sigma_y() {
  Matrix2cd m;
  m << 0, -kI, kI, 0;
  return m;
}
inline Matrix2cd sigma_z() {
  Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

// H = delta_omega * Sz + omega_1 * (n . S), S = sigma/2, for one pulse.
inline Matrix2cd pulse_hamiltonian(const ddsim::PulseErrorSample& s, ddsim::PulseAxis axis,
                                   const ddsim::ErrorModelConfig& c) {
  const bool x = (axis == ddsim::PulseAxis::X);
  const double eps = x ? s.eps_x : s.eps_y;
  const double omega1 = (M_PI + eps) / c.t_pulse;
  Eigen::Vector3d n = x ? Eigen::Vector3d(1.0, s.n_y, s.n_z)
                        : Eigen::Vector3d(s.m_x, 1.0, s.m_z);
  n.normalize();
  return 0.5 * omega1 * (n.x() * sigma_x() + n.y() * sigma_y() + n.z() * sigma_z()) +
         0.5 * s.delta_omega * sigma_z();
}

inline Matrix2cd free_hamiltonian(double delta_omega) {
  return 0.5 * delta_omega * sigma_z();
}

// Propagates the density matrix rho = (I + s.sigma)/2 through the program with
// U = exp(-i H t) per event (Pade matrix exponential), returns the Bloch vector.
inline Eigen::Vector3d bloch_after(const ddsim::SequenceProgram& program,
                                   const ddsim::PulseErrorSample& sample,
                                   const ddsim::ErrorModelConfig& config,
                                   const Eigen::Vector3d& initial) {
  Matrix2cd rho = 0.5 * (Matrix2cd::Identity() + initial.x() * sigma_x() +
                         initial.y() * sigma_y() + initial.z() * sigma_z());
  for (const auto& e : program.events) {
    const double t = e.is_pulse() ? config.t_pulse : e.duration;
    const Matrix2cd h = e.is_pulse() ? pulse_hamiltonian(sample, e.axis, config)
                                     : free_hamiltonian(sample.delta_omega);
    const Matrix2cd u = (-kI * t * h).exp();
    rho = u * rho * u.adjoint();
  }
  return {(rho * sigma_x()).trace().real(), (rho * sigma_y()).trace().real(),
          (rho * sigma_z()).trace().real()};
}

// Analytic CDF of the quadratic-profile distribution on [-2*scale, scale]:
// P(v) = (1/2 scale)/sqrt(3 (1 - v/scale)).
inline double quadratic_profile_cdf(double value, double scale) {
  if (value <= -2.0 * scale) return 0.0;
  if (value >= scale) return 1.0;
  return 1.0 - std::sqrt((1.0 - value / scale) / 3.0);
}

// Uniformly random unit quaternion.
inline ddsim::Rotationd random_rotation(ddsim::SplitMix64& rng) {
  ddsim::Rotationd q(rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian(),
                     rng.next_gaussian());
  q.normalize();
  return q;
}

inline ddsim::BlochVector random_unit_vector(ddsim::SplitMix64& rng) {
  ddsim::BlochVector v(rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian());
  return v.normalized();
}

}  // namespace oracles
