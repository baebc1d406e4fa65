#pragma once

// Shared fixtures: states built by direct expansion of the defining formulas,
// independent of the preparation circuits they are checked against.

#include <array>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "ipe/qstate.hpp"

namespace oracle {

using ipe::qstate::Complex;
using ipe::qstate::DensityOperator;
using ipe::qstate::Matrix;
using ipe::qstate::StateVector;
using ipe::qstate::Vector;

inline const Complex kJ{0.0, 1.0};
inline const double kS2 = std::numbers::sqrt2;

// spin components ordered (H, V); |0> = V, |1> = H
inline Eigen::Vector2cd ket0() { return {0.0, 1.0}; }
inline Eigen::Vector2cd ket1() { return {1.0, 0.0}; }
// path components ordered (R, T)
inline Eigen::Vector2cd ket_t() { return {0.0, 1.0}; }
inline Eigen::Vector2cd ket_r() { return {1.0, 0.0}; }

inline Vector prod(const Eigen::Vector2cd& s, const Eigen::Vector2cd& p) {
  Vector v(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v(i * 2 + j) = s(i) * p(j);
  return v;
}

inline StateVector sv(const Vector& v) { return StateVector(v, {2, 2}); }

inline std::array<StateVector, 4> g1_states() {
  return {sv(prod(ket0(), ket_t())), sv(prod(ket1(), ket_t())), sv(prod(ket0(), ket_r())),
          sv(prod(ket1(), ket_r()))};
}

inline std::array<StateVector, 4> g2_states() {
  const Eigen::Vector2cd pl = (ket0() + ket1()) / kS2;
  const Eigen::Vector2cd mi = (ket0() - ket1()) / kS2;
  return {sv((prod(pl, ket_t()) + kJ * prod(mi, ket_r())) / kS2),
          sv((prod(pl, ket_t()) - kJ * prod(mi, ket_r())) / kS2),
          sv((prod(mi, ket_t()) + kJ * prod(pl, ket_r())) / kS2),
          sv((prod(mi, ket_t()) - kJ * prod(pl, ket_r())) / kS2)};
}

inline std::array<StateVector, 4> g3_states() {
  const Eigen::Vector2cd pl = (ket0() + kJ * ket1()) / kS2;
  const Eigen::Vector2cd mi = (ket0() - kJ * ket1()) / kS2;
  return {sv((prod(pl, ket_t()) + kJ * prod(mi, ket_r())) / kS2),
          sv((prod(pl, ket_t()) - kJ * prod(mi, ket_r())) / kS2),
          sv((prod(mi, ket_t()) + kJ * prod(pl, ket_r())) / kS2),
          sv((prod(mi, ket_t()) - kJ * prod(pl, ket_r())) / kS2)};
}

// H = (sz+sx)/sqrt2 and H' = (sz+sy)/sqrt2 acting in the |0>,|1> labels,
// with |psi_T> playing the role of |0> on the path qubit.
inline std::array<StateVector, 4> g4_states() {
  const Eigen::Vector2cd h0 = (ket0() + ket1()) / kS2;
  const Eigen::Vector2cd h1 = (ket0() - ket1()) / kS2;
  const Eigen::Vector2cd hp0 = (ket_t() + ket_r()) / kS2;
  const Eigen::Vector2cd hp1 = (ket_t() - ket_r()) / kS2;
  return {sv(prod(h0, hp0)), sv(prod(h1, hp0)), sv(prod(h0, hp1)), sv(prod(h1, hp1))};
}

inline std::array<StateVector, 4> g5_states() {
  const Eigen::Vector2cd h0 = (ket0() + kJ * ket1()) / kS2;
  const Eigen::Vector2cd h1 = (-kJ * ket0() - ket1()) / kS2;
  const Eigen::Vector2cd hp0 = (ket_t() + kJ * ket_r()) / kS2;
  const Eigen::Vector2cd hp1 = (-kJ * ket_t() - ket_r()) / kS2;
  return {sv(prod(h0, hp0)), sv(prod(h1, hp0)), sv(prod(h0, hp1)), sv(prod(h1, hp1))};
}

inline std::array<StateVector, 4> states_of(int label_index) {
  switch (label_index) {
    case 0: return g1_states();
    case 1: return g2_states();
    case 2: return g3_states();
    case 3: return g4_states();
    default: return g5_states();
  }
}

// Pauli matrices in component ordering (+1 on the first component).
inline Matrix pauli(int k) {
  Matrix m(2, 2);
  if (k == 0) m << 0, 1, 1, 0;
  if (k == 1) m << 0, -kJ, kJ, 0;
  if (k == 2) m << 1, 0, 0, -1;
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix dot_sigma(const Eigen::Vector3d& n) {
  return n.x() * pauli(0) + n.y() * pauli(1) + n.z() * pauli(2);
}

inline double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline StateVector random_state(std::mt19937_64& g, int dim = 4) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(n(g), n(g));
  std::vector<int> dims;
  for (int d = dim; d > 1; d /= 2) dims.push_back(2);
  return StateVector(v / v.norm(), dims);
}

inline DensityOperator random_density(std::mt19937_64& g, int dim = 4) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(n(g), n(g));
  Matrix rho = a * a.adjoint();
  rho /= rho.trace();
  std::vector<int> dims;
  for (int d = dim; d > 1; d /= 2) dims.push_back(2);
  return DensityOperator(std::move(rho), dims);
}

inline Eigen::Vector3d random_direction(std::mt19937_64& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector3d v(n(g), n(g), n(g));
  return v / v.norm();
}

// Bloch +1 eigenstate of n.sigma in component convention.
inline Eigen::Vector2cd bloch_state(double theta, double phi) {
  return {std::cos(theta / 2), std::exp(kJ * phi) * std::sin(theta / 2)};
}

// Joint attacked state for an entangled-basis element, assembled directly from
// the branch structure: sum_d |spin_d>|path_d>|env_d> with <0|Y> = cos(theta).
inline StateVector attacked_phi_plus(double theta) {
  const Eigen::Vector2cd pl = (ket0() + ket1()) / kS2;
  const Eigen::Vector2cd mi = (ket0() - ket1()) / kS2;
  const Eigen::Vector2cd e0{1.0, 0.0};
  const Eigen::Vector2cd ey{std::cos(theta), std::sin(theta)};
  Vector v = Vector::Zero(16);
  auto add = [&](const Eigen::Vector2cd& s, const Eigen::Vector2cd& p, const Eigen::Vector2cd& er,
                 const Eigen::Vector2cd& et, Complex w) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) v(((a * 2 + b) * 2 + c) * 2 + d) += w * s(a) * p(b) * er(c) * et(d);
  };
  add(pl, ket_t(), e0, ey, 1.0 / kS2);
  add(mi, ket_r(), ey, e0, kJ / kS2);
  return StateVector(std::move(v), {2, 2, 2, 2});
}

}  // namespace oracle
