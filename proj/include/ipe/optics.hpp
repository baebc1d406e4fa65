#pragma once

#include <array>
#include <numbers>
#include <variant>
#include <vector>

#include "ipe/qstate.hpp"

namespace ipe::optics {

using qstate::Complex;
using qstate::Matrix;
using qstate::StateVector;
using Vector3 = Eigen::Vector3d;

enum class Arm { r, t };

// Path mixing in (R,T) ordering: [[alpha, i beta e^{i phase}], [i beta e^{i phase}, alpha]].
struct BeamSplitter {
  double alpha = 1.0 / std::numbers::sqrt2;
  double beta = 1.0 / std::numbers::sqrt2;
  double phase = 0.0;
};

struct HalfWavePlate {
  Arm arm;  // |H> <-> |V> on this arm
};

// |0> -> (|0>+|1>)/sqrt2, |1> -> (|0>-|1>)/sqrt2 on this arm.
struct QuarterWavePlate {
  Arm arm;
};

struct PhaseShifter {
  Arm arm;
  double phi;
};

// Exchanges the R and T modes.
struct Mirror {
  Arm arm = Arm::r;
};

using OpticalElement = std::variant<BeamSplitter, HalfWavePlate, QuarterWavePlate, PhaseShifter, Mirror>;

// 4x4 unitary on spin (x) path. Throws if a BeamSplitter has alpha^2+beta^2 != 1.
Matrix element_unitary(const OpticalElement& el);

struct Circuit {
  std::vector<OpticalElement> elements;

  Matrix unitary() const;  // composition, last element applied last
};

// Applies the circuit's particle unitary; states with environment subsystems
// ({2,2,2,2}) are acted on by U (x) I.
StateVector apply(const Circuit& c, const StateVector& v);
StateVector apply_unitary(const Matrix& u4, const StateVector& v);

// Inverse circuit built from inverse elements, so that apply(c) then
// apply(reverse_circuit(c)) is the identity.
Circuit reverse_circuit(const Circuit& c);

enum class BasisLabel { g1, g2, g3, g4, g5 };

const char* to_string(BasisLabel label);

// Four orthonormal states with, per element, a preparation circuit mapping the
// common source state |V>|psi_T> to that element exactly.
struct BasisSet {
  BasisLabel label;
  std::array<StateVector, 4> states;
  std::array<Circuit, 4> circuits;
};

StateVector source_state();  // |V>|psi_T>
BasisSet prepare_basis(BasisLabel label);

// Cached immutable basis sets.
const BasisSet& basis(BasisLabel label);

// Joint outcome distribution of the projective measurement (a.sigma)(x)(b.sigma),
// realised as path de-rotation by a biased beam splitter plus identical
// polarization analysis along a in both arms.
struct CorrelationDistribution {
  // p[i][j]: i indexes the spin outcome (0 -> +1), j the path outcome (0 -> +1)
  std::array<std::array<double, 2>, 2> p;

  double expectation() const {
    return p[0][0] - p[0][1] - p[1][0] + p[1][1];
  }
};

CorrelationDistribution derotation_measurement(const StateVector& state, const Vector3& a, const Vector3& b);
CorrelationDistribution derotation_measurement(const qstate::DensityOperator& rho, const Vector3& a,
                                               const Vector3& b);

// Born probabilities of the four outcomes of a measurement in the given basis.
std::array<double, 4> bob_analyzer(const StateVector& state, BasisLabel basis);
std::array<double, 4> bob_analyzer(const StateVector& state, const BasisSet& basis);
std::array<double, 4> bob_analyzer(const qstate::DensityOperator& rho, const BasisSet& basis);

// |<b1_i|b2_j>|^2 table; rows and columns of an orthonormal pair each sum to 1.
Eigen::Matrix4d mub_overlap_table(const BasisSet& b1, const BasisSet& b2);

// Bob's recombining beam splitter (the inverse 50:50 splitter).
Circuit bob_recombiner();

}  // namespace ipe::optics
