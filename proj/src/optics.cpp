#include "ipe/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ipe::optics {

namespace {

using Matrix2 = Eigen::Matrix2cd;
constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

Matrix2 identity2() { return Matrix2::Identity(); }

// Spin matrices in component ordering (H, V); |0> = V, |1> = H.
Matrix2 hwp_spin() {
  Matrix2 m;
  m << 0, 1, 1, 0;
  return m;
}

Matrix2 qwp_spin() {
  // columns: |1>=H -> (|0>-|1>)/sqrt2, |0>=V -> (|0>+|1>)/sqrt2
  Matrix2 m;
  m << -kInvSqrt2, kInvSqrt2, kInvSqrt2, kInvSqrt2;
  return m;
}

Matrix kron22(const Matrix2& a, const Matrix2& b) {
  Matrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix2 arm_projector(Arm arm) {
  Matrix2 p = Matrix2::Zero();
  // path components ordered (R, T)
  p(arm == Arm::r ? 0 : 1, arm == Arm::r ? 0 : 1) = 1.0;
  return p;
}

Matrix spin_on_arm(const Matrix2& spin_op, Arm arm) {
  const Matrix2 p = arm_projector(arm);
  const Matrix2 q = identity2() - p;
  return kron22(spin_op, p) + kron22(identity2(), q);
}

}  // namespace

Matrix element_unitary(const OpticalElement& el) {
  return std::visit(
      [](const auto& e) -> Matrix {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          if (std::abs(e.alpha * e.alpha + e.beta * e.beta - 1.0) > qstate::kStructTol) {
            throw std::invalid_argument("BeamSplitter: alpha^2 + beta^2 must be 1");
          }
          // reflection phases must be conjugate for unitarity; at phase 0 or
          // pi this is the symmetric +/-i beta form
          Matrix2 m;
          m << e.alpha, kI * e.beta * std::exp(-kI * e.phase),
               kI * e.beta * std::exp(kI * e.phase), e.alpha;
          return kron22(identity2(), m);
        } else if constexpr (std::is_same_v<T, HalfWavePlate>) {
          return spin_on_arm(hwp_spin(), e.arm);
        } else if constexpr (std::is_same_v<T, QuarterWavePlate>) {
          return spin_on_arm(qwp_spin(), e.arm);
        } else if constexpr (std::is_same_v<T, PhaseShifter>) {
          Matrix2 m = identity2();
          m(e.arm == Arm::r ? 0 : 1, e.arm == Arm::r ? 0 : 1) = std::exp(kI * e.phi);
          return kron22(identity2(), m);
        } else {
          Matrix2 m;
          m << 0, 1, 1, 0;
          return kron22(identity2(), m);
        }
      },
      el);
}

Matrix Circuit::unitary() const {
  Matrix u = Matrix::Identity(4, 4);
  for (const auto& el : elements) u = element_unitary(el) * u;
  return u;
}

StateVector apply_unitary(const Matrix& u4, const StateVector& v) {
  if (v.dim() == 4) return StateVector(u4 * v.amps, v.dims);
  if (v.subsystems() >= 2 && v.dims[0] == 2 && v.dims[1] == 2) {
    const int rest = v.dim() / 4;
    qstate::Vector out = qstate::Vector::Zero(v.dim());
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (u4(i, j) == Complex{0.0, 0.0}) continue;
        out.segment(i * rest, rest) += u4(i, j) * v.amps.segment(j * rest, rest);
      }
    return StateVector(std::move(out), v.dims);
  }
  throw std::invalid_argument("apply_unitary: state lacks a leading spin(x)path pair");
}

StateVector apply(const Circuit& c, const StateVector& v) {
  StateVector out = v;
  for (const auto& el : c.elements) out = apply_unitary(element_unitary(el), out);
  return out;
}

namespace {

OpticalElement inverse_element(const OpticalElement& el) {
  return std::visit(
      [](const auto& e) -> OpticalElement {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          return BeamSplitter{e.alpha, e.beta, e.phase + kPi};
        } else if constexpr (std::is_same_v<T, PhaseShifter>) {
          return PhaseShifter{e.arm, -e.phi};
        } else {
          return e;  // wave plates and mirrors are involutions
        }
      },
      el);
}

}  // namespace

Circuit reverse_circuit(const Circuit& c) {
  Circuit out;
  out.elements.reserve(c.elements.size());
  for (auto it = c.elements.rbegin(); it != c.elements.rend(); ++it) {
    out.elements.push_back(inverse_element(*it));
  }
  return out;
}

const char* to_string(BasisLabel label) {
  switch (label) {
    case BasisLabel::g1: return "G1";
    case BasisLabel::g2: return "G2";
    case BasisLabel::g3: return "G3";
    case BasisLabel::g4: return "G4";
    case BasisLabel::g5: return "G5";
  }
  return "?";
}

StateVector source_state() {
  qstate::Vector v = qstate::Vector::Zero(4);
  v(3) = 1.0;  // |V>|psi_T> in (HR, HT, VR, VT) ordering
  return StateVector(std::move(v), {2, 2});
}

namespace {

const BeamSplitter kBs{};  // balanced, default +i reflection phase
const HalfWavePlate kHwpR{Arm::r};
const HalfWavePlate kHwpT{Arm::t};
const QuarterWavePlate kQwpR{Arm::r};
const QuarterWavePlate kQwpT{Arm::t};
const PhaseShifter kPsRm{Arm::r, -kPi / 2};
const PhaseShifter kPsRp{Arm::r, kPi / 2};
const PhaseShifter kPsTm{Arm::t, -kPi / 2};
const PhaseShifter kPsTp{Arm::t, kPi / 2};
const Mirror kMirror{};

std::vector<OpticalElement> cat(std::vector<OpticalElement> head, const std::vector<OpticalElement>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

// Circuits mapping |V>|psi_T> to the four computational product states.
std::array<std::vector<OpticalElement>, 4> g1_prefixes() {
  return {std::vector<OpticalElement>{},
          {kHwpT},
          {kMirror},
          {kMirror, kHwpR}};
}

std::array<Circuit, 4> basis_circuits(BasisLabel label) {
  const auto pre = g1_prefixes();
  switch (label) {
    case BasisLabel::g1:
      return {Circuit{pre[0]}, Circuit{pre[1]}, Circuit{pre[2]}, Circuit{pre[3]}};
    case BasisLabel::g2: {
      const std::vector<OpticalElement> tail{kBs, kHwpR, kQwpR, kQwpT};
      return {Circuit{cat(pre[0], tail)},
              Circuit{cat(cat(pre[2], {kPsRm}), tail)},
              Circuit{cat(pre[1], tail)},
              Circuit{cat(cat(pre[3], {kPsRm}), tail)}};
    }
    case BasisLabel::g3: {
      const std::vector<OpticalElement> tail{kBs, kHwpR, kPsRm, kBs};
      return {Circuit{cat(pre[0], tail)},
              Circuit{cat(pre[3], tail)},
              Circuit{cat(cat(pre[2], {kPsRm}), tail)},
              Circuit{cat(cat(pre[1], {kPsTm}), tail)}};
    }
    case BasisLabel::g4: {
      const std::vector<OpticalElement> tail{kPsRm, kBs, kPsRm, kQwpR, kQwpT};
      return {Circuit{cat(pre[0], tail)}, Circuit{cat(pre[1], tail)}, Circuit{cat(pre[2], tail)},
              Circuit{cat(pre[3], tail)}};
    }
    case BasisLabel::g5:
      // Interference realisations of H'(x)H'; no quarter-wave plate required.
      return {Circuit{{kBs, kHwpR, kPsRp, kBs, kHwpT, kPsTp}},
              Circuit{{kBs, kHwpR, kPsRm, BeamSplitter{kInvSqrt2, kInvSqrt2, kPi}, kHwpR, kPsTm}},
              Circuit{{kBs, kHwpR, kPsRp, kBs, kPsRp, kHwpT}},
              Circuit{{kBs, kHwpR, kPsRm, kBs, kHwpT, kPsTp}}};
  }
  throw std::invalid_argument("prepare_basis: unknown label");
}

}  // namespace

BasisSet prepare_basis(BasisLabel label) {
  BasisSet set;
  set.label = label;
  set.circuits = basis_circuits(label);
  const StateVector src = source_state();
  for (int j = 0; j < 4; ++j) set.states[j] = apply(set.circuits[j], src);
  return set;
}

const BasisSet& basis(BasisLabel label) {
  static const BasisSet g1 = prepare_basis(BasisLabel::g1);
  static const BasisSet g2 = prepare_basis(BasisLabel::g2);
  static const BasisSet g3 = prepare_basis(BasisLabel::g3);
  static const BasisSet g4 = prepare_basis(BasisLabel::g4);
  static const BasisSet g5 = prepare_basis(BasisLabel::g5);
  switch (label) {
    case BasisLabel::g1: return g1;
    case BasisLabel::g2: return g2;
    case BasisLabel::g3: return g3;
    case BasisLabel::g4: return g4;
    case BasisLabel::g5: return g5;
  }
  throw std::invalid_argument("basis: unknown label");
}

namespace {

// Maps the +1 eigenvector of n.sigma to the first component; implemented by a
// biased splitter with transmission cos(theta/2) and reflection
// e^{i phi} sin(theta/2) on the path qubit (same rotation for the spin qubit).
Matrix2 derotation_unitary(const Vector3& n) {
  if (std::abs(n.norm() - 1.0) > 1e-9) throw std::invalid_argument("derotation: direction not unit");
  const double theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
  const double phi = std::atan2(n.y(), n.x());
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Matrix2 u;
  u << c, std::exp(-kI * phi) * s, s, -std::exp(-kI * phi) * c;
  return u;
}

}  // namespace

CorrelationDistribution derotation_measurement(const qstate::DensityOperator& rho, const Vector3& a,
                                               const Vector3& b) {
  if (rho.dims != std::vector<int>{2, 2}) {
    throw std::invalid_argument("derotation_measurement: requires a two-qubit state");
  }
  const Matrix u = kron22(derotation_unitary(a), derotation_unitary(b));
  const Matrix r = u * rho.mat * u.adjoint();
  CorrelationDistribution d{};
  for (int s = 0; s < 2; ++s)
    for (int p = 0; p < 2; ++p) d.p[s][p] = r(s * 2 + p, s * 2 + p).real();
  return d;
}

CorrelationDistribution derotation_measurement(const StateVector& state, const Vector3& a, const Vector3& b) {
  return derotation_measurement(qstate::to_density(state), a, b);
}

std::array<double, 4> bob_analyzer(const StateVector& state, const BasisSet& basis) {
  if (state.dim() != 4) throw std::invalid_argument("bob_analyzer: requires a 4-dim particle state");
  std::array<double, 4> probs{};
  for (int j = 0; j < 4; ++j) probs[j] = std::norm(qstate::inner(basis.states[j], state));
  return probs;
}

std::array<double, 4> bob_analyzer(const StateVector& state, BasisLabel label) {
  return bob_analyzer(state, basis(label));
}

std::array<double, 4> bob_analyzer(const qstate::DensityOperator& rho, const BasisSet& basis) {
  if (rho.dim() != 4) throw std::invalid_argument("bob_analyzer: requires a 4-dim particle state");
  std::array<double, 4> probs{};
  for (int j = 0; j < 4; ++j) probs[j] = qstate::fidelity_to(rho, basis.states[j]);
  return probs;
}

Eigen::Matrix4d mub_overlap_table(const BasisSet& b1, const BasisSet& b2) {
  for (const auto* b : {&b1, &b2}) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const Complex g = qstate::inner(b->states[i], b->states[j]);
        if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-9) {
          throw std::invalid_argument("mub_overlap_table: basis not orthonormal");
        }
      }
  }
  Eigen::Matrix4d t;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t(i, j) = std::norm(qstate::inner(b1.states[i], b2.states[j]));
  return t;
}

Circuit bob_recombiner() { return Circuit{{BeamSplitter{kInvSqrt2, kInvSqrt2, kPi}}}; }

}  // namespace ipe::optics
