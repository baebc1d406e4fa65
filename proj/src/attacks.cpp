#include "ipe/attacks.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ipe::attacks {

namespace {

using optics::Arm;
using optics::BasisSet;
using optics::Circuit;
using qstate::Complex;
using qstate::Matrix;
using qstate::Vector;

bool uses_qwp(const Circuit& c) {
  for (const auto& el : c.elements) {
    if (std::holds_alternative<optics::QuarterWavePlate>(el)) return true;
  }
  return false;
}

// Splits a 16-dim amplitude vector by environment index; env = er*2 + et.
int joint_index(int particle, int env) { return particle * 4 + env; }

StateVector particle_of_pi0_branch(const StateVector& joint) {
  Vector v(4);
  for (int p = 0; p < 4; ++p) v(p) = joint.amps(joint_index(p, 0));
  const double n = v.norm();
  if (n < 1e-12) throw std::domain_error("particle_of_pi0_branch: vanishing Pi0 component");
  return StateVector(v / n, {2, 2});
}

void require_joint(const StateVector& v, const char* what) {
  if (v.dims != std::vector<int>{2, 2, 2, 2}) {
    throw std::invalid_argument(std::string(what) + ": requires a particle(x)environment state");
  }
}

BasisLabel entangled_partner(const std::pair<BasisLabel, BasisLabel>& bases) {
  return bases.second;
}

}  // namespace

DensityOperator depolarize(const DensityOperator& rho, double f) {
  if (f < 0.0 || f > 1.0) throw std::domain_error("depolarize: f must lie in [0,1]");
  const int d = rho.dim();
  Matrix out = (1.0 - f / 2.0) * rho.mat + (f / 2.0) * Matrix::Identity(d, d) / d;
  return DensityOperator(std::move(out), rho.dims);
}

std::pair<StateVector, EveRecord> intercept_resend(const StateVector& state, rng::Engine& g,
                                                   const InterceptResendConfig& cfg) {
  if (state.dim() != 4) throw std::invalid_argument("intercept_resend: requires a 4-dim particle state");
  EveRecord rec;
  if (!rng::bernoulli(g, cfg.fraction)) return {state, rec};
  rec.intercepted = true;
  rec.measured_basis = rng::bernoulli(g, 0.5) ? cfg.eve_bases.first : cfg.eve_bases.second;
  const BasisSet& eve = optics::basis(rec.measured_basis);
  const auto probs = optics::bob_analyzer(state, eve);
  rec.measured_element = rng::sample_categorical(g, probs);
  return {eve.states[rec.measured_element], rec};
}

Matrix leaky_qwp_unitary(Arm arm, double theta_sc) {
  // spin (x) path (x) envR (x) envT; the plate rotates the spin and kicks its
  // arm's leak mode |0> -> |Y> only when the photon occupies that arm.
  Eigen::Matrix2cd qwp;
  const double s = 1.0 / std::numbers::sqrt2;
  qwp << -s, s, s, s;
  Eigen::Matrix2cd rot;
  rot << std::cos(theta_sc), -std::sin(theta_sc), std::sin(theta_sc), std::cos(theta_sc);
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd in_arm = Eigen::Matrix2cd::Zero(), other = Eigen::Matrix2cd::Zero();
  in_arm(arm == Arm::r ? 0 : 1, arm == Arm::r ? 0 : 1) = 1.0;
  other(arm == Arm::r ? 1 : 0, arm == Arm::r ? 1 : 0) = 1.0;

  auto kron = [](const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  const Matrix env_active = arm == Arm::r ? kron(rot, id) : kron(id, rot);
  const Matrix env_idle = kron(id, id);
  return kron(kron(qwp, in_arm), env_active) + kron(kron(id, other), env_idle);
}

StateVector apply_with_side_channel(const Circuit& c, const SideChannelConfig& sc) {
  StateVector v = qstate::tensor(qstate::tensor(optics::source_state(), qstate::basis_state(0, 2)),
                                 qstate::basis_state(0, 2));
  for (const auto& el : c.elements) {
    if (const auto* q = std::get_if<optics::QuarterWavePlate>(&el)) {
      v = StateVector(leaky_qwp_unitary(q->arm, sc.theta_sc) * v.amps, v.dims);
    } else {
      v = optics::apply_unitary(optics::element_unitary(el), v);
    }
  }
  return v;
}

StateVector qwp_attack_prepare(int element, BasisLabel basis, const SideChannelConfig& sc) {
  if (element < 0 || element > 3) throw std::invalid_argument("qwp_attack_prepare: element out of range");
  if (basis != BasisLabel::g1 && basis != BasisLabel::g2 && basis != BasisLabel::g4) {
    throw std::invalid_argument("qwp_attack_prepare: basis not part of a supported protocol pair");
  }
  return apply_with_side_channel(optics::basis(basis).circuits[element], sc);
}

double device_error(const SideChannelConfig& sc) {
  const double s = std::sin(sc.theta_sc);
  return 0.5 * s * s;
}

double prob_one_minus_pi0(const StateVector& joint) {
  require_joint(joint, "prob_one_minus_pi0");
  double p0 = 0.0;
  for (int p = 0; p < 4; ++p) p0 += std::norm(joint.amps(joint_index(p, 0)));
  return 1.0 - p0;
}

std::pair<Pi0Outcome, StateVector> eve_pi0_measure(const StateVector& joint, rng::Engine& g) {
  require_joint(joint, "eve_pi0_measure");
  const double p_leak = prob_one_minus_pi0(joint);
  const bool leak = rng::bernoulli(g, p_leak);
  Vector post = joint.amps;
  for (int p = 0; p < 4; ++p) {
    for (int env = 0; env < 4; ++env) {
      const bool vacuum = env == 0;
      if (vacuum == leak) post(joint_index(p, env)) = 0.0;
    }
  }
  const double n = post.norm();
  if (n < 1e-15) throw std::domain_error("eve_pi0_measure: projection annihilated the state");
  return {leak ? Pi0Outcome::one_minus_pi0 : Pi0Outcome::pi0, StateVector(post / n, joint.dims)};
}

double eve_posterior_g1(bool pi0_seen, const SideChannelConfig& sc, double p1) {
  if (p1 < 0.0 || p1 > 1.0) throw std::domain_error("eve_posterior_g1: p1 out of range");
  if (!pi0_seen) return 0.0;
  const double c2 = std::cos(sc.theta_sc) * std::cos(sc.theta_sc);
  const double s2 = 1.0 - c2;
  return p1 / (c2 + p1 * s2);
}

std::array<StateVector, 4> disturbed_basis(BasisLabel basis, const SideChannelConfig& sc) {
  if (!uses_qwp(optics::basis(basis).circuits[0])) {
    throw std::domain_error("disturbed_basis: the basis circuits produce no leak");
  }
  std::array<StateVector, 4> out;
  for (int j = 0; j < 4; ++j) {
    const StateVector joint = qwp_attack_prepare(j, basis, sc);
    Vector v = joint.amps;
    for (int p = 0; p < 4; ++p) v(joint_index(p, 0)) = 0.0;
    const double n = v.norm();
    if (n < 1e-9) throw std::domain_error("disturbed_basis: theta_sc = 0 leaves nothing to project");
    out[j] = StateVector(v / n, joint.dims);
  }
  return out;
}

std::pair<StateVector, EveRecord> side_channel_strategy(const StateVector& joint, rng::Engine& g, double f,
                                                        double p1, const SideChannelConfig& sc,
                                                        const std::pair<BasisLabel, BasisLabel>& bases) {
  (void)p1;  // Eve's response to Pi0 is a uniform basis pick, independent of the prior
  require_joint(joint, "side_channel_strategy");
  EveRecord rec;
  auto [outcome, post] = eve_pi0_measure(joint, g);
  rec.pi0_outcome = outcome;
  rec.intercepted = rng::bernoulli(g, f);

  if (outcome == Pi0Outcome::one_minus_pi0) {
    // The leak heralds the entangled basis; the disturbed elements stay
    // orthogonal, so an intercepting projective measurement identifies the
    // element exactly and Eve forwards a pristine copy. Without interception
    // she learns only the basis, and the photon is delivered as the ideal
    // element (the error bookkeeping charges Eve per intercepted photon only).
    const BasisLabel ent = entangled_partner(bases);
    const auto disturbed = disturbed_basis(ent, sc);
    int best = 0;
    double best_ov = -1.0;
    for (int j = 0; j < 4; ++j) {
      const double ov = std::norm(qstate::inner(disturbed[j], post));
      if (ov > best_ov) { best_ov = ov; best = j; }
    }
    rec.measured_basis = ent;
    if (rec.intercepted) {
      rec.measured_element = best;
      rec.known_bits = 2;
    }
    return {optics::basis(ent).states[best], rec};
  }

  // Pi0 restored the coherence; the particle is the pristine element again.
  const StateVector particle = particle_of_pi0_branch(post);
  if (!rec.intercepted) return {particle, rec};
  rec.measured_basis = rng::bernoulli(g, 0.5) ? bases.first : bases.second;
  const BasisSet& eve = optics::basis(rec.measured_basis);
  const auto probs = optics::bob_analyzer(particle, eve);
  rec.measured_element = rng::sample_categorical(g, probs);
  return {eve.states[rec.measured_element], rec};
}

}  // namespace ipe::attacks
