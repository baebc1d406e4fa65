#pragma once

#include <array>
#include <utility>

#include "ipe/optics.hpp"
#include "ipe/qstate.hpp"
#include "ipe/rng.hpp"

namespace ipe::attacks {

using optics::BasisLabel;
using qstate::DensityOperator;
using qstate::StateVector;

struct InterceptResendConfig {
  double fraction = 0.0;  // f, share of particles Eve intercepts
  std::pair<BasisLabel, BasisLabel> eve_bases{BasisLabel::g1, BasisLabel::g2};
};

struct SideChannelConfig {
  double theta_sc = 0.0;  // leak-mode distinguishability, <0|Y> = cos(theta_sc)
};

enum class Pi0Outcome { pi0, one_minus_pi0, not_applicable };

struct EveRecord {
  Pi0Outcome pi0_outcome = Pi0Outcome::not_applicable;
  bool intercepted = false;
  BasisLabel measured_basis = BasisLabel::g1;
  int measured_element = -1;
  int known_bits = 0;  // element bits Eve holds once bases are announced
};

// (1 - f/2) rho + (f/2) I/4
DensityOperator depolarize(const DensityOperator& rho, double f);

// Eve measures a fraction f of particles in a uniformly chosen legitimate
// basis and forwards a fresh copy of the identified element.
std::pair<StateVector, EveRecord> intercept_resend(const StateVector& state, rng::Engine& g,
                                                   const InterceptResendConfig& cfg);

// Joint particle (x) environment state (dims {2,2,2,2}) produced when the
// element's preparation circuit runs with leaky quarter-wave plates.
StateVector qwp_attack_prepare(int element, BasisLabel basis, const SideChannelConfig& sc);

// 0.5 sin^2(theta_sc): probability that reversing the preparation fails.
double device_error(const SideChannelConfig& sc);

// Projective {Pi0, 1-Pi0} measurement of the leak modes, Born-sampled; returns
// the outcome and the renormalised post-measurement joint state.
std::pair<Pi0Outcome, StateVector> eve_pi0_measure(const StateVector& joint, rng::Engine& g);

double prob_one_minus_pi0(const StateVector& joint);

// Bayesian posterior P(G1 | Pi0) = p1 / (cos^2 + p1 sin^2); P(G1 | 1-Pi0) = 0.
double eve_posterior_g1(bool pi0_seen, const SideChannelConfig& sc, double p1);

// Renormalised (1-Pi0) projections of the basis elements; pairwise orthogonal
// for theta_sc > 0. Throws at theta_sc = 0 (the projection annihilates) and
// for bases whose circuits use no quarter-wave plate.
std::array<StateVector, 4> disturbed_basis(BasisLabel basis, const SideChannelConfig& sc);

// Eve's full side-channel strategy on one prepared joint state: measure the
// leak modes, then (with probability f) identify deterministically after
// 1-Pi0 or measure a random basis after Pi0, forwarding a pristine element.
std::pair<StateVector, EveRecord> side_channel_strategy(const StateVector& joint, rng::Engine& g, double f,
                                                        double p1, const SideChannelConfig& sc,
                                                        const std::pair<BasisLabel, BasisLabel>& bases);

// The 16-dim unitary of a leaky quarter-wave plate on the given arm.
qstate::Matrix leaky_qwp_unitary(optics::Arm arm, double theta_sc);

// Runs a preparation circuit on |V,psi_T>|0,0> with every quarter-wave plate
// replaced by its leaky version.
StateVector apply_with_side_channel(const optics::Circuit& c, const SideChannelConfig& sc);

}  // namespace ipe::attacks
