#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipe/attacks.hpp"
#include "ipe/infotheory.hpp"
#include "ipe/optics.hpp"

namespace ipe::protocol {

using attacks::EveRecord;
using attacks::SideChannelConfig;
using optics::BasisLabel;

struct ProtocolConfig {
  long n = 100000;                 // photons prepared
  double g = 0.2;                  // verification fraction, [0,1)
  double p1 = 0.5;                 // prior of the product basis
  std::pair<BasisLabel, BasisLabel> basis_pair{BasisLabel::g1, BasisLabel::g2};
  double f = 0.0;                  // intercept-resend fraction
  SideChannelConfig side_channel;  // theta_sc = 0 switches the side channel off
  std::optional<double> abort_threshold_e;  // defaults to the scenario's solved threshold
  double disclosure = 1.0;         // share of sifted symbols Bob divulges for the e estimate
  std::uint64_t seed = 1;

  bool side_channel_active() const { return side_channel.theta_sc > 0.0; }
};

struct PhotonRecord {
  std::uint8_t alice_basis;    // 0 = first of pair, 1 = second
  std::uint8_t alice_element;  // 0..3
  bool verified;               // consumed by Alice's reversal test
  bool verification_failed;
  EveRecord eve;
  std::uint8_t bob_basis;    // 0/1, meaningful when transmitted
  std::uint8_t bob_outcome;  // 0..3
  bool sifted;
  bool disclosed;
  bool error;  // sifted and bob_outcome != alice_element
};

struct Transcript {
  std::vector<PhotonRecord> photons;
};

struct ProtocolReport {
  long n = 0;
  long verified_count = 0;
  long verified_entangled_count = 0;
  long transmitted = 0;
  long sifted_length = 0;
  long disclosed_count = 0;
  long error_count = 0;
  long eve_known2_sifted = 0;

  double e_a_observed = 0.0;      // pooled over all verified photons
  double e_a_entangled = 0.0;     // conditioned on entangled-basis preparations
  double f_estimate = 1.0;        // 1 - e_a_entangled
  double e_observed = 0.0;
  double eve_info_estimate = 0.0; // bits/sifted symbol, from exactly-known tallies
  double key_rate_estimate = 0.0;
  double abort_threshold_e = 0.0;
  double threshold_e_scenario = 0.0;
  bool aborted = false;
};

// Runs the seeded Monte-Carlo protocol; deterministic given the config.
std::pair<Transcript, ProtocolReport> run(const ProtocolConfig& config);

// Reversal test on one prepared joint state: applies the inverse circuit to
// the particle and Born-samples the {|V,psi_T|, rest} decomposition.
bool verification_step(const qstate::StateVector& prepared, const optics::Circuit& circuit, rng::Engine& g);

// Failure probability of the reversal test (no sampling).
double verification_failure_probability(const qstate::StateVector& prepared, const optics::Circuit& circuit);

struct RateRow {
  double f_fid;
  double e;
  double i_ab;
  double i_ae;
  double key_rate;
  bool zero_crossing;  // inserted bisection row where the key rate changes sign
};

// Analytic key-rate table over a grid, with zero-crossing rows included.
std::vector<RateRow> analytic_report(const std::vector<double>& f_values, const std::vector<double>& e_grid);

// One photon per line, comma separated; header row first.
std::string transcript_csv(const Transcript& t, const ProtocolConfig& config);

}  // namespace ipe::protocol
