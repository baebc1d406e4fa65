#include "ipe/protocol.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ipe::protocol {

namespace {

using attacks::Pi0Outcome;
using optics::BasisSet;
using qstate::StateVector;

struct EngineTables {
  const BasisSet* sets[2];
  // Joint prepared states (with leak coupling when configured).
  std::array<StateVector, 4> joint[2];
  double p_verify_fail[2][4];
  double p_leak[2][4];
  // bob_probs[alice_b][element][bob_b][outcome] for pristine forwarded states.
  double bob_probs[2][4][2][4];

  EngineTables(const ProtocolConfig& cfg) {
    sets[0] = &optics::basis(cfg.basis_pair.first);
    sets[1] = &optics::basis(cfg.basis_pair.second);
    for (int b = 0; b < 2; ++b) {
      for (int j = 0; j < 4; ++j) {
        joint[b][j] = attacks::apply_with_side_channel(sets[b]->circuits[j], cfg.side_channel);
        p_verify_fail[b][j] = verification_failure_probability(joint[b][j], sets[b]->circuits[j]);
        p_leak[b][j] = attacks::prob_one_minus_pi0(joint[b][j]);
        for (int bb = 0; bb < 2; ++bb) {
          const auto probs = optics::bob_analyzer(sets[b]->states[j], *sets[bb]);
          for (int k = 0; k < 4; ++k) bob_probs[b][j][bb][k] = probs[k];
        }
      }
    }
  }
};

int finalize_known_bits(const EveRecord& rec, int alice_basis_index,
                        const std::pair<optics::BasisLabel, optics::BasisLabel>& pair) {
  if (!rec.intercepted) return 0;
  if (rec.pi0_outcome == Pi0Outcome::one_minus_pi0) return 2;
  const optics::BasisLabel alice = alice_basis_index == 0 ? pair.first : pair.second;
  return rec.measured_basis == alice ? 2 : 0;
}

}  // namespace

double verification_failure_probability(const StateVector& prepared, const optics::Circuit& circuit) {
  const optics::Circuit rev = optics::reverse_circuit(circuit);
  const StateVector undone = optics::apply(rev, prepared);
  if (undone.dim() == 4) return 1.0 - qstate::fidelity_to(undone, optics::source_state());
  const auto reduced = qstate::partial_trace(undone, {qstate::sub::spin, qstate::sub::path});
  return 1.0 - qstate::fidelity_to(reduced, optics::source_state());
}

bool verification_step(const StateVector& prepared, const optics::Circuit& circuit, rng::Engine& g) {
  return rng::bernoulli(g, verification_failure_probability(prepared, circuit));
}

std::pair<Transcript, ProtocolReport> run(const ProtocolConfig& cfg) {
  if (cfg.n <= 0) throw std::invalid_argument("protocol::run: photon count must be positive");
  if (cfg.g < 0.0 || cfg.g >= 1.0) throw std::invalid_argument("protocol::run: g must lie in [0,1)");
  if (cfg.p1 < 0.0 || cfg.p1 > 1.0) throw std::invalid_argument("protocol::run: p1 out of range");
  if (cfg.f < 0.0 || cfg.f > 1.0) throw std::invalid_argument("protocol::run: f out of range");
  if (cfg.disclosure <= 0.0 || cfg.disclosure > 1.0) {
    throw std::invalid_argument("protocol::run: disclosure must lie in (0,1]");
  }
  const bool known_pair = cfg.basis_pair == std::pair{BasisLabel::g1, BasisLabel::g2} ||
                          cfg.basis_pair == std::pair{BasisLabel::g1, BasisLabel::g4};
  if (!known_pair) throw std::invalid_argument("protocol::run: basis pair must be (G1,G2) or (G1,G4)");
  if (cfg.abort_threshold_e && (*cfg.abort_threshold_e <= 0.0 || *cfg.abort_threshold_e > 0.375)) {
    throw std::invalid_argument("protocol::run: abort threshold must lie in (0, 3/8]");
  }

  const EngineTables tab(cfg);
  const bool side = cfg.side_channel_active();

  Transcript tr;
  tr.photons.resize(cfg.n);
  ProtocolReport rep;
  rep.n = cfg.n;
  rep.threshold_e_scenario =
      info::solve_threshold(side ? info::Scenario::side_channel : info::Scenario::conventional,
                            side ? 1.0 - attacks::device_error(cfg.side_channel) : 1.0, cfg.p1);
  rep.abort_threshold_e = cfg.abort_threshold_e.value_or(rep.threshold_e_scenario);

  long verify_fail = 0, verify_fail_ent = 0;
  for (long i = 0; i < cfg.n; ++i) {
    rng::Engine g(rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    PhotonRecord& ph = tr.photons[i];
    ph = PhotonRecord{};
    ph.alice_basis = rng::bernoulli(g, cfg.p1) ? 0 : 1;
    ph.alice_element = static_cast<std::uint8_t>(rng::uniform_index(g, 4));

    if (rng::bernoulli(g, cfg.g)) {
      ph.verified = true;
      ph.verification_failed = rng::bernoulli(g, tab.p_verify_fail[ph.alice_basis][ph.alice_element]);
      ++rep.verified_count;
      verify_fail += ph.verification_failed;
      if (ph.alice_basis == 1) {
        ++rep.verified_entangled_count;
        verify_fail_ent += ph.verification_failed;
      }
      continue;
    }

    ++rep.transmitted;
    int forwarded_basis = ph.alice_basis;
    int forwarded_element = ph.alice_element;
    if (side) {
      const double p_leak = tab.p_leak[ph.alice_basis][ph.alice_element];
      const bool leak = rng::bernoulli(g, p_leak);
      ph.eve.pi0_outcome = leak ? Pi0Outcome::one_minus_pi0 : Pi0Outcome::pi0;
      ph.eve.intercepted = rng::bernoulli(g, cfg.f);
      if (ph.eve.intercepted) {
        if (leak) {
          // heralded: deterministic identification of the entangled element
          ph.eve.measured_basis = cfg.basis_pair.second;
          ph.eve.measured_element = ph.alice_element;
          forwarded_basis = 1;
          forwarded_element = ph.alice_element;
        } else {
          ph.eve.measured_basis = rng::bernoulli(g, 0.5) ? cfg.basis_pair.first : cfg.basis_pair.second;
          const int eb = ph.eve.measured_basis == cfg.basis_pair.first ? 0 : 1;
          ph.eve.measured_element =
              rng::sample_categorical(g, std::span<const double, 4>(tab.bob_probs[ph.alice_basis][ph.alice_element][eb]));
          forwarded_basis = eb;
          forwarded_element = ph.eve.measured_element;
        }
      } else if (leak) {
        ph.eve.measured_basis = cfg.basis_pair.second;
      }
    } else if (cfg.f > 0.0) {
      ph.eve.intercepted = rng::bernoulli(g, cfg.f);
      if (ph.eve.intercepted) {
        ph.eve.measured_basis = rng::bernoulli(g, 0.5) ? cfg.basis_pair.first : cfg.basis_pair.second;
        const int eb = ph.eve.measured_basis == cfg.basis_pair.first ? 0 : 1;
        ph.eve.measured_element =
            rng::sample_categorical(g, std::span<const double, 4>(tab.bob_probs[ph.alice_basis][ph.alice_element][eb]));
        forwarded_basis = eb;
        forwarded_element = ph.eve.measured_element;
      }
    }
    ph.eve.known_bits = finalize_known_bits(ph.eve, ph.alice_basis, cfg.basis_pair);

    ph.bob_basis = rng::bernoulli(g, 0.5) ? 0 : 1;
    ph.bob_outcome = static_cast<std::uint8_t>(rng::sample_categorical(
        g, std::span<const double, 4>(tab.bob_probs[forwarded_basis][forwarded_element][ph.bob_basis])));

    ph.sifted = ph.bob_basis == ph.alice_basis;
    if (!ph.sifted) continue;
    ++rep.sifted_length;
    rep.eve_known2_sifted += ph.eve.known_bits == 2;
    ph.error = ph.bob_outcome != ph.alice_element;
    ph.disclosed = cfg.disclosure >= 1.0 || rng::bernoulli(g, cfg.disclosure);
    if (ph.disclosed) {
      ++rep.disclosed_count;
      rep.error_count += ph.error;
    }
  }

  rep.e_a_observed = rep.verified_count ? static_cast<double>(verify_fail) / rep.verified_count : 0.0;
  rep.e_a_entangled =
      rep.verified_entangled_count ? static_cast<double>(verify_fail_ent) / rep.verified_entangled_count : 0.0;
  rep.f_estimate = 1.0 - rep.e_a_entangled;
  rep.e_observed = rep.disclosed_count ? static_cast<double>(rep.error_count) / rep.disclosed_count : 0.0;
  rep.eve_info_estimate =
      rep.sifted_length ? 2.0 * static_cast<double>(rep.eve_known2_sifted) / rep.sifted_length : 0.0;
  const info::Scenario sc = side ? info::Scenario::side_channel : info::Scenario::conventional;
  const double e_for_rate = std::min(rep.e_observed, 3.0 / 8.0);
  rep.key_rate_estimate =
      info::key_rate(info::RateInputs{e_for_rate, std::max(0.5, rep.f_estimate), cfg.p1, sc});
  rep.aborted = rep.e_observed > rep.abort_threshold_e;
  return {std::move(tr), rep};
}

std::vector<RateRow> analytic_report(const std::vector<double>& f_values, const std::vector<double>& e_grid) {
  if (f_values.empty() || e_grid.empty()) throw std::invalid_argument("analytic_report: empty grid");
  std::vector<RateRow> rows;
  for (double F : f_values) {
    const info::Scenario sc = F >= 1.0 ? info::Scenario::conventional : info::Scenario::side_channel;
    auto key = [&](double e) { return info::key_rate(info::RateInputs{e, F, 0.5, sc}); };
    double prev_e = -1.0, prev_k = 0.0;
    for (double e : e_grid) {
      const double k = key(e);
      if (prev_e >= 0.0 && prev_k > 0.0 && k < 0.0) {
        double lo = prev_e, hi = e;
        while (hi - lo > 1e-9) {
          const double mid = 0.5 * (lo + hi);
          if (key(mid) > 0.0) lo = mid; else hi = mid;
        }
        const double ez = 0.5 * (lo + hi);
        rows.push_back({F, ez, info::i_ab(ez), info::i_ab(ez) - key(ez), key(ez), true});
      }
      rows.push_back({F, e, info::i_ab(e), info::i_ab(e) - k, k, false});
      prev_e = e;
      prev_k = k;
    }
  }
  return rows;
}

std::string transcript_csv(const Transcript& t, const ProtocolConfig& cfg) {
  std::ostringstream os;
  os << "photon,alice_basis,alice_element,verified,verification_failed,eve_pi0,eve_intercepted,"
        "eve_basis,eve_element,eve_known_bits,bob_basis,bob_outcome,sifted,disclosed,error\n";
  auto label = [&](int idx) {
    return optics::to_string(idx == 0 ? cfg.basis_pair.first : cfg.basis_pair.second);
  };
  for (size_t i = 0; i < t.photons.size(); ++i) {
    const PhotonRecord& p = t.photons[i];
    const char* pi0 = p.eve.pi0_outcome == Pi0Outcome::not_applicable
                          ? "na"
                          : (p.eve.pi0_outcome == Pi0Outcome::pi0 ? "pi0" : "1-pi0");
    os << i << ',' << label(p.alice_basis) << ',' << int(p.alice_element) << ',' << int(p.verified) << ','
       << int(p.verification_failed) << ',' << pi0 << ',' << int(p.eve.intercepted) << ','
       << (p.eve.intercepted || p.eve.measured_element >= 0 || p.eve.pi0_outcome == Pi0Outcome::one_minus_pi0
               ? optics::to_string(p.eve.measured_basis)
               : "na")
       << ',' << p.eve.measured_element << ',' << p.eve.known_bits << ','
       << (p.verified ? "na" : label(p.bob_basis)) << ',' << (p.verified ? -1 : int(p.bob_outcome)) << ','
       << int(p.sifted) << ',' << int(p.disclosed) << ',' << int(p.error) << '\n';
  }
  return os.str();
}

}  // namespace ipe::protocol
