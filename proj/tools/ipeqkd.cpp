#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ipe/attacks.hpp"
#include "ipe/bell.hpp"
#include "ipe/infotheory.hpp"
#include "ipe/optics.hpp"
#include "ipe/protocol.hpp"
#include "ipe/qstate.hpp"

namespace {

constexpr const char* kVersion = "ipeqkd 0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitFlagError = 2;
constexpr int kExitAborted = 3;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void kv(std::ostream& os, const std::string& key, const std::string& value) {
  os << key << " = " << value << "\n";
}

void kv(std::ostream& os, const std::string& key, double value) { kv(os, key, fmt(value)); }

// Reproduction metadata; stderr so data on stdout stays byte-stable per seed.
void emit_manifest(const std::string& command, const std::vector<std::pair<std::string, std::string>>& cfg,
                   std::uint64_t seed) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char ts[32];
  std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  std::cerr << "manifest.version = " << kVersion << "\n";
  std::cerr << "manifest.command = " << command << "\n";
  for (const auto& [k, v] : cfg) std::cerr << "manifest." << k << " = " << v << "\n";
  std::cerr << "manifest.seed = " << seed << "\n";
  std::cerr << "manifest.timestamp = " << ts << "\n";
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("IPEQKD_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      std::cerr << "warning: ignoring non-numeric IPEQKD_SEED\n";
    }
  }
  return 1;
}

int cmd_thresholds() {
  emit_manifest("thresholds", {}, 0);
  std::ostream& os = std::cout;
  const double e2 = ipe::info::solve_threshold(ipe::info::Scenario::conventional);
  const double e_half = ipe::info::solve_threshold(ipe::info::Scenario::side_channel, 0.5, 0.5);
  const double e_06 = ipe::info::solve_threshold(ipe::info::Scenario::side_channel, 0.6, 0.5);
  kv(os, "e2_conventional", e2);
  kv(os, "e2_conventional.definition", "zero of I(A:B) - 8e/3 (intercept-resend, channel only)");
  kv(os, "e_side_F0.5", e_half);
  kv(os, "e_side_F0.5.definition", "zero of I(A:B) - (8e/3)(2-F)/F at F = 1/2, p1 = 1/2");
  kv(os, "e_side_F0.6", e_06);
  kv(os, "e_side_F0.6.definition", "zero of I(A:B) - (8e/3)(2-F)/F at F = 0.6, p1 = 1/2");
  kv(os, "e_LR", ipe::bell::threshold_e_LR());
  kv(os, "e_LR.definition", "(3/4)(1 - 1/sqrt(2)); Werner CHSH optimum crosses the local bound 2");
  kv(os, "e_LR.note", "alternate reported values for this threshold are 22.5% and 0.17; "
                      "the formula evaluates to 0.2196699");
  kv(os, "e_ent", ipe::bell::threshold_e_ent());
  kv(os, "e_ent.definition", "partial-transpose eigenvalue sign flip of the depolarized entangled state");
  kv(os, "s_separable_bound", ipe::bell::kSeparableBound);
  kv(os, "s_separable_bound.definition", "max |S| over product states at the corrected settings");
  return kExitOk;
}

int cmd_sweep(const std::vector<double>& f_list, double e_min, double e_max, int steps) {
  std::string flist;
  for (double f : f_list) flist += (flist.empty() ? "" : ",") + fmt(f);
  emit_manifest("sweep",
                {{"f_list", flist}, {"e_min", fmt(e_min)}, {"e_max", fmt(e_max)}, {"steps", std::to_string(steps)}},
                0);
  std::vector<double> grid(steps);
  for (int i = 0; i < steps; ++i) {
    grid[i] = steps == 1 ? e_min : e_min + (e_max - e_min) * i / (steps - 1);
  }
  const auto rows = ipe::protocol::analytic_report(f_list, grid);
  std::cout << "F,e,i_ab,i_ae,key_rate\n";
  for (const auto& r : rows) {
    std::cout << fmt(r.f_fid) << ',' << fmt(r.e) << ',' << fmt(r.i_ab) << ',' << fmt(r.i_ae) << ','
              << fmt(r.key_rate) << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const ipe::protocol::ProtocolConfig& cfg, const std::string& transcript_path) {
  const auto [transcript, rep] = ipe::protocol::run(cfg);
  std::ostream& os = std::cout;
  kv(os, "photons", static_cast<double>(rep.n));
  kv(os, "basis_pair", std::string(ipe::optics::to_string(cfg.basis_pair.first)) + "," +
                           ipe::optics::to_string(cfg.basis_pair.second));
  kv(os, "f", cfg.f);
  kv(os, "theta_sc", cfg.side_channel.theta_sc);
  kv(os, "p1", cfg.p1);
  kv(os, "g", cfg.g);
  kv(os, "verified_count", static_cast<double>(rep.verified_count));
  kv(os, "verified_entangled_count", static_cast<double>(rep.verified_entangled_count));
  kv(os, "e_A_observed", rep.e_a_observed);
  kv(os, "e_A_entangled_basis", rep.e_a_entangled);
  kv(os, "F_estimate", rep.f_estimate);
  kv(os, "transmitted", static_cast<double>(rep.transmitted));
  kv(os, "sifted_length", static_cast<double>(rep.sifted_length));
  kv(os, "disclosed_count", static_cast<double>(rep.disclosed_count));
  kv(os, "e_observed", rep.e_observed);
  kv(os, "eve_info_estimate", rep.eve_info_estimate);
  kv(os, "key_rate_estimate", rep.key_rate_estimate);
  kv(os, "threshold_e_scenario", rep.threshold_e_scenario);
  kv(os, "abort_threshold_e", rep.abort_threshold_e);
  kv(os, "aborted", rep.aborted ? "true" : "false");
  if (!transcript_path.empty()) {
    std::ofstream out(transcript_path);
    if (!out) {
      std::cerr << "error: cannot open " << transcript_path << "\n";
      return kExitFlagError;
    }
    out << ipe::protocol::transcript_csv(transcript, cfg);
  }
  return rep.aborted ? kExitAborted : kExitOk;
}

int cmd_bell(const std::string& state, double e, double theta, const std::string& settings_name) {
  using namespace ipe;
  const bell::MeasurementSettings settings =
      settings_name == "printed" ? bell::settings_printed() : bell::settings_corrected();
  qstate::DensityOperator rho;
  if (state == "phi+") {
    rho = qstate::to_density(bell::phi_plus());
  } else if (state == "singlet") {
    rho = qstate::to_density(bell::singlet());
  } else if (state == "werner") {
    rho = bell::werner(e);
  } else if (state == "attacked") {
    const auto joint = attacks::qwp_attack_prepare(0, optics::BasisLabel::g2, attacks::SideChannelConfig{theta});
    rho = qstate::partial_trace(joint, {qstate::sub::spin, qstate::sub::path});
  } else {
    std::cerr << "error: unknown state selector '" << state << "'\n";
    return kExitFlagError;
  }
  std::ostream& os = std::cout;
  const bell::BellReport rep = bell::report(rho, settings);
  kv(os, "state", state);
  if (state == "werner") kv(os, "e", e);
  if (state == "attacked") kv(os, "theta_sc", theta);
  kv(os, "settings", settings_name);
  kv(os, "S_at_settings", rep.s);
  kv(os, "S_optimal", rep.s_optimal);
  kv(os, "classical_bound", rep.classical_bound);
  kv(os, "separable_bound", rep.separable_bound);
  kv(os, "tsirelson_bound", rep.tsirelson);
  kv(os, "entangled_ppt", qstate::is_entangled_ppt(rho) ? "true" : "false");
  if (state == "singlet") {
    kv(os, "note", "the printed settings give S = 0 for the singlet; the corrected settings "
                   "(b2 sign-flipped) give S = -2*sqrt(2)");
  }
  if (state == "attacked") {
    const double c2 = std::cos(theta) * std::cos(theta);
    kv(os, "candidate_2sqrt2_times_1_plus_cos2", 2.0 * std::numbers::sqrt2 * (1.0 + c2));
    kv(os, "candidate_sqrt2_times_1_plus_cos2", std::numbers::sqrt2 * (1.0 + c2));
    kv(os, "closed_form_2sqrt_1_plus_cos4", 2.0 * std::sqrt(1.0 + c2 * c2));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intra-particle entanglement QKD simulator and analysis toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* thresholds = app.add_subcommand("thresholds", "Print the key-rate and nonlocality thresholds");

  auto* sweep = app.add_subcommand("sweep", "Key-rate table over an error-rate grid (CSV)");
  std::vector<double> f_list{1.0, 0.6, 0.5};
  double e_min = 0.0, e_max = 0.3;
  int steps = 301;
  sweep->add_option("--f-list", f_list, "Verification fidelities F (1 = conventional scenario)")
      ->delimiter(',');
  sweep->add_option("--e-min", e_min, "Grid start")->check(CLI::Range(0.0, 0.374));
  sweep->add_option("--e-max", e_max, "Grid end")->check(CLI::Range(0.0, 0.374));
  sweep->add_option("--steps", steps, "Grid points")->check(CLI::Range(1, 1000000));

  auto* simulate = app.add_subcommand("simulate", "Run the seeded Monte-Carlo protocol");
  ipe::protocol::ProtocolConfig cfg;
  cfg.seed = default_seed();
  std::string pair_name = "g1g2", transcript_path;
  double abort_threshold = -1.0;
  simulate->add_option("--photons", cfg.n, "Photons to prepare")->check(CLI::Range(1L, 1000000000L));
  simulate->add_option("--f", cfg.f, "Fraction of particles Eve intercepts")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--theta-sc", cfg.side_channel.theta_sc, "Leak-mode angle, radians in [0, pi/2]")
      ->check(CLI::Range(0.0, 1.5707963267948966));
  simulate->add_option("--p1", cfg.p1, "Probability Alice picks the product basis")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--g", cfg.g, "Verification fraction")->check(CLI::Range(0.0, 0.999999));
  simulate->add_option("--seed", cfg.seed, "Master seed (env IPEQKD_SEED overrides the default)");
  simulate->add_option("--basis-pair", pair_name, "g1g2 or g1g4")
      ->check(CLI::IsMember({"g1g2", "g1g4"}));
  simulate->add_option("--abort-threshold", abort_threshold, "Abort when e exceeds this")
      ->check(CLI::Range(0.0, 0.375));
  simulate->add_option("--disclosure", cfg.disclosure, "Sifted fraction Bob divulges for the e estimate")
      ->check(CLI::Range(1e-9, 1.0));
  simulate->add_option("--transcript", transcript_path, "Write the per-photon transcript CSV here");

  auto* bellcmd = app.add_subcommand("bell", "CHSH diagnostics for a chosen state");
  std::string state = "werner", settings_name = "corrected";
  double bell_e = 0.0, bell_theta = 0.0;
  bellcmd->add_option("--state", state, "phi+ | singlet | werner | attacked")
      ->check(CLI::IsMember({"phi+", "singlet", "werner", "attacked"}));
  bellcmd->add_option("--e", bell_e, "Werner error rate")->check(CLI::Range(0.0, 0.75));
  bellcmd->add_option("--theta-sc", bell_theta, "Leak-mode angle for the attacked state")
      ->check(CLI::Range(0.0, 1.5707963267948966));
  bellcmd->add_option("--settings", settings_name, "corrected | printed")
      ->check(CLI::IsMember({"corrected", "printed"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFlagError;
  }

  try {
    if (thresholds->parsed()) return cmd_thresholds();
    if (sweep->parsed()) {
      if (e_max < e_min) {
        std::cerr << "error: --e-max must be >= --e-min\n";
        return kExitFlagError;
      }
      return cmd_sweep(f_list, e_min, e_max, steps);
    }
    if (simulate->parsed()) {
      cfg.basis_pair = pair_name == "g1g4"
                           ? std::make_pair(ipe::optics::BasisLabel::g1, ipe::optics::BasisLabel::g4)
                           : std::make_pair(ipe::optics::BasisLabel::g1, ipe::optics::BasisLabel::g2);
      if (abort_threshold >= 0.0) cfg.abort_threshold_e = abort_threshold;
      emit_manifest("simulate",
                    {{"photons", std::to_string(cfg.n)},
                     {"f", fmt(cfg.f)},
                     {"theta_sc", fmt(cfg.side_channel.theta_sc)},
                     {"p1", fmt(cfg.p1)},
                     {"g", fmt(cfg.g)},
                     {"basis_pair", pair_name},
                     {"disclosure", fmt(cfg.disclosure)}},
                    cfg.seed);
      return cmd_simulate(cfg, transcript_path);
    }
    if (bellcmd->parsed()) {
      emit_manifest("bell",
                    {{"state", state}, {"e", fmt(bell_e)}, {"theta_sc", fmt(bell_theta)}, {"settings", settings_name}},
                    0);
      return cmd_bell(state, bell_e, bell_theta, settings_name);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFlagError;
  }
  return kExitOk;
}
