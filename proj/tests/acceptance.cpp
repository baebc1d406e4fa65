// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any fails. argv[1] is the path to the CLI binary (used by the
// determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ipe/attacks.hpp"
#include "ipe/bell.hpp"
#include "ipe/infotheory.hpp"
#include "ipe/optics.hpp"
#include "ipe/protocol.hpp"
#include "ipe/qstate.hpp"

using namespace ipe;
using optics::BasisLabel;

namespace {

constexpr double kPi = std::numbers::pi;
const double kS2 = std::numbers::sqrt2;
int g_failures = 0;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
};

void criterion(int index, const std::string& name, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(dt < budget_s, "runtime " + std::to_string(dt) + "s exceeds " + std::to_string(budget_s) + "s");
  if (!c.ok) ++g_failures;
  std::printf("%s  [%2d] %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", index, name.c_str(), dt,
              c.detail.str().empty() ? "" : " -- ", c.detail.str().c_str());
}

double binom3sigma(double p, double n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

struct Cell {
  double f, theta;
  protocol::ProtocolReport rep;
};

std::vector<Cell> run_grid() {
  std::vector<Cell> cells;
  int idx = 0;
  for (double f : {0.5, 1.0}) {
    for (double theta : {0.0, kPi / 4, kPi / 2}) {
      protocol::ProtocolConfig cfg;
      cfg.n = 100000;
      cfg.g = 0.2;
      cfg.p1 = 0.5;
      cfg.f = f;
      cfg.side_channel.theta_sc = theta;
      cfg.abort_threshold_e = 0.375;  // keep every grid run alive for tallying
      cfg.seed = 9000 + idx++;
      cells.push_back({f, theta, protocol::run(cfg).second});
    }
  }
  return cells;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  criterion(1, "conventional threshold e2 in [0.26, 0.28]", 1.0, [](Check& c) {
    const double e2 = info::solve_threshold(info::Scenario::conventional);
    c.require(e2 >= 0.26 && e2 <= 0.28, "e2 = " + std::to_string(e2));
  });

  criterion(2, "side-channel threshold at F = 1/2 in [0.140, 0.150]", 1.0, [](Check& c) {
    const double eh = info::solve_threshold(info::Scenario::side_channel, 0.5, 0.5);
    c.require(eh >= 0.140 && eh <= 0.150, "e = " + std::to_string(eh));
  });

  criterion(3, "nonlocality threshold exact; PPT flip at 0.5 within 1e-6", 1.0, [](Check& c) {
    c.require(std::abs(bell::threshold_e_LR() - 0.75 * (1.0 - 1.0 / kS2)) <= 1e-9, "e_LR formula");
    double lo = 0.0, hi = 0.75;
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      if (qstate::is_entangled_ppt(bell::werner(mid))) lo = mid; else hi = mid;
    }
    const double flip = 0.5 * (lo + hi);
    c.require(std::abs(flip - 0.5) <= 1e-6, "flip at " + std::to_string(flip));
  });

  criterion(4, "Werner CHSH optimum linear in e on {0, 0.05, ..., 0.7}", 1.0, [](Check& c) {
    for (int k = 0; k <= 14; ++k) {
      const double e = 0.05 * k;
      const double got = bell::chsh_optimal(bell::werner(e)).first;
      const double expect = (1.0 - 4.0 * e / 3.0) * 2.0 * kS2;
      c.require(std::abs(got - expect) <= 1e-6, "e = " + std::to_string(e));
    }
  });

  criterion(5, "separable bound from 1e5 product states in [sqrt2 - 0.01, sqrt2 + 1e-6]", 30.0,
            [](Check& c) {
    const double s = bell::separable_bound_search(100000, 424242);
    c.require(s >= kS2 - 0.01 && s <= kS2 + 1e-6, "max|S| = " + std::to_string(s));
  });

  std::vector<Cell> grid;

  criterion(6, "Monte-Carlo e and device error match the closed forms on the (f, theta) grid", 60.0,
            [&](Check& c) {
    grid = run_grid();
    for (const Cell& cell : grid) {
      const double q = std::cos(cell.theta) * std::cos(cell.theta) +
                       0.5 * std::sin(cell.theta) * std::sin(cell.theta);
      const double expect_e = cell.theta == 0.0 ? 3.0 * cell.f / 8.0 : cell.f * 0.375 * q;
      const double tol_e = binom3sigma(expect_e, static_cast<double>(cell.rep.sifted_length));
      std::ostringstream tag;
      tag << "(f=" << cell.f << ", theta=" << cell.theta << ")";
      c.require(std::abs(cell.rep.e_observed - expect_e) <= tol_e,
                tag.str() + " e_obs=" + std::to_string(cell.rep.e_observed) + " expect " +
                    std::to_string(expect_e));
      const double expect_ea = 0.5 * std::sin(cell.theta) * std::sin(cell.theta);
      const double tol_ea =
          expect_ea == 0.0 ? 0.0 : binom3sigma(expect_ea, static_cast<double>(cell.rep.verified_entangled_count));
      c.require(std::abs(cell.rep.e_a_entangled - expect_ea) <= tol_ea,
                tag.str() + " e_A=" + std::to_string(cell.rep.e_a_entangled) + " expect " +
                    std::to_string(expect_ea));
    }
  });

  criterion(7, "Eve's exactly-known sifted tallies reproduce the information formulas", 5.0, [&](Check& c) {
    for (const Cell& cell : grid) {
      const double q = std::cos(cell.theta) * std::cos(cell.theta) +
                       0.5 * std::sin(cell.theta) * std::sin(cell.theta);
      const double expect_info = cell.f * (2.0 - q);  // = 8e/3 at theta = 0
      const double p_known = cell.f * (1.0 - 0.5 * q);
      const double tol = 2.0 * binom3sigma(p_known, static_cast<double>(cell.rep.sifted_length));
      std::ostringstream tag;
      tag << "(f=" << cell.f << ", theta=" << cell.theta << ")";
      c.require(std::abs(cell.rep.eve_info_estimate - expect_info) <= tol,
                tag.str() + " info=" + std::to_string(cell.rep.eve_info_estimate) + " expect " +
                    std::to_string(expect_info));
    }
  });

  criterion(8, "structural property suite at the stated tolerances", 60.0, [](Check& c) {
    const std::array<BasisLabel, 5> labels{BasisLabel::g1, BasisLabel::g2, BasisLabel::g3, BasisLabel::g4,
                                           BasisLabel::g5};
    // circuit unitarity and basis orthonormality
    for (BasisLabel label : labels) {
      const auto& set = optics::basis(label);
      for (int j = 0; j < 4; ++j) {
        const auto u = set.circuits[j].unitary();
        c.require((u.adjoint() * u - qstate::Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12,
                  std::string("unitarity ") + optics::to_string(label));
        for (int i = 0; i < 4; ++i) {
          const auto g = qstate::inner(set.states[i], set.states[j]);
          c.require(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-12,
                    std::string("gram ") + optics::to_string(label));
        }
      }
    }
    // mutual unbiasedness of G1 with every other basis
    for (BasisLabel other : {BasisLabel::g2, BasisLabel::g3, BasisLabel::g4, BasisLabel::g5}) {
      const auto t = optics::mub_overlap_table(optics::basis(BasisLabel::g1), optics::basis(other));
      c.require((t.array() - 0.25).abs().maxCoeff() <= 1e-12, std::string("MUB(G1,") + optics::to_string(other) + ")");
    }
    // depolarizing channel: trace, hermiticity, fixed point
    std::mt19937_64 g(271828);
    std::normal_distribution<double> nrm(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      qstate::Matrix a(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = qstate::Complex(nrm(g), nrm(g));
      qstate::Matrix rho = a * a.adjoint();
      rho /= rho.trace();
      const auto d = attacks::depolarize(qstate::DensityOperator(rho, {2, 2}), 0.55);
      c.require(std::abs(d.trace() - 1.0) <= 1e-12, "depolarize trace");
      c.require(d.is_hermitian(), "depolarize hermiticity");
    }
    const qstate::DensityOperator mix(qstate::Matrix::Identity(4, 4) / 4.0, {2, 2});
    c.require((attacks::depolarize(mix, 0.8).mat - mix.mat).cwiseAbs().maxCoeff() <= 1e-12,
              "depolarize fixed point");
    // disturbed-basis orthogonality and vacuum-outcome restoration
    for (double theta : {0.2, 0.7, kPi / 4, 1.2, kPi / 2}) {
      for (BasisLabel label : {BasisLabel::g2, BasisLabel::g4}) {
        const auto d = attacks::disturbed_basis(label, {theta});
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            c.require(std::abs(qstate::inner(d[i], d[j]) - (i == j ? 1.0 : 0.0)) <= 1e-12,
                      "disturbed gram");
          }
        for (int j = 0; j < 4; ++j) {
          const auto joint = attacks::qwp_attack_prepare(j, label, {theta});
          qstate::Vector proj = joint.amps;
          for (int p = 0; p < 4; ++p)
            for (int env = 1; env < 4; ++env) proj(p * 4 + env) = 0.0;
          qstate::StateVector restored(proj / proj.norm(), {2, 2, 2, 2});
          qstate::Vector ideal16 = qstate::Vector::Zero(16);
          for (int p = 0; p < 4; ++p) ideal16(p * 4) = optics::basis(label).states[j].amps(p);
          c.require((restored.amps - ideal16).cwiseAbs().maxCoeff() <= 1e-12, "vacuum restoration");
        }
      }
    }
    // de-rotation measurement against the operator expectation, 100 random draws
    for (int k = 0; k < 100; ++k) {
      qstate::Matrix a(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = qstate::Complex(nrm(g), nrm(g));
      qstate::Matrix rho = a * a.adjoint();
      rho /= rho.trace();
      const qstate::DensityOperator dop(rho, {2, 2});
      Eigen::Vector3d na(nrm(g), nrm(g), nrm(g)), nb(nrm(g), nrm(g), nrm(g));
      na.normalize();
      nb.normalize();
      const double via_circuit = optics::derotation_measurement(dop, na, nb).expectation();
      const double direct = bell::correlation(dop, na, nb);
      c.require(std::abs(via_circuit - direct) <= 1e-9, "derotation expectation");
    }
    // Monte-Carlo device error across a 20-point angle grid
    for (int k = 0; k < 20; ++k) {
      const double theta = (k + 1) * (kPi / 2) / 20.0;
      const auto& set = optics::basis(BasisLabel::g2);
      const auto joint = attacks::apply_with_side_channel(set.circuits[0], {theta});
      const long n = 100000;
      long fails = 0;
      for (long t = 0; t < n; ++t) {
        rng::Engine eng(rng::derive_seed(5000 + k, t));
        fails += protocol::verification_step(joint, set.circuits[0], eng);
      }
      const double expect = 0.5 * std::sin(theta) * std::sin(theta);
      c.require(std::abs(fails / double(n) - expect) <= binom3sigma(expect, double(n)),
                "device error MC at theta " + std::to_string(theta));
    }
  });

  criterion(9, "information bound identity and attacked-state violation record", 5.0, [](Check& c) {
    for (int k = 0; k <= 100; ++k) {
      const double F = 0.5 + 0.005 * k;
      const double lhs = info::i_ae_from_bell(0.09, 2.0 * kS2 * F);
      const double rhs = info::i_ae_side(0.09, F, 0.5);
      c.require(std::abs(lhs - rhs) <= 1e-12, "identity at F = " + std::to_string(F));
    }
    std::printf("      attacked-state CHSH optimum versus the candidate closed forms:\n");
    std::printf("      %-10s %-12s %-14s %-14s %s\n", "theta", "measured", "2sqrt2(1+c^2)", "sqrt2(1+c^2)",
                "closer");
    for (double theta : {0.0, kPi / 4, kPi / 2}) {
      const auto joint = attacks::qwp_attack_prepare(0, BasisLabel::g2, {theta});
      const auto red = qstate::partial_trace(joint, {0, 1});
      const double measured = bell::chsh_optimal(red).first;
      const double c2 = std::cos(theta) * std::cos(theta);
      const double cand_a = 2.0 * kS2 * (1.0 + c2);
      const double cand_b = kS2 * (1.0 + c2);
      std::printf("      %-10.6f %-12.9f %-14.9f %-14.9f %s\n", theta, measured, cand_a, cand_b,
                  std::abs(measured - cand_a) < std::abs(measured - cand_b) ? "first" : "second");
      // the measured optimum equals 2 sqrt(1 + cos^4); the second candidate
      // (= 2 sqrt2 F) is the closer of the two and a lower bound
      c.require(std::abs(measured - 2.0 * std::sqrt(1.0 + c2 * c2)) <= 1e-9, "closed form");
      c.require(measured >= cand_b - 1e-9, "lower bound");
    }
  });

  criterion(10, "byte-identical outputs for identical seeds", 60.0, [&](Check& c) {
    if (cli.empty()) {
      c.require(false, "CLI path not supplied");
      return;
    }
    const std::vector<std::string> commands{
        "simulate --photons 20000 --f 0.4 --seed 7",
        "simulate --photons 20000 --f 1 --theta-sc 1.5707963 --p1 0.5 --seed 7",
        "sweep --f-list 1,0.6,0.5 --e-min 0 --e-max 0.3 --steps 61",
        "thresholds",
        "bell --state werner --e 0.1",
        "bell --state attacked --theta-sc 0.785398 --settings printed",
    };
    int idx = 0;
    for (const auto& cmd : commands) {
      const std::string f1 = "/tmp/ipeqkd_det_a" + std::to_string(idx);
      const std::string f2 = "/tmp/ipeqkd_det_b" + std::to_string(idx);
      ++idx;
      auto exit_code = [](int status) { return WIFEXITED(status) ? WEXITSTATUS(status) : -1; };
      const int s1 = exit_code(std::system((cli + " " + cmd + " > " + f1 + " 2>/dev/null").c_str()));
      const int s2 = exit_code(std::system((cli + " " + cmd + " > " + f2 + " 2>/dev/null").c_str()));
      // a protocol abort (code 3) is a legitimate, deterministic outcome
      c.require(s1 == 0 || s1 == 3, "command failed: " + cmd);
      c.require(s1 == s2, "exit codes differ for: " + cmd);
      const std::string a = slurp(f1), b = slurp(f2);
      c.require(!a.empty() && a == b, "outputs differ for: " + cmd);
      std::remove(f1.c_str());
      std::remove(f2.c_str());
    }
  });

  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
