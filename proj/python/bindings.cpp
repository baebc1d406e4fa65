#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ipe/attacks.hpp"
#include "ipe/bell.hpp"
#include "ipe/infotheory.hpp"
#include "ipe/optics.hpp"
#include "ipe/protocol.hpp"
#include "ipe/qstate.hpp"

namespace py = pybind11;
using namespace ipe;

namespace {

optics::BasisLabel parse_basis(const std::string& name) {
  if (name == "G1" || name == "g1") return optics::BasisLabel::g1;
  if (name == "G2" || name == "g2") return optics::BasisLabel::g2;
  if (name == "G3" || name == "g3") return optics::BasisLabel::g3;
  if (name == "G4" || name == "g4") return optics::BasisLabel::g4;
  if (name == "G5" || name == "g5") return optics::BasisLabel::g5;
  throw std::invalid_argument("unknown basis label: " + name);
}

bell::MeasurementSettings parse_settings(const std::string& name) {
  if (name == "corrected") return bell::settings_corrected();
  if (name == "printed") return bell::settings_printed();
  throw std::invalid_argument("unknown settings selector: " + name);
}

qstate::DensityOperator as_two_qubit(const Eigen::MatrixXcd& m) {
  return qstate::DensityOperator(m, {2, 2});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Intra-particle entanglement QKD toolkit: states, circuits, CHSH quantities, "
            "attack models and key rates";

  // --- states and bases ---
  m.def("prepare_basis", [](const std::string& label) {
    const auto set = optics::prepare_basis(parse_basis(label));
    std::vector<Eigen::VectorXcd> out;
    for (const auto& s : set.states) out.push_back(s.amps);
    return out;
  }, py::arg("label"), "The four states of a preparation basis (G1..G5)");

  m.def("mub_overlap_table", [](const std::string& b1, const std::string& b2) {
    return Eigen::Matrix4d(
        optics::mub_overlap_table(optics::basis(parse_basis(b1)), optics::basis(parse_basis(b2))));
  }, py::arg("basis1"), py::arg("basis2"));

  m.def("bob_analyzer", [](const Eigen::VectorXcd& state, const std::string& basis) {
    return optics::bob_analyzer(qstate::StateVector(state, {2, 2}), parse_basis(basis));
  }, py::arg("state"), py::arg("basis"));

  m.def("phi_plus", [] { return Eigen::VectorXcd(bell::phi_plus().amps); });
  m.def("singlet", [] { return Eigen::VectorXcd(bell::singlet().amps); });
  m.def("werner", [](double e) { return Eigen::MatrixXcd(bell::werner(e).mat); }, py::arg("e"));

  m.def("purity", [](const Eigen::MatrixXcd& rho) { return qstate::purity(as_two_qubit(rho)); });
  m.def("is_entangled_ppt",
        [](const Eigen::MatrixXcd& rho) { return qstate::is_entangled_ppt(as_two_qubit(rho)); });

  // --- CHSH ---
  m.def("correlation", [](const Eigen::MatrixXcd& rho, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return bell::correlation(as_two_qubit(rho), a, b);
  });
  m.def("chsh", [](const Eigen::MatrixXcd& rho, const std::string& settings) {
    return bell::chsh(as_two_qubit(rho), parse_settings(settings));
  }, py::arg("rho"), py::arg("settings") = "corrected");
  m.def("chsh_optimal", [](const Eigen::MatrixXcd& rho) {
    const auto [s, opt] = bell::chsh_optimal(as_two_qubit(rho));
    py::dict settings;
    settings["a1"] = Eigen::Vector3d(opt.a1);
    settings["a2"] = Eigen::Vector3d(opt.a2);
    settings["b1"] = Eigen::Vector3d(opt.b1);
    settings["b2"] = Eigen::Vector3d(opt.b2);
    return py::make_tuple(s, settings);
  });
  m.def("separable_bound_search", &bell::separable_bound_search, py::arg("trials"),
        py::arg("seed") = 20230901u);
  m.def("threshold_e_lr", &bell::threshold_e_LR);
  m.def("threshold_e_ent", &bell::threshold_e_ent);

  // --- rates ---
  m.def("shannon_entropy",
        [](const std::vector<double>& p) { return info::shannon_entropy(p); });
  m.def("i_ab", &info::i_ab, py::arg("e"));
  m.def("i_ae_conventional", &info::i_ae_conventional, py::arg("e"));
  m.def("i_ae_side", &info::i_ae_side, py::arg("e"), py::arg("f_fid"), py::arg("p1"));
  m.def("i_ae_from_bell", &info::i_ae_from_bell, py::arg("e"), py::arg("b_violation"));
  m.def("key_rate", [](double e, double f_fid, double p1, const std::string& scenario) {
    const auto sc = scenario == "conventional" ? info::Scenario::conventional : info::Scenario::side_channel;
    return info::key_rate({e, f_fid, p1, sc});
  }, py::arg("e"), py::arg("f_fid") = 1.0, py::arg("p1") = 0.5, py::arg("scenario") = "conventional");
  m.def("solve_threshold", [](const std::string& scenario, double f_fid, double p1) {
    const auto sc = scenario == "conventional" ? info::Scenario::conventional : info::Scenario::side_channel;
    return info::solve_threshold(sc, f_fid, p1);
  }, py::arg("scenario") = "conventional", py::arg("f_fid") = 1.0, py::arg("p1") = 0.5);

  // --- side channel ---
  m.def("device_error", [](double theta) { return attacks::device_error({theta}); }, py::arg("theta_sc"));
  m.def("qwp_attack_prepare", [](int element, const std::string& basis, double theta) {
    return Eigen::VectorXcd(attacks::qwp_attack_prepare(element, parse_basis(basis), {theta}).amps);
  }, py::arg("element"), py::arg("basis"), py::arg("theta_sc"));
  m.def("attacked_reduced_state", [](double theta) {
    const auto joint = attacks::qwp_attack_prepare(0, optics::BasisLabel::g2, {theta});
    return Eigen::MatrixXcd(qstate::partial_trace(joint, {0, 1}).mat);
  }, py::arg("theta_sc"), "Reduced particle state of the leaky entangled-element preparation");
  m.def("eve_posterior_g1", [](bool pi0_seen, double theta, double p1) {
    return attacks::eve_posterior_g1(pi0_seen, {theta}, p1);
  }, py::arg("pi0_seen"), py::arg("theta_sc"), py::arg("p1"));

  // --- protocol ---
  m.def("run_protocol", [](long photons, double f, double theta_sc, double p1, double g,
                           std::uint64_t seed, const std::string& basis_pair, double disclosure) {
    protocol::ProtocolConfig cfg;
    cfg.n = photons;
    cfg.f = f;
    cfg.side_channel.theta_sc = theta_sc;
    cfg.p1 = p1;
    cfg.g = g;
    cfg.seed = seed;
    cfg.disclosure = disclosure;
    if (basis_pair == "g1g4") cfg.basis_pair = {optics::BasisLabel::g1, optics::BasisLabel::g4};
    const auto [transcript, rep] = protocol::run(cfg);
    py::dict d;
    d["photons"] = rep.n;
    d["verified_count"] = rep.verified_count;
    d["verified_entangled_count"] = rep.verified_entangled_count;
    d["transmitted"] = rep.transmitted;
    d["sifted_length"] = rep.sifted_length;
    d["e_A_observed"] = rep.e_a_observed;
    d["e_A_entangled_basis"] = rep.e_a_entangled;
    d["F_estimate"] = rep.f_estimate;
    d["e_observed"] = rep.e_observed;
    d["eve_info_estimate"] = rep.eve_info_estimate;
    d["key_rate_estimate"] = rep.key_rate_estimate;
    d["threshold_e_scenario"] = rep.threshold_e_scenario;
    d["abort_threshold_e"] = rep.abort_threshold_e;
    d["aborted"] = rep.aborted;
    return d;
  }, py::arg("photons") = 100000, py::arg("f") = 0.0, py::arg("theta_sc") = 0.0, py::arg("p1") = 0.5,
     py::arg("g") = 0.2, py::arg("seed") = 1, py::arg("basis_pair") = "g1g2", py::arg("disclosure") = 1.0);

  m.def("analytic_report", [](const std::vector<double>& f_values, const std::vector<double>& e_grid) {
    std::vector<std::tuple<double, double, double, double, double, bool>> out;
    for (const auto& r : protocol::analytic_report(f_values, e_grid)) {
      out.emplace_back(r.f_fid, r.e, r.i_ab, r.i_ae, r.key_rate, r.zero_crossing);
    }
    return out;
  }, py::arg("f_values"), py::arg("e_grid"));

  m.attr("__version__") = "0.1.0";
}
