#include "rnls/json_io.hpp"

namespace rnls {

using nlohmann::json;

void to_json(json& j, const PhysicsParams& p) {
  j = json{{"dim", p.dim},
           {"p", p.p},
           {"gammas", std::vector<double>(p.gammas.begin(), p.gammas.begin() + p.dim)},
           {"omega_rot", p.omega_rot},
           {"lomega_sign", p.lomega_sign}};
}

void from_json(const json& j, PhysicsParams& p) {
  j.at("dim").get_to(p.dim);
  j.at("p").get_to(p.p);
  const auto g = j.at("gammas").get<std::vector<double>>();
  for (std::size_t a = 0; a < g.size() && a < 3; ++a) p.gammas[a] = g[a];
  j.at("omega_rot").get_to(p.omega_rot);
  p.lomega_sign = j.value("lomega_sign", -1);
}

void to_json(json& j, const Grid& g) {
  j = json{{"dim", g.dim},
           {"half_width", std::vector<double>(g.half_width.begin(), g.half_width.begin() + g.dim)},
           {"points", std::vector<std::size_t>(g.points.begin(), g.points.begin() + g.dim)}};
}

void to_json(json& j, const FunctionalReport& r) {
  j = json{{"mass", r.mass},         {"kinetic", r.kinetic},     {"potential", r.potential},
           {"lp1", r.lp1},           {"ang_mom", r.ang_mom},     {"quad_form", r.quad_form},
           {"energy", r.energy},     {"sigma_norm2", r.sigma_norm2}};
}

void to_json(json& j, const QProfile& q) {
  j = json{{"dim", q.dim},
           {"p", q.p},
           {"tol", q.tol},
           {"q0", q.q0},
           {"dr", q.dr},
           {"r_match", q.r_match},
           {"r_max", q.r_max},
           {"tail_coefficient", q.tail_coefficient},
           {"mass", q.mass},
           {"grad", q.grad},
           {"lp1", q.lp1},
           {"e00", q.e00},
           {"c_gn", q.c_gn},
           {"pohozaev_grad_residual", q.pohozaev_grad_residual},
           {"pohozaev_energy_residual", q.pohozaev_energy_residual},
           {"certified", q.certified},
           {"samples", {{"r", q.r}, {"q", q.q}, {"dq", q.dq}}}};
}

void from_json(const json& j, QProfile& q) {
  j.at("dim").get_to(q.dim);
  j.at("p").get_to(q.p);
  j.at("tol").get_to(q.tol);
  j.at("q0").get_to(q.q0);
  j.at("dr").get_to(q.dr);
  j.at("r_match").get_to(q.r_match);
  j.at("r_max").get_to(q.r_max);
  j.at("tail_coefficient").get_to(q.tail_coefficient);
  j.at("mass").get_to(q.mass);
  j.at("grad").get_to(q.grad);
  j.at("lp1").get_to(q.lp1);
  j.at("e00").get_to(q.e00);
  j.at("c_gn").get_to(q.c_gn);
  j.at("pohozaev_grad_residual").get_to(q.pohozaev_grad_residual);
  j.at("pohozaev_energy_residual").get_to(q.pohozaev_energy_residual);
  j.at("certified").get_to(q.certified);
  const auto& s = j.at("samples");
  s.at("r").get_to(q.r);
  s.at("q").get_to(q.q);
  s.at("dq").get_to(q.dq);
}

void to_json(json& j, const Thresholds& t) {
  j = json{{"s_c", t.s_c},
           {"x1", t.x1},
           {"x_max", t.x_max},
           {"x_r", t.x_r},
           {"me_threshold", t.me_threshold},
           {"grad_threshold", t.grad_threshold},
           {"lower_bound_prefactor", t.lower_bound_prefactor}};
}

}  // namespace rnls

namespace rnls {

void to_json(json& j, const EigenResult& r) {
  j = json{{"mu0", r.mu0},         {"lambda0", r.lambda0},       {"residual", r.residual},
           {"iterations", r.iterations}, {"converged", r.converged}};
}

void to_json(json& j, const GroundState& gs) {
  j = json{{"source", to_string(gs.source)},
           {"params", gs.params},
           {"grid", gs.field.grid()},
           {"omega", gs.omega},
           {"lambda0", gs.lambda0},
           {"mass", gs.mass},
           {"quad_form", gs.quad_form},
           {"lp1", gs.lp1},
           {"energy", gs.energy},
           {"action", gs.action},
           {"d_omega", gs.d_omega},
           {"residual", gs.residual},
           {"relative_residual", gs.relative_residual},
           {"nehari_residual", gs.nehari_residual},
           {"iterations", gs.iterations},
           {"converged", gs.converged}};
  if (gs.source == GroundStateSource::local) {
    j["q"] = gs.q;
    j["r"] = gs.r;
  }
}

void to_json(json& j, const CertificationReport& c) {
  j = json{{"pohozaev_residual", c.pohozaev_residual},
           {"ew1_residual", c.ew1_residual},
           {"sni_slack", c.sni_slack},
           {"ew2_slack", c.ew2_slack},
           {"er1_slack", c.er1_slack},
           {"stationary_residual", c.stationary_residual},
           {"nehari_residual", c.nehari_residual},
           {"passed", c.passed}};
}

void to_json(json& j, const LocalMinimizationSpec& s) {
  j = json{{"q", s.q}, {"r", s.r}, {"q0_estimate", s.q0_estimate},
           {"chi", s.chi}, {"delta", s.delta}, {"constant", s.constant}};
}

void to_json(json& j, const GapReport& g) {
  j = json{{"phi_at_qr2", g.phi_at_qr2}, {"gamma_inf", g.gamma_inf}, {"gap", g.gap}, {"q0", g.q0}};
}

void to_json(json& j, const RescaledState& r) {
  j = json{{"omega", r.omega},
           {"params", r.params},
           {"mass_ratio_error", r.mass_ratio_error},
           {"ratio_lhs", r.ratio_lhs},
           {"ratio_rhs", r.ratio_rhs},
           {"ang_mom_scaling_error", r.ang_mom_scaling_error},
           {"residual", r.residual}};
}

void to_json(json& j, const LEstimate& l) {
  j = json{{"l", l.l},
           {"l_upper", l.l_upper},
           {"mode", to_string(l.mode)},
           {"sampling_interval", l.sampling_interval},
           {"trajectory_conditional", l.trajectory_conditional},
           {"certified", l.certified}};
}

void to_json(json& j, const ClassificationReport& r) {
  j = json{{"s_c", r.s_c},
           {"l_estimate", r.l},
           {"energy", r.energy},
           {"mass", r.mass},
           {"me_product", std::isfinite(r.me_product) ? json(r.me_product) : json(nullptr)},
           {"me_threshold", r.me_threshold},
           {"grad_product", r.grad_product},
           {"grad_threshold", r.grad_threshold},
           {"verdict", to_string(r.verdict)},
           {"lower_bound_constant", r.lower_bound_constant},
           {"lower_bound_prefactor", r.lower_bound_prefactor}};
  if (r.verdict == Verdict::negative_energy_blowup || r.verdict == Verdict::K_minus)
    j["note"] = "if l = -infinity the solution blows up in finite time or grows up; a finite run "
                "cannot tell which, only growth is recorded";
}

void to_json(json& j, const GradientBoundSeries& s) {
  j = json{{"bound", s.bound},
           {"valid_samples", s.valid_samples},
           {"all_valid_pass", s.all_valid_pass},
           {"t", s.t},
           {"grad_norm", s.grad_norm},
           {"valid", s.valid},
           {"pass", s.pass}};
}

void to_json(json& j, const MonitorReport& m) {
  j = json{{"blowup", m.blowup},
           {"resolution_lost", m.resolution_lost},
           {"grad_ratio", m.grad_ratio},
           {"tail_fraction", m.tail_fraction},
           {"l_running_min", m.l_running_min}};
}

void to_json(json& j, const Trajectory& t) {
  j = json{{"termination", to_string(t.termination)},
           {"samples", t.rows.size()},
           {"steps", t.steps},
           {"dt_initial", t.dt_initial},
           {"dt_final", t.dt_final},
           {"t_final", t.rows.empty() ? 0.0 : t.rows.back().t},
           {"mass_drift", t.mass_drift},
           {"energy_drift", t.energy_drift},
           {"ang_mom_drift", t.ang_mom_drift},
           {"ang_mom_rate_integral", t.ang_mom_rate_integral},
           {"max_phase_increment", t.max_phase_increment},
           {"last_monitor", t.last_monitor}};
}

void to_json(json& j, const StabilityRun& r) {
  j = json{{"delta", r.delta},
           {"initial_distance", r.initial_distance},
           {"sup_distance", r.sup_distance},
           {"ratio", r.ratio},
           {"termination", to_string(r.termination)},
           {"time_of_sup", r.time_of_sup}};
}

void to_json(json& j, const StabilityReport& r) {
  j = json{{"kind", to_string(r.kind)},
           {"horizon", r.horizon},
           {"indicator", std::isfinite(r.indicator) ? json(r.indicator) : json(nullptr)},
           {"runs", r.runs},
           {"stability_evidence", r.stability_evidence},
           {"instability_evidence", r.instability_evidence},
           {"ratio_spread", r.ratio_spread}};
}

}  // namespace rnls
