#include "pwave/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "pwave/acceptance.hpp"
#include "pwave/errors.hpp"
#include "pwave/expansion.hpp"
#include "pwave/fock_model.hpp"
#include "pwave/oracles.hpp"
#include "pwave/torus.hpp"

namespace pwave {
namespace {

constexpr const char* kModule = "cli";

Json lattice_json(const LatticeVector& n, int dim) {
  Json j = Json::array();
  for (int c = 0; c < dim; ++c) j.push_back(n[c]);
  return j;
}

TorusSpec torus_from(const RunConfig& cfg) {
  TorusSpec spec{cfg.require_int("torus.dim"), cfg.require_double("torus.L")};
  spec.validate();
  return spec;
}

std::string fixed(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------

CommandOutput cmd_scatlen(const RunConfig& cfg) {
  CommandOutput out;
  Report& r = out.report;
  const RadialPotential V = potential_from(cfg);
  const double tol = cfg.get_double("scattering.tol", 1e-10);
  const ScatteringSolution sol = solve_scattering(V, tol);
  const int d = V.dim();
  Json& p = r.payload;
  p["dim"] = d;
  p["kind"] = to_string(V.kind());
  p["a"] = sol.a;
  p["a_pow_d"] = sol.a_pow_d;
  p["A"] = sol.exterior_A;
  p["B"] = sol.exterior_B;
  p["ode_residual"] = sol.ode_residual;
  p["steps_to_range"] = sol.steps_to_range;
  r.check("ode_residual <= tol", sol.ode_residual <= tol, sol.ode_residual, tol);
  if (d == 3) {
    const double at = scattering_length_integral(sol, V);
    p["a_integral"] = at;
    const double rel = sol.a > 0.0 ? std::abs(sol.a - at) / sol.a : std::abs(at);
    r.check("a vs a_integral", rel <= 1e-6, rel, 1e-6);
  } else {
    p["a_integral"] = nullptr;
  }
  if (V.kind() == PotentialKind::SoftSphere) {
    const double o = oracle::soft_sphere_a(d, V.height(), V.range());
    p["a_oracle"] = o;
    const double rel = o > 0.0 ? std::abs(sol.a - o) / o : std::abs(sol.a);
    r.check("a vs Bessel oracle", rel <= 1e-8, rel, 1e-8);
  }
  const EnvelopeReport env = check_envelope(sol);
  const std::size_t violations = env.monotonicity_violations + env.lower_violations + env.upper_violations;
  p["envelope"] = {{"monotonicity_violations", env.monotonicity_violations},
                   {"lower_violations", env.lower_violations},
                   {"upper_violations", env.upper_violations},
                   {"derivative_constant", env.derivative_constant},
                   {"nodes_checked", env.nodes_checked}};
  if (d == 3) r.check("envelope violations", violations == 0, static_cast<double>(violations), 0.0);
  else if (violations) r.warnings.push_back("pointwise envelope violated in d=" + std::to_string(d));
  if (d != 3) r.warnings.push_back("a in d=" + std::to_string(d) + " follows the a^d = -B/A convention");

  const double k_F = cfg.get_double("scattering.kf", 0.5 / V.range());
  CsvTable csv({"r", "psi", "psi_prime", "phi0", "phi", "E_phi"});
  if (sol.a > 0.0) {
    const CutoffScattering cs = cutoff_phi(sol, k_F);
    p["k_F"] = k_F;
    p["residual_constant"] = d == 3 ? Json(residual_bound_constant(cs)) : Json(nullptr);
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
      const double x = sol.grid[i];
      csv.add_row(std::vector<double>{x, sol.psi[i], sol.psi_prime[i], sol.phi0(x), cs.phi(x), cs.residual(x)});
    }
    const double r_end = sol.grid.back();
    const double r_out = std::max(r_end, 2.0 / k_F);
    for (int i = 1; i <= 200; ++i) {
      const double x = r_end + (r_out - r_end) * i / 200.0;
      if (x <= r_end) continue;
      const double psi = sol.exterior_A + sol.exterior_B * std::pow(x, -d);
      const double dpsi = -d * sol.exterior_B * std::pow(x, -d - 1);
      csv.add_row(std::vector<double>{x, psi, dpsi, sol.phi0(x), cs.phi(x), cs.residual(x)});
    }
    out.files.emplace_back("scatlen_profile.csv", csv.str());
  }
  out.lines.push_back("a = " + fixed(sol.a, 15) + "  (a^d = " + fixed(sol.a_pow_d, 15) + ")");
  if (d == 3) out.lines.push_back("a_integral = " + fixed(p["a_integral"].get<double>(), 15));
  out.lines.push_back("ode_residual = " + fixed(sol.ode_residual, 3));
  return out;
}

CommandOutput cmd_fermiball(const RunConfig& cfg) {
  CommandOutput out;
  const TorusSpec spec = torus_from(cfg);
  const FermiBall b = fermi_ball(spec, cfg.require_double("torus.kf"));
  const DensityRelation rel = kf_density_relation(b);
  out.report.payload = {{"dim", spec.dim},    {"L", spec.L},           {"k_F", b.k_F},
                        {"N", b.N},           {"E_F", b.E_F},          {"rho", b.rho},
                        {"delta1", rel.delta1}, {"delta2", rel.delta2}, {"shell", b.shell}};
  out.lines.push_back("N = " + std::to_string(b.N) + ", E_F = " + fixed(b.E_F, 15));
  return out;
}

CommandOutput cmd_bracket(const RunConfig& cfg) {
  CommandOutput out;
  const TorusSpec spec = torus_from(cfg);
  const int n = cfg.require_int("torus.N");
  if (n < 1) throw Error(ErrorCode::ConfigError, kModule, "key 'torus.N': must be >= 1");
  const ParticleBracket b = bracket_particle_number(spec, static_cast<std::size_t>(n));
  out.report.payload = {{"N", n},           {"k_F_lo", b.k_F_lo},       {"N_lo", b.N_lo},
                        {"k_F_hi", b.k_F_hi}, {"N_hi", b.N_hi},          {"excess_hi", b.excess_hi},
                        {"deficit_lo", b.deficit_lo}};
  const std::size_t lo_count = fermi_ball(spec, b.k_F_lo).N;
  const std::size_t hi_count = fermi_ball(spec, b.k_F_hi).N;
  const bool ok = lo_count == b.N_lo && hi_count == b.N_hi && b.N_lo <= static_cast<std::size_t>(n) &&
                  static_cast<std::size_t>(n) <= b.N_hi;
  out.report.check("shell sandwich", ok, ok ? 1.0 : 0.0, 1.0);
  out.lines.push_back("k_F_lo = " + fixed(b.k_F_lo) + " (N_lo = " + std::to_string(b.N_lo) + "), k_F_hi = " +
                      fixed(b.k_F_hi) + " (N_hi = " + std::to_string(b.N_hi) + ")");
  return out;
}

CommandOutput cmd_pair_density(const RunConfig& cfg) {
  CommandOutput out;
  const TorusSpec spec = torus_from(cfg);
  const double k_F = cfg.require_double("torus.kf");
  const double r_min = cfg.get_double("pair.r_min", 0.01);
  const double r_max = cfg.get_double("pair.r_max", 0.1);
  const int points = cfg.get_int("pair.points", 20);
  if (points < 2) throw Error(ErrorCode::ConfigError, kModule, "key 'pair.points': must be >= 2");
  if (!(r_min > 0.0 && r_max > r_min)) throw Error(ErrorCode::ConfigError, kModule, "key 'pair.r_max': must exceed pair.r_min > 0");
  const PairDensityFit f = pair_density_fit(spec.dim, k_F * spec.L, r_min, r_max, points);
  // the fit runs at L = 1; rescale to the configured box
  const FermiBall ball = fermi_ball(spec, k_F);
  const KernelTable kt(ball);
  CsvTable csv({"r", "v", "rho2_axis", "rho2_spherical", "rho2_continuum"});
  for (int i = 0; i < points; ++i) {
    const double r = (r_min + (r_max - r_min) * i / (points - 1)) / k_F;
    csv.add_row(std::vector<double>{r, kt.v(r), kt.pair_density_axis(r), kt.pair_density_spherical(r),
                                    continuum_pair_density(spec.dim, k_F, r)});
  }
  out.files.emplace_back("pair_density.csv", csv.str());
  out.report.payload = {{"dim", spec.dim},
                        {"kFL", k_F * spec.L},
                        {"N", f.N},
                        {"ratio", f.ratio},
                        {"power", f.power},
                        {"spherical_ratio", f.spherical_ratio},
                        {"density_kf_ratio", f.density_kf_ratio}};
  out.report.check("coefficient within 5%", std::abs(f.ratio - 1.0) <= 0.05, f.ratio, 0.05);
  out.report.check("power in [1.9, 2.1]", f.power >= 1.9 && f.power <= 2.1, f.power, 2.0);
  out.lines.push_back("coefficient ratio = " + fixed(f.ratio, 6) + ", power = " + fixed(f.power, 6) +
                      ", ratio with density k_F = " + fixed(f.density_kf_ratio, 6));
  return out;
}

CommandOutput cmd_interaction(const RunConfig& cfg) {
  CommandOutput out;
  const RadialPotential V = potential_from(cfg);
  const ScatteringSolution sol = solve_scattering(V, cfg.get_double("scattering.tol", 1e-10));
  const double akf = cfg.get_double("interaction.akf", 0.02);
  const double kfl = cfg.get_double("interaction.kfL", 40.0);
  constexpr double tol = 0.1;
  const InteractionRatio ir = interaction_ratio(sol, akf, kfl);
  out.report.payload = {{"dim", V.dim()},         {"a", ir.a},
                        {"k_F", ir.k_F},          {"L", ir.L},
                        {"N", ir.N},              {"expectation", ir.lattice},
                        {"reference", ir.reference}, {"ratio", ir.ratio},
                        {"continuum_ratio", ir.continuum_ratio}};
  out.report.check("ratio within tolerance of 1", std::abs(ir.ratio - 1.0) <= tol, ir.ratio, tol);
  out.lines.push_back("ratio = " + fixed(ir.ratio, 8) + " (N = " + std::to_string(ir.N) +
                      "), infinite volume " + fixed(ir.continuum_ratio, 10));
  return out;
}

Json breakdown_json(const EnergyBreakdown& b) {
  Json terms = Json::array();
  for (const auto& t : b.terms) terms.push_back({{"label", t.label}, {"value", t.value}});
  Json env = Json::array();
  for (const auto& t : b.envelope) env.push_back({{"label", t.label}, {"value", t.value}});
  Json j{{"dim", b.dim}, {"a", b.a}, {"k_F", b.k_F}, {"N", b.N}, {"akF", b.a * b.k_F},
         {"R_eff", b.R_eff ? Json(*b.R_eff) : Json(nullptr)}, {"terms", terms}, {"total", b.total},
         {"envelope", env}};
  if (b.bracket) {
    j["bracket"] = {{"lower", b.bracket->lower},
                    {"upper", b.bracket->upper},
                    {"C_low", b.bracket->constants.C_low},
                    {"C_up", b.bracket->constants.C_up},
                    {"C_fs", b.bracket->constants.C_fs}};
  } else {
    j["bracket"] = nullptr;
  }
  return j;
}

EnvelopeConstants constants_from(const RunConfig& cfg) {
  EnvelopeConstants c{cfg.get_double("expansion.C_low", 1.0), cfg.get_double("expansion.C_up", 1.0),
                      cfg.get_double("expansion.C_fs", 1.0)};
  if (c.C_low < 0 || c.C_up < 0 || c.C_fs < 0)
    throw Error(ErrorCode::ConfigError, kModule, "key 'expansion.C_low': envelope constants must be >= 0");
  return c;
}

CommandOutput cmd_energy(const RunConfig& cfg) {
  CommandOutput out;
  const int d = cfg.require_int("expansion.dim");
  const double a = cfg.require_double("expansion.a");
  const double kf = cfg.require_double("expansion.kf");
  const int n = cfg.get_int("expansion.N", 1000);
  if (n < 1) throw Error(ErrorCode::ConfigError, kModule, "key 'expansion.N': must be >= 1");
  std::optional<double> reff;
  if (cfg.has("expansion.R_eff")) reff = cfg.require_double("expansion.R_eff");
  const EnergyBreakdown b = energy_expansion(d, a, kf, static_cast<std::size_t>(n), reff, constants_from(cfg));
  out.report.payload = breakdown_json(b);
  out.report.warnings = b.warnings;
  for (const auto& t : b.terms) out.lines.push_back(t.label + " = " + fixed(t.value, 12));
  out.lines.push_back("total = " + fixed(b.total, 12) + " (units of k_F^2 per particle)");
  if (b.bracket)
    out.lines.push_back("bracket = [" + fixed(b.bracket->lower, 10) + ", " + fixed(b.bracket->upper, 10) + "]");
  return out;
}

struct FockRun {
  FockSetup setup;
  RadialPotential V;
  ScatteringSolution sol;
  CutoffScattering cs;
  FockModel model;
};

FockRun fock_run(const RunConfig& cfg) {
  FockSetup s = fock_setup_from(cfg);
  auto V = RadialPotential::soft_sphere(s.model.spec.dim, s.v0, s.r0);
  auto sol = solve_scattering(V);
  CutoffScattering cs(sol, s.model.k_F);
  auto model = build_model(s.model, V, cs);
  return {std::move(s), std::move(V), std::move(sol), std::move(cs), std::move(model)};
}

Json model_json(const FockModel& m) {
  return {{"dim", m.modes.spec().dim},
          {"L", m.modes.spec().L},
          {"k_F", m.config.k_F},
          {"modes", m.modes.size()},
          {"basis_dimension", m.basis.dim()},
          {"N", m.N()},
          {"E_F", m.E_F},
          {"a", m.scattering_length},
          {"dropped_B_fraction", m.dropped_B_fraction},
          {"regulator", "quintic smoothstep in |k|/k_F on [2, 3]"}};
}

CommandOutput cmd_fock_verify(const RunConfig& cfg) {
  CommandOutput out;
  const FockRun fr = fock_run(cfg);
  const FockModel& m = fr.model;
  Report& r = out.report;
  r.warnings = m.warnings;
  const CommutatorReport c = commutator_suite(m);
  r.payload["model"] = model_json(m);
  r.payload["identities"] = {{"car_defect", c.car_defect},
                             {"nilpotency_defect", c.nilpotency_defect},
                             {"car_pairs", c.car_pairs},
                             {"B_anti_hermiticity", c.B_anti_hermiticity},
                             {"H_hermiticity", c.H_hermiticity},
                             {"H_number_commutator", c.H_number_commutator},
                             {"H_momentum_commutator", c.H_momentum_commutator},
                             {"R_unitarity", c.R_unitarity},
                             {"R_vacuum_to_fermi_sea", c.R_maps_vacuum_to_fermi_sea},
                             {"kinetic_conjugation_defect", c.kinetic_conjugation_defect},
                             {"wick_matrix", c.wick_matrix},
                             {"wick_lattice", c.wick_lattice},
                             {"wick_relative_defect", c.wick_relative_defect},
                             {"minus_two_Vphi_F", c.minus_two_Vphi_F},
                             {"number_B_defect", c.number_B_defect}};
  r.payload["inequalities"] = {{"C_high", c.C_high},
                               {"C_alpha", c.C_alpha},
                               {"alpha", m.config.alpha},
                               {"high_holds", c.high_inequality_holds},
                               {"alpha_holds", c.alpha_inequality_holds}};
  r.check("CAR", std::max(c.car_defect, c.nilpotency_defect) <= 1e-13, std::max(c.car_defect, c.nilpotency_defect),
          1e-13);
  r.check("B anti-Hermitian", c.B_anti_hermiticity <= 1e-13, c.B_anti_hermiticity, 1e-13);
  r.check("H Hermitian", c.H_hermiticity <= 1e-13, c.H_hermiticity, 1e-13);
  r.check("[H, N] = 0", c.H_number_commutator <= 1e-13, c.H_number_commutator, 1e-13);
  r.check("[H, P] = 0", c.H_momentum_commutator <= 1e-13, c.H_momentum_commutator, 1e-13);
  r.check("[N, B] formula", c.number_B_defect <= 1e-13, c.number_B_defect, 1e-13);
  r.check("N_> inequality", c.high_inequality_holds, c.C_high, 1.0);
  r.check("N_>alpha inequality", c.alpha_inequality_holds, c.C_alpha, 0.0);
  if (m.R) {
    r.check("R unitary", c.R_unitarity <= 1e-13, c.R_unitarity, 1e-13);
    r.check("R Omega = psi_F", c.R_maps_vacuum_to_fermi_sea, c.R_maps_vacuum_to_fermi_sea ? 1.0 : 0.0, 1.0);
    r.check("R*TR = E_F + H0", c.kinetic_conjugation_defect <= 1e-12, c.kinetic_conjugation_defect, 1e-12);
    r.check("Wick vacuum commutator", c.wick_relative_defect <= 1e-10, c.wick_relative_defect, 1e-10);
    double unitarity = 0.0;
    for (double lambda : {0.25, 0.5, 1.0}) {
      const Vector xi = evolve_xi(m, m.fermi_state(), lambda);
      unitarity = std::max(unitarity, std::abs(xi.norm() - 1.0));
    }
    r.payload["exp_unitarity"] = unitarity;
    r.check("|xi_lambda| = 1", unitarity <= 1e-11, unitarity, 1e-11);
  } else {
    r.warnings.push_back("basis not closed under the particle-hole map; R-dependent checks skipped");
  }
  for (const auto& ch : r.checks)
    out.lines.push_back(std::string(ch.passed ? "ok   " : "FAIL ") + ch.name + ": " + fixed(ch.value, 4));
  return out;
}

CommandOutput cmd_ed(const RunConfig& cfg) {
  CommandOutput out;
  const FockSetup s = fock_setup_from(cfg);
  auto V = RadialPotential::soft_sphere(s.model.spec.dim, s.v0, s.r0);
  auto sol = solve_scattering(V);
  CutoffScattering cs(sol, s.model.k_F);
  // The Hamiltonian only needs the mode set; build the model on its smallest sector.
  FockModelConfig mc = s.model;
  const FermiBall ball = fermi_ball(mc.spec, mc.k_F);
  const std::size_t n = s.sector_n.value_or(ball.N);
  mc.sectors = {n};
  const FockModel m = build_model(mc, V, cs);
  const Basis sector = Basis::sector(m.modes, n, s.total_momentum, mc.dimension_cap);
  if (sector.dim() == 0) throw Error(ErrorCode::SectorMissing, "fock", "requested sector is empty");
  const GroundState gs = ground_state(m.hamiltonian_on(sector));
  Json& p = out.report.payload;
  p["model"] = model_json(m);
  p["sector_n"] = n;
  p["total_momentum"] = s.total_momentum ? lattice_json(*s.total_momentum, mc.spec.dim) : Json(nullptr);
  p["sector_dimension"] = sector.dim();
  p["energy"] = gs.energy;
  p["residual"] = gs.residual;
  p["method"] = gs.method;
  const double tol = 1e-9 * (gs.energy != 0.0 ? std::abs(gs.energy) : 1.0);
  out.report.check("eigen residual", gs.residual <= tol, gs.residual, tol);
  CsvTable csv({"index", "state", "amplitude"});
  for (std::size_t i = 0; i < sector.dim(); ++i)
    csv.add_row(std::vector<std::string>{std::to_string(i), std::to_string(sector.state(i)),
                                         format_double(gs.vector[static_cast<Eigen::Index>(i)])});
  out.files.emplace_back("ed_eigenvector.csv", csv.str());
  out.lines.push_back("E_0 = " + fixed(gs.energy, 15) + " (" + gs.method + ", dim " + std::to_string(sector.dim()) +
                      ", residual " + fixed(gs.residual, 3) + ")");
  return out;
}

CommandOutput cmd_audit(const RunConfig& cfg) {
  CommandOutput out;
  const FockRun fr = fock_run(cfg);
  const FockModel& m = fr.model;
  out.report.warnings = m.warnings;
  const std::string which = cfg.get_string("fock.state", "all");
  if (which != "all" && which != "fermi" && which != "trial" && which != "ground")
    throw Error(ErrorCode::ConfigError, kModule, "key 'fock.state': expected all, fermi, trial or ground");
  const TrialReport tr = trial_vs_oracle(m);
  std::vector<std::pair<std::string, Vector>> psis;
  if (which == "all" || which == "fermi") psis.emplace_back("fermi", m.fermi_state());
  if (which == "all" || which == "trial") psis.emplace_back("trial", trial_state(m));
  if (which == "all" || which == "ground") psis.emplace_back("ground", tr.ground_vector);
  Json states = Json::array();
  for (const auto& [name, psi] : psis) {
    const AuditReport a = energy_audit(m, psi, fr.setup.audit_tol);
    states.push_back({{"state", name},
                      {"H", a.H_psi},
                      {"E_F", a.E_F},
                      {"V1mphi_F_matrix", a.V1mphi_F_matrix},
                      {"V1mphi_F_kernel", a.V1mphi_F_kernel},
                      {"xi1_H0_Q4", a.xi1_H0_Q4},
                      {"E_V", a.E_V},
                      {"E_Q2", a.E_Q2},
                      {"E_scat", a.E_scat},
                      {"sum", a.sum},
                      {"closure_defect", a.closure_defect},
                      {"relative_defect", a.relative_defect},
                      {"quadrature_order", a.quadrature_order},
                      {"excess_per_N_a^d_kF^(d+2)", a.excess_in_natural_units}});
    out.report.check("closure " + name, a.relative_defect <= 1e-9, a.relative_defect, 1e-9);
    const double kr = std::abs(a.V1mphi_F_matrix - a.V1mphi_F_kernel) / std::max(std::abs(a.V1mphi_F_kernel), 1e-300);
    if (name == "fermi") out.report.check("matrix vs kernel <dGamma(V(1-phi))>_F", kr <= 1e-8, kr, 1e-8);
    if (name == "trial") out.report.check("<H0+Q4>_xi1 = 0 for trial", std::abs(a.xi1_H0_Q4) <= 1e-12, a.xi1_H0_Q4, 1e-12);
    out.lines.push_back(name + ": <H> = " + fixed(a.H_psi, 14) + ", sum = " + fixed(a.sum, 14) + ", rel defect " +
                        fixed(a.relative_defect, 3));
  }
  out.report.payload["model"] = model_json(m);
  out.report.payload["states"] = states;
  out.report.payload["trial"] = {{"E_exact", tr.E_exact},
                                 {"H_trial", tr.H_trial},
                                 {"H_fermi", tr.H_fermi},
                                 {"leading", tr.leading},
                                 {"exact_below_trial", tr.exact_below_trial},
                                 {"trial_below_fermi", tr.trial_below_fermi}};
  out.report.check("E_exact <= <H>_trial", tr.exact_below_trial, tr.E_exact, tr.H_trial);
  if (!tr.trial_below_fermi) out.report.warnings.push_back("<H>_trial exceeds <H>_F (observation only)");
  return out;
}

CommandOutput cmd_verify_all(const RunConfig& cfg) {
  CommandOutput out;
  const auto results = run_acceptance(cfg, true);
  Json arr = Json::array();
  for (const auto& c : results) {
    arr.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"payload", c.payload}});
    out.report.check("C" + std::to_string(c.id) + " " + c.title, c.passed, c.passed ? 1.0 : 0.0, 1.0, c.summary);
    out.lines.push_back(format_line(c));
  }
  out.report.payload["criteria"] = arr;
  return out;
}

CommandOutput cmd_sweep(const RunConfig& cfg) {
  CommandOutput out;
  const std::string param = cfg.require_string("sweep.parameter");
  const std::vector<double> grid = cfg.require_list("sweep.grid");
  Json rows = Json::array();
  if (param == "akf") {
    const RadialPotential V = potential_from(cfg);
    const ScatteringSolution sol = solve_scattering(V, cfg.get_double("scattering.tol", 1e-10));
    const double kfl = cfg.get_double("interaction.kfL", 40.0);
    const int d = V.dim();
    const EnvelopeConstants k = constants_from(cfg);
    std::vector<std::string> header{"ak_F", "kFL"};
    const EnergyBreakdown probe = energy_expansion(d, sol.a, 1.0 / sol.a, 1000);
    for (const auto& t : probe.terms) header.push_back(t.label);
    for (const char* h : {"total", "lower", "upper", "lattice_ratio", "continuum_ratio"}) header.emplace_back(h);
    CsvTable csv(header);
    std::vector<ScalingSample> dev;
    for (double akf : grid) {
      const InteractionRatio ir = interaction_ratio(sol, akf, kfl);
      const EnergyBreakdown b =
          energy_expansion(d, sol.a, ir.k_F, ir.N, std::nullopt, d == 1 ? std::nullopt : std::optional(k));
      std::vector<double> row{akf, kfl};
      for (const auto& t : b.terms) row.push_back(t.value);
      row.push_back(b.total);
      row.push_back(b.bracket ? b.bracket->lower : NAN);
      row.push_back(b.bracket ? b.bracket->upper : NAN);
      row.push_back(ir.ratio);
      row.push_back(ir.continuum_ratio);
      csv.add_row(row);
      rows.push_back({{"akf", akf}, {"N", ir.N}, {"lattice_ratio", ir.ratio}, {"continuum_ratio", ir.continuum_ratio},
                      {"total", b.total}});
      dev.push_back({akf, std::abs(ir.continuum_ratio - 1.0)});
    }
    out.files.emplace_back("sweep.csv", csv.str());
    if (dev.size() >= 4) {
      try {
        const auto table = scaling_table({{"|continuum_ratio - 1|", dev}});
        out.report.payload["scaling"] = {{"quantity", table[0].name},
                                         {"exponent", table[0].exponent},
                                         {"log_preferred", table[0].log_preferred},
                                         {"residual", table[0].residual}};
      } catch (const Error& e) {
        out.report.warnings.push_back(std::string("scaling fit skipped: ") + e.what());
      }
    }
  } else if (param == "kfL") {
    const int d = cfg.get_int("torus.dim", 3);
    CsvTable csv({"kFL", "N", "E_F", "delta1", "delta2"});
    for (double kfl : grid) {
      const FermiBall b = fermi_ball({d, 1.0}, kfl);
      const DensityRelation rel = kf_density_relation(b);
      csv.add_row(std::vector<double>{kfl, static_cast<double>(b.N), b.E_F, rel.delta1, rel.delta2});
      rows.push_back({{"kFL", kfl}, {"N", b.N}, {"delta1", rel.delta1}, {"delta2", rel.delta2}});
    }
    out.files.emplace_back("sweep.csv", csv.str());
  } else if (param == "v0") {
    const int d = cfg.require_int("potential.dim");
    const double r0 = cfg.require_double("potential.r0");
    CsvTable csv({"V0", "a", "a_integral", "a_oracle", "ode_residual"});
    for (double v0 : grid) {
      const ScatteringSolution sol = solve_scattering(RadialPotential::soft_sphere(d, v0, r0));
      const double at = d == 3 ? scattering_length_integral(sol, sol.potential) : NAN;
      const double o = oracle::soft_sphere_a(d, v0, r0);
      csv.add_row(std::vector<double>{v0, sol.a, at, o, sol.ode_residual});
      rows.push_back({{"V0", v0}, {"a", sol.a}, {"a_oracle", o}});
    }
    out.files.emplace_back("sweep.csv", csv.str());
  } else {
    throw Error(ErrorCode::ConfigError, kModule, "key 'sweep.parameter': expected akf, kfL or v0, got '" + param + "'");
  }
  out.report.payload["parameter"] = param;
  out.report.payload["rows"] = rows;
  out.lines.push_back(std::to_string(grid.size()) + " sweep points over " + param);
  return out;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"scatlen", "fermiball", "bracket-n",  "pair-density",
                                              "interaction-ff", "energy", "fock-verify", "ed",
                                              "audit", "verify-all", "sweep"};
  return names;
}

CommandOutput run_command(const std::string& subcommand, const RunConfig& cfg) {
  cfg.validate();
  CommandOutput out;
  if (subcommand == "scatlen") out = cmd_scatlen(cfg);
  else if (subcommand == "fermiball") out = cmd_fermiball(cfg);
  else if (subcommand == "bracket-n") out = cmd_bracket(cfg);
  else if (subcommand == "pair-density") out = cmd_pair_density(cfg);
  else if (subcommand == "interaction-ff") out = cmd_interaction(cfg);
  else if (subcommand == "energy") out = cmd_energy(cfg);
  else if (subcommand == "fock-verify") out = cmd_fock_verify(cfg);
  else if (subcommand == "ed") out = cmd_ed(cfg);
  else if (subcommand == "audit") out = cmd_audit(cfg);
  else if (subcommand == "verify-all") out = cmd_verify_all(cfg);
  else if (subcommand == "sweep") out = cmd_sweep(cfg);
  else throw Error(ErrorCode::ConfigError, kModule, "unknown subcommand '" + subcommand + "'");
  out.report.subcommand = subcommand;
  return out;
}

int execute(const std::string& subcommand, const RunConfig& cfg, const RunOptions& opts, std::ostream& out,
            std::ostream& err) {
  CommandOutput result;
  int code = kExitOk;
  try {
    result = run_command(subcommand, cfg);
    code = result.report.all_passed() ? kExitOk : kExitCheck;
  } catch (const Error& e) {
    result.report.subcommand = subcommand;
    result.report.error = Json{{"code", std::string(e.name())}, {"module", e.module()}, {"message", e.what()}};
    code = e.code() == ErrorCode::ConfigError ? kExitConfig : kExitNumerical;
    err << e.what() << "\n";
    if (code == kExitConfig) return code;
  }
  const std::string format = cfg.get_string("output.format", "json");
  const std::filesystem::path dir = output_directory(cfg, opts.output_dir);
  write_text(dir / (subcommand + ".json"), envelope_bytes(result.report, cfg, utc_timestamp()));
  write_text(dir / (subcommand + ".payload.json"), payload_bytes(result.report));
  if (format == "csv" || format == "json")
    for (const auto& [name, text] : result.files) write_text(dir / name, text);
  if (!opts.quiet) {
    for (const auto& l : result.lines) out << l << "\n";
    for (const auto& w : result.report.warnings) out << "warning: " << w << "\n";
    for (const auto& c : result.report.checks)
      if (!c.passed && subcommand != "verify-all" && subcommand != "fock-verify")
        out << "check failed: " << c.name << " (" << format_double(c.value) << ")\n";
    out << subcommand << ": " << (code == kExitOk ? "ok" : code == kExitCheck ? "checks failed" : "error") << " -> "
        << (dir / (subcommand + ".json")).string() << "\n";
  }
  return code;
}

}  // namespace pwave
