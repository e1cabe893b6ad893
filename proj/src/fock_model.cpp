#include "pwave/fock_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "pwave/errors.hpp"
#include "pwave/smoothstep.hpp"

namespace pwave {
namespace {

constexpr const char* kModule = "fock";

LatticeVector add(const LatticeVector& a, const LatticeVector& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
LatticeVector sub(const LatticeVector& a, const LatticeVector& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Ladder cre(std::size_t i) { return {true, static_cast<std::uint8_t>(i)}; }
Ladder ann(std::size_t i) { return {false, static_cast<std::uint8_t>(i)}; }

std::vector<double> unique_points(std::vector<double> bp) {
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

// Visits every ordered quadruple (k, k', q1, q2) of modes with q1 + q2 = k + k'.
template <class F>
void for_each_transfer(const ModeSet& modes, F&& f) {
  const std::size_t m = modes.size();
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t kp = 0; kp < m; ++kp)
      for (std::size_t q1 = 0; q1 < m; ++q1) {
        const auto q2 = modes.find(sub(add(modes[k], modes[kp]), modes[q1]));
        if (!q2) continue;
        f(k, kp, q1, *q2);
      }
}

SparseMatrix identity(std::size_t n) {
  SparseMatrix id(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  id.setIdentity();
  return id;
}

}  // namespace

FockModel build_model(const FockModelConfig& config, const RadialPotential& V, const CutoffScattering& cs) {
  const TorusSpec& spec = config.spec;
  spec.validate();
  if (V.dim() != spec.dim || cs.dim() != spec.dim)
    throw Error(ErrorCode::InvalidArgument, kModule, "potential, scattering function and torus dimensions differ");
  if (std::abs(cs.k_F() - config.k_F) > 1e-12 * config.k_F)
    throw Error(ErrorCode::InvalidArgument, kModule, "cutoff scattering function was built for a different k_F");
  if (2.0 / config.k_F > 0.5 * spec.L)
    throw Error(ErrorCode::InvalidArgument, kModule, "support of phi (2/k_F) must fit in half the box");

  ModeSet mode_set(spec, config.momentum_cutoff);
  Basis basis_set = config.sectors.empty() ? Basis::full(mode_set.size(), config.dimension_cap)
                                           : Basis::sectors(mode_set, config.sectors, config.dimension_cap);
  FockModel model(config, std::move(mode_set), fermi_ball(spec, config.k_F), std::move(basis_set));
  const ModeSet& modes = model.modes;
  const std::size_t m = modes.size();
  model.scattering_length = cs.a();
  model.E_F = model.ball.E_F;

  model.in_ball.assign(m, false);
  for (const auto& n : model.ball.momenta) {
    const auto idx = modes.find(n);
    if (!idx) throw Error(ErrorCode::InvalidArgument, kModule, "mode set must contain the Fermi ball");
    model.in_ball[*idx] = true;
    model.fermi_mask |= Bitmask{1} << *idx;
  }
  model.u_r.resize(m);
  for (std::size_t i = 0; i < m; ++i) model.u_r[i] = regulator_profile(modes.momentum(i) / config.k_F);
  if (config.momentum_cutoff < 3.0 * config.k_F)
    model.warnings.push_back("CutoffTooSmall: momentum cutoff below 3 k_F, regulator profile not fully resolved");

  // Fourier coefficients on every momentum transfer between modes.
  std::vector<double> bp_V{0.0};
  for (double k : V.kinks()) bp_V.push_back(k);
  bp_V = unique_points(bp_V);
  std::vector<double> bp_core = cs.base().core_nodes();
  bp_core.insert(bp_core.end(), bp_V.begin(), bp_V.end());
  bp_core = unique_points(bp_core);
  const std::vector<double> bp_phi = cs.breakpoints();
  const auto Vf = [&](double r) { return V.value(r, RadialPotential::Side::Left); };
  const auto phif = [&](double r) { return cs.phi(r); };
  const auto Vphif = [&](double r) { return V.value(r, RadialPotential::Side::Left) * cs.phi(r); };
  const double unit = spec.momentum_unit();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const int s = norm_sq(sub(modes[i], modes[j]));
      if (model.V_hat.count(s)) continue;
      const double p = unit * std::sqrt(static_cast<double>(s));
      model.V_hat[s] = V.is_zero() ? 0.0 : radial_fourier(spec.dim, Vf, p, bp_V);
      model.phi_hat[s] = cs.base().a_pow_d == 0.0 ? 0.0 : radial_fourier(spec.dim, phif, p, bp_phi);
      model.Vphi_hat[s] = (V.is_zero() || cs.base().a_pow_d == 0.0) ? 0.0 : radial_fourier(spec.dim, Vphif, p, bp_core);
    }

  if (!V.is_zero() && cs.base().a_pow_d != 0.0) {
    const KernelTable kt(model.ball);
    const auto W = [&](double r) { return V.value(r, RadialPotential::Side::Left) * cs.one_minus_phi(r); };
    model.V1mphi_F_kernel = free_state_expectation(kt, W, bp_core);
  } else if (!V.is_zero()) {
    const KernelTable kt(model.ball);
    model.V1mphi_F_kernel = free_state_expectation(kt, Vf, bp_V);
  }

  const double pref = 1.0 / (2.0 * model.volume());
  const auto transfer = [&](std::size_t from, std::size_t to) { return norm_sq(sub(modes[to], modes[from])); };

  std::vector<Term> vphi_terms;
  std::vector<Term> v1mphi_terms;
  std::vector<Term> q4_terms;
  std::vector<Term> q2_create;
  std::vector<Term> b_annihilate;
  for_each_transfer(modes, [&](std::size_t k, std::size_t kp, std::size_t q1, std::size_t q2) {
    if (k == kp || q1 == q2) return;
    const int s = transfer(k, q1);
    const std::vector<Ladder> ops{cre(q1), cre(q2), ann(kp), ann(k)};
    const double v = model.V_hat.at(s);
    const double vphi = model.Vphi_hat.at(s);
    model.interaction_terms.push_back({pref * v, ops});
    vphi_terms.push_back({pref * vphi, ops});
    v1mphi_terms.push_back({pref * (v - vphi), ops});
    const bool k_in = model.in_ball[k] && model.in_ball[kp];
    const bool q_out = !model.in_ball[q1] && !model.in_ball[q2];
    if (q_out && !model.in_ball[k] && !model.in_ball[kp]) q4_terms.push_back({pref * v, ops});
    if (k_in && q_out) q2_create.push_back({pref * v, {cre(q1), cre(q2), cre(kp), cre(k)}});
    if (model.in_ball[k] && model.in_ball[kp]) {
      const double c = pref * model.phi_hat.at(s) * model.u_r[q1] * model.u_r[q2];
      if (c != 0.0) b_annihilate.push_back({c, {ann(q1), ann(q2), ann(kp), ann(k)}});
    }
  });

  // Weight of B terms lost to the mode cutoff, over a box twice the mode radius.
  {
    const int reach = 2 * static_cast<int>(std::ceil(config.momentum_cutoff / unit)) + 1;
    double kept = 0.0;
    double lost = 0.0;
    const int r1 = spec.dim >= 2 ? reach : 0;
    const int r2 = spec.dim >= 3 ? reach : 0;
    for (const auto& k : model.ball.momenta)
      for (const auto& kp : model.ball.momenta) {
        if (k == kp) continue;
        LatticeVector q1{0, 0, 0};
        for (q1[0] = -reach; q1[0] <= reach; ++q1[0])
          for (q1[1] = -r1; q1[1] <= r1; ++q1[1])
            for (q1[2] = -r2; q1[2] <= r2; ++q1[2]) {
              const LatticeVector q2 = sub(add(k, kp), q1);
              if (q1 == q2) continue;
              const double u1 = regulator_profile(unit * std::sqrt(static_cast<double>(norm_sq(q1))) / config.k_F);
              const double u2 = regulator_profile(unit * std::sqrt(static_cast<double>(norm_sq(q2))) / config.k_F);
              if (u1 == 0.0 || u2 == 0.0) continue;
              const int s = norm_sq(sub(q1, k));
              double ph;
              if (auto it = model.phi_hat.find(s); it != model.phi_hat.end()) {
                ph = it->second;
              } else {
                ph = cs.base().a_pow_d == 0.0
                         ? 0.0
                         : radial_fourier(spec.dim, phif, unit * std::sqrt(static_cast<double>(s)), bp_phi);
              }
              const double w = ph * u1 * u2 * ph * u1 * u2;
              if (modes.find(q1) && modes.find(q2)) kept += w;
              else lost += w;
            }
      }
    model.dropped_B_fraction = (kept + lost) > 0.0 ? lost / (kept + lost) : 0.0;
  }

  const Basis& basis = model.basis;
  std::vector<double> kin(m);
  std::vector<double> h0(m);
  std::vector<double> ones(m, 1.0);
  std::vector<double> high(m, 0.0);
  std::vector<double> alpha(m, 0.0);
  const double a = model.scattering_length;
  const double alpha_threshold = a > 0.0 ? config.k_F * std::pow(a * config.k_F, -config.alpha) : INFINITY;
  for (std::size_t i = 0; i < m; ++i) {
    const double k2 = modes.momentum_sq(i);
    kin[i] = k2;
    h0[i] = std::abs(k2 - config.k_F * config.k_F);
    if (modes.momentum(i) > 2.0 * config.k_F) high[i] = 1.0;
    if (modes.momentum(i) > alpha_threshold) alpha[i] = 1.0;
  }
  model.kinetic = number_weighted(basis, kin);
  model.H0 = number_weighted(basis, h0);
  model.number = number_weighted(basis, ones);
  model.number_high = number_weighted(basis, high);
  model.number_alpha = number_weighted(basis, alpha);
  for (int c = 0; c < 3; ++c) {
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = unit * modes[i][c];
    model.total_momentum[c] = number_weighted(basis, w);
  }

  model.interaction = build_operator(basis, model.interaction_terms).matrix;
  model.hamiltonian = model.kinetic + model.interaction;
  model.dGamma_Vphi = build_operator(basis, vphi_terms).matrix;
  model.dGamma_V1mphi = build_operator(basis, v1mphi_terms).matrix;
  model.Q4 = build_operator(basis, q4_terms).matrix;
  const SparseMatrix q2c = build_operator(basis, q2_create).matrix;
  model.Q2 = q2c + SparseMatrix(q2c.transpose());
  model.B_annihilating = build_operator(basis, b_annihilate).matrix;
  model.B = model.B_annihilating - SparseMatrix(model.B_annihilating.transpose());

  // R |s> = Π_{i in s} (a_i if i in B_F else a_i^*) ψ_F, with ψ_F = +|B_F>.
  bool closed = true;
  for (Bitmask s : basis.states())
    if (!basis.contains(s ^ model.fermi_mask)) {
      closed = false;
      break;
    }
  if (closed) {
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t col = 0; col < basis.dim(); ++col) {
      const Bitmask s = basis.state(col);
      std::vector<Ladder> ops;
      for (std::size_t i = 0; i < m; ++i)
        if (s >> i & 1) ops.push_back(model.in_ball[i] ? ann(i) : cre(i));
      Bitmask out = model.fermi_mask;
      double sign = 1.0;
      if (!apply_ops(ops, out, sign) || out != (s ^ model.fermi_mask))
        throw Error(ErrorCode::InvalidArgument, kModule, "particle-hole map is inconsistent");
      trip.emplace_back(static_cast<int>(basis.index(out)), static_cast<int>(col), sign);
    }
    SparseMatrix R(static_cast<Eigen::Index>(basis.dim()), static_cast<Eigen::Index>(basis.dim()));
    R.setFromTriplets(trip.begin(), trip.end());
    model.R = std::move(R);
  }
  return model;
}

SparseMatrix FockModel::hamiltonian_on(const Basis& other) const {
  std::vector<double> kin(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) kin[i] = modes.momentum_sq(i);
  return number_weighted(other, kin) + build_operator(other, interaction_terms).matrix;
}

Vector FockModel::vacuum() const {
  const std::size_t idx = basis.index(0);
  if (idx == Basis::npos) throw Error(ErrorCode::SectorMissing, kModule, "basis does not contain the vacuum");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  v[static_cast<Eigen::Index>(idx)] = 1.0;
  return v;
}

Vector FockModel::fermi_state() const {
  const std::size_t idx = basis.index(fermi_mask);
  if (idx == Basis::npos) throw Error(ErrorCode::SectorMissing, kModule, "basis does not contain the Fermi sea");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  v[static_cast<Eigen::Index>(idx)] = 1.0;
  return v;
}

Vector FockModel::embed(const Basis& sector, const Vector& v) const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < sector.dim(); ++i) {
    const std::size_t idx = basis.index(sector.state(i));
    if (idx == Basis::npos) throw Error(ErrorCode::SectorMissing, kModule, "state outside the model basis");
    out[static_cast<Eigen::Index>(idx)] = v[static_cast<Eigen::Index>(i)];
  }
  return out;
}

SparseMatrix particle_hole_conjugate(const FockModel& model, const SparseMatrix& A) {
  if (!model.R)
    throw Error(ErrorCode::SectorMissing, kModule, "basis is not closed under the particle-hole map");
  const SparseMatrix& R = *model.R;
  SparseMatrix AR = A * R;
  return SparseMatrix(R.transpose()) * AR;
}

double wick_vacuum_commutator(const FockModel& model) {
  const ModeSet& modes = model.modes;
  const std::size_t m = modes.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (!model.in_ball[k]) continue;
    for (std::size_t kp = 0; kp < m; ++kp) {
      if (!model.in_ball[kp]) continue;
      for (std::size_t q1 = 0; q1 < m; ++q1) {
        if (model.in_ball[q1]) continue;
        const auto q2 = modes.find(sub(add(modes[k], modes[kp]), modes[q1]));
        if (!q2 || model.in_ball[*q2]) continue;
        const double v = model.V_hat.at(norm_sq(sub(modes[q1], modes[k])));
        const double direct = model.phi_hat.at(norm_sq(sub(modes[q1], modes[k])));
        const double exchange = model.phi_hat.at(norm_sq(sub(modes[q1], modes[kp])));
        sum += v * model.u_r[q1] * model.u_r[*q2] * (direct - exchange);
      }
    }
  }
  const double vol = model.volume();
  return -sum / (vol * vol);
}

CommutatorReport commutator_suite(const FockModel& model) {
  CommutatorReport rep;
  const Basis& basis = model.basis;
  const std::size_t m = model.modes.size();

  // CAR on columns whose neighbours in particle number are all inside the basis.
  int top = 0;
  for (Bitmask s : basis.states()) top = std::max(top, std::popcount(s));
  std::vector<bool> column_ok(basis.dim());
  for (std::size_t i = 0; i < basis.dim(); ++i)
    column_ok[i] = basis.is_full() || std::popcount(basis.state(i)) < top;
  const auto column_max = [&](const SparseMatrix& M) {
    double best = 0.0;
    for (int r = 0; r < M.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(M, r); it; ++it)
        if (column_ok[static_cast<std::size_t>(it.col())]) best = std::max(best, std::abs(it.value()));
    return best;
  };
  std::vector<SparseMatrix> lower(m);
  std::vector<SparseMatrix> ad(m);
  for (std::size_t i = 0; i < m; ++i) {
    lower[i] = ladder_matrix(basis, i, false);
    ad[i] = ladder_matrix(basis, i, true);
  }
  const SparseMatrix id = identity(basis.dim());
  for (std::size_t i = 0; i < m; ++i) {
    rep.nilpotency_defect = std::max(rep.nilpotency_defect, column_max(SparseMatrix(lower[i] * lower[i])));
    for (std::size_t j = 0; j < m; ++j) {
      SparseMatrix mixed = anticommutator(lower[i], ad[j]);
      if (i == j) mixed -= id;
      rep.car_defect = std::max(rep.car_defect, column_max(mixed));
      rep.car_defect = std::max(rep.car_defect, column_max(anticommutator(lower[i], lower[j])));
      ++rep.car_pairs;
    }
  }

  rep.B_anti_hermiticity = anti_hermiticity_defect(model.B);
  rep.H_hermiticity = hermiticity_defect(model.hamiltonian);
  rep.H_number_commutator = max_abs(commutator(model.hamiltonian, model.number));
  for (int c = 0; c < model.modes.spec().dim; ++c)
    rep.H_momentum_commutator =
        std::max(rep.H_momentum_commutator, max_abs(commutator(model.hamiltonian, model.total_momentum[c])));

  if (model.R) {
    const SparseMatrix& R = *model.R;
    rep.R_unitarity = max_abs(SparseMatrix(SparseMatrix(SparseMatrix(R.transpose()) * R) - id));
    const Vector rv = R * model.vacuum();
    rep.R_maps_vacuum_to_fermi_sea = (rv - model.fermi_state()).lpNorm<Eigen::Infinity>() == 0.0;
    // R^* dΓ(-Δ) R - E_F - H0 on states with as many particles as holes
    SparseMatrix defect = particle_hole_conjugate(model, model.kinetic) - model.H0 - model.E_F * id;
    const Bitmask F = model.fermi_mask;
    for (int r = 0; r < defect.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(defect, r); it; ++it) {
        const Bitmask s = basis.state(static_cast<std::size_t>(it.col()));
        if (std::popcount(s & F) == std::popcount(s & ~F))
          rep.kinetic_conjugation_defect = std::max(rep.kinetic_conjugation_defect, std::abs(it.value()));
      }
  }

  if (basis.contains(0)) {
    const Vector omega = model.vacuum();
    const SparseMatrix c = commutator(model.Q2, model.B);
    rep.wick_matrix = expectation(c, omega);
    rep.wick_lattice = wick_vacuum_commutator(model);
    const double scale = std::max(std::abs(rep.wick_lattice), 1e-300);
    rep.wick_relative_defect = std::abs(rep.wick_matrix - rep.wick_lattice) / scale;
    if (rep.wick_lattice == 0.0 && rep.wick_matrix == 0.0) rep.wick_relative_defect = 0.0;
  }
  if (basis.contains(model.fermi_mask)) rep.minus_two_Vphi_F = -2.0 * expectation(model.dGamma_Vphi, model.fermi_state());

  const SparseMatrix direct = -4.0 * (model.B_annihilating + SparseMatrix(model.B_annihilating.transpose()));
  rep.number_B_defect = max_abs(SparseMatrix(commutator(model.number, model.B) - direct));

  // Diagonal inequalities, mode by mode and then on every basis state.
  const double kF = model.config.k_F;
  const double a = model.scattering_length;
  const double shrink = a > 0.0 ? std::pow(a * kF, 2.0 * model.config.alpha) : 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double gap = std::abs(model.modes.momentum_sq(i) - kF * kF);
    const Bitmask bit = Bitmask{1} << i;
    const std::size_t idx = basis.index(bit);
    if (idx == Basis::npos) continue;
    const auto e = static_cast<Eigen::Index>(idx);
    if (model.number_high.coeff(e, e) > 0.0) rep.C_high = std::max(rep.C_high, kF * kF / gap);
    if (model.number_alpha.coeff(e, e) > 0.0) rep.C_alpha = std::max(rep.C_alpha, kF * kF / (shrink * gap));
  }
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    const double h0 = model.H0.coeff(e, e);
    if (model.number_high.coeff(e, e) > rep.C_high * h0 / (kF * kF) * (1.0 + 1e-12) + 1e-12)
      rep.high_inequality_holds = false;
    if (model.number_alpha.coeff(e, e) > rep.C_alpha * shrink * h0 / (kF * kF) * (1.0 + 1e-12) + 1e-12)
      rep.alpha_inequality_holds = false;
  }
  return rep;
}

}  // namespace pwave
