#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "pwave/errors.hpp"
#include "pwave/fock_model.hpp"
#include "pwave/quadrature.hpp"

namespace pwave {
namespace {

constexpr const char* kModule = "fock";
constexpr int kMaxTaylorTerms = 200;

// Flip the global sign so the largest component is positive.
void fix_sign(Vector& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0.0) v = -v;
}

double residual_of(const SparseMatrix& H, const Vector& v, double e) { return (H * v - e * v).norm(); }

double residual_tolerance(double e) { return 1e-9 * (e != 0.0 ? std::abs(e) : 1.0); }

// ⟨ξ|[A, B]|ξ⟩ for symmetric A and antisymmetric B, both real.
double commutator_expectation(const SparseMatrix& A, const Vector& Bxi, const Vector& xi) {
  return 2.0 * (A * xi).dot(Bxi);
}

}  // namespace

Vector apply_exp(const SparseMatrix& B, double t, const Vector& v) {
  if (t == 0.0 || B.nonZeros() == 0) return v;
  const double scale = std::abs(t) * norm1(B);
  const int steps = std::max(1, static_cast<int>(std::ceil(scale)));
  const double h = t / steps;
  Vector out = v;
  for (int s = 0; s < steps; ++s) {
    Vector term = out;
    Vector sum = out;
    double previous = term.norm();
    bool done = false;
    for (int k = 1; k <= kMaxTaylorTerms; ++k) {
      term = (h / k) * (B * term);
      sum += term;
      const double tn = term.norm();
      if (tn <= 1e-17 * sum.norm() || tn == 0.0) {
        done = true;
        break;
      }
      if (k > 8 && tn > previous) break;
      previous = tn;
    }
    if (!done) throw Error(ErrorCode::ExpDivergence, kModule, "Taylor series of exp(tB) did not settle");
    out = std::move(sum);
  }
  return out;
}

Vector evolve_xi(const FockModel& model, const Vector& psi, double lambda) {
  if (!model.R) throw Error(ErrorCode::SectorMissing, kModule, "particle-hole map unavailable on this basis");
  const Vector start = model.R->transpose() * psi;
  return apply_exp(model.B, -lambda, start);
}

GroundState ground_state(const SparseMatrix& H, std::size_t dense_threshold) {
  const auto n = static_cast<std::size_t>(H.rows());
  if (n == 0) throw Error(ErrorCode::InvalidArgument, kModule, "empty Hamiltonian");
  if (n > dense_threshold) return lanczos_ground_state(H);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, kModule, "dense eigensolver failed");
  GroundState gs;
  gs.energy = es.eigenvalues()[0];
  gs.vector = es.eigenvectors().col(0);
  fix_sign(gs.vector);
  gs.residual = residual_of(H, gs.vector, gs.energy);
  gs.method = "dense";
  gs.iterations = 1;
  return gs;
}

GroundState lanczos_ground_state(const SparseMatrix& H, std::size_t krylov, std::size_t max_restarts) {
  const auto n = H.rows();
  const auto m = static_cast<Eigen::Index>(std::min<std::size_t>(krylov, static_cast<std::size_t>(n)));
  Vector start(n);
  for (Eigen::Index i = 0; i < n; ++i) start[i] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
  start.normalize();

  GroundState gs;
  gs.method = "lanczos";
  for (std::size_t restart = 0; restart <= max_restarts; ++restart) {
    Eigen::MatrixXd V(n, m);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
    V.col(0) = start;
    Eigen::Index used = m;
    for (Eigen::Index j = 0; j < m; ++j) {
      Vector w = H * V.col(j);
      alpha[j] = V.col(j).dot(w);
      // full reorthogonalization, twice
      for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
      if (j + 1 == m) break;
      beta[j] = w.norm();
      if (beta[j] < 1e-13 * std::max(1.0, std::abs(alpha[j]))) {
        used = j + 1;
        break;
      }
      V.col(j + 1) = w / beta[j];
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(used, used);
    for (Eigen::Index j = 0; j < used; ++j) {
      T(j, j) = alpha[j];
      if (j + 1 < used) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double theta = es.eigenvalues()[0];
    Vector x = V.leftCols(used) * es.eigenvectors().col(0);
    x.normalize();
    gs.iterations += static_cast<std::size_t>(used);
    gs.energy = x.dot(H * x);
    gs.residual = residual_of(H, x, gs.energy);
    gs.vector = x;
    (void)theta;
    if (gs.residual <= residual_tolerance(gs.energy)) {
      fix_sign(gs.vector);
      return gs;
    }
    start = x;
  }
  throw Error(ErrorCode::NoConvergence, kModule,
              "Lanczos residual " + std::to_string(gs.residual) + " after " + std::to_string(max_restarts) +
                  " restarts");
}

Vector trial_state(const FockModel& model) {
  if (!model.R) throw Error(ErrorCode::SectorMissing, kModule, "particle-hole map unavailable on this basis");
  return *model.R * apply_exp(model.B, 1.0, model.vacuum());
}

AuditReport energy_audit(const FockModel& model, const Vector& psi, double rel_tol) {
  if (!model.R) throw Error(ErrorCode::SectorMissing, kModule, "particle-hole map unavailable on this basis");
  AuditReport rep;
  const Vector F = model.fermi_state();
  rep.H_psi = expectation(model.hamiltonian, psi);
  rep.E_F = model.E_F;
  rep.V_F = expectation(model.interaction, F);
  rep.Vphi_F = expectation(model.dGamma_Vphi, F);
  rep.V1mphi_F_matrix = expectation(model.dGamma_V1mphi, F);
  rep.V1mphi_F_kernel = model.V1mphi_F_kernel;

  const Vector xi0 = model.R->transpose() * psi;
  const Vector xi1 = apply_exp(model.B, -1.0, xi0);
  const SparseMatrix H0Q4 = model.H0 + model.Q4;
  rep.xi1_H0_Q4 = expectation(H0Q4, xi1);
  rep.E_V = expectation(model.interaction, psi) - rep.V_F - expectation(SparseMatrix(model.Q2 + model.Q4), xi0);

  const double c = rep.Vphi_F;
  // Returns (E_Q2, E_scat) from an order-n Gauss–Legendre rule on [0, 1].
  const auto integrate_flow = [&](int order) {
    const auto rule = quad::mapped_rule(order, 0.0, 1.0);
    std::vector<std::size_t> idx(rule.nodes.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
    double eq2 = 0.0;
    double escat = 0.0;
    double lambda = 0.0;
    Vector xi = xi0;
    for (std::size_t i : idx) {
      const double l = rule.nodes[i];
      xi = apply_exp(model.B, -(l - lambda), xi);
      lambda = l;
      const Vector Bxi = model.B * xi;
      const double q2b = commutator_expectation(model.Q2, Bxi, xi);
      const double hb = commutator_expectation(H0Q4, Bxi, xi);
      eq2 += rule.weights[i] * (1.0 - l) * (q2b + 2.0 * c);
      escat += rule.weights[i] * (hb + expectation(model.Q2, xi));
    }
    return std::pair{eq2, escat};
  };

  int order = 8;
  auto prev = integrate_flow(order);
  const double scale = std::max(std::abs(rep.H_psi), 1.0);
  for (;;) {
    const int next_order = 2 * order;
    const auto next = integrate_flow(next_order);
    const double change = std::abs(next.first - prev.first) + std::abs(next.second - prev.second);
    order = next_order;
    prev = next;
    rep.quadrature_change = change;
    if (change <= rel_tol * scale) break;
    if (order >= 128)
      throw Error(ErrorCode::QuadratureFailure, kModule,
                  "lambda quadrature change " + std::to_string(change) + " at order " + std::to_string(order));
  }
  rep.quadrature_order = order;
  rep.E_Q2 = prev.first;
  rep.E_scat = prev.second;
  rep.sum = rep.E_F + rep.V1mphi_F_matrix + rep.xi1_H0_Q4 + rep.E_V + rep.E_Q2 + rep.E_scat;
  rep.closure_defect = rep.H_psi - rep.sum;
  rep.relative_defect = std::abs(rep.closure_defect) / std::max(std::abs(rep.H_psi), 1e-300);

  const double a = model.scattering_length;
  const double kF = model.config.k_F;
  const int d = model.modes.spec().dim;
  if (a > 0.0)
    rep.excess_in_natural_units =
        (rep.H_psi - rep.E_F) / (static_cast<double>(model.N()) * std::pow(a, d) * std::pow(kF, d + 2));
  return rep;
}

TrialReport trial_vs_oracle(const FockModel& model) {
  TrialReport rep;
  const Basis sector = Basis::sector(model.modes, model.N(), std::nullopt, model.config.dimension_cap);
  const GroundState gs = ground_state(model.hamiltonian_on(sector));
  rep.E_exact = gs.energy;
  rep.ground_vector = model.embed(sector, gs.vector);
  const Vector F = model.fermi_state();
  rep.H_fermi = expectation(model.hamiltonian, F);
  rep.H_trial = expectation(model.hamiltonian, trial_state(model));
  rep.leading = model.E_F + expectation(model.dGamma_V1mphi, F);
  const double slack = 1e-12 * std::max(1.0, std::abs(rep.H_fermi));
  rep.exact_below_trial = rep.E_exact <= rep.H_trial + slack;
  rep.trial_below_fermi = rep.H_trial <= rep.H_fermi + slack;
  return rep;
}

}  // namespace pwave
