#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "pwave/errors.hpp"
#include "pwave/fock_model.hpp"
#include "pwave/oracles.hpp"

using namespace pwave;

namespace {

struct Built {
  ScatteringSolution sol;
  CutoffScattering cs;
  FockModel model;
};

Built make(double v0, FockModelConfig cfg = {}) {
  auto V = RadialPotential::soft_sphere(cfg.spec.dim, v0, 0.5);
  auto sol = solve_scattering(V);
  CutoffScattering cs(sol, cfg.k_F);
  auto model = build_model(cfg, V, cs);
  return {std::move(sol), std::move(cs), std::move(model)};
}

const Built& shared_model() {
  static const Built b = make(20.0);
  return b;
}

Eigen::MatrixXd jordan_wigner(std::size_t modes, std::size_t i, bool creation) {
  Eigen::Matrix2d Z, low, id;
  Z << 1, 0, 0, -1;
  id.setIdentity();
  low << 0, 1, 0, 0;  // |0><1| in the (|0>, |1>) basis: annihilation
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  // bit j is the j-th tensor factor counted from the least significant end
  for (std::size_t j = 0; j < modes; ++j) {
    const Eigen::Matrix2d f = j < i ? Z : (j == i ? (creation ? Eigen::Matrix2d(low.transpose()) : low) : id);
    Eigen::MatrixXd next(out.rows() * 2, out.cols() * 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) next.block(r * out.rows(), c * out.cols(), out.rows(), out.cols()) = f(r, c) * out;
    out = next;
  }
  return out;
}

double flow_derivative_defect(const FockModel& m, const SparseMatrix& A, const Vector& psi) {
  const double h = 1e-4, lambda = 0.5;
  const double fd = (expectation(A, evolve_xi(m, psi, lambda + h)) - expectation(A, evolve_xi(m, psi, lambda - h))) /
                    (2 * h);
  const Vector xi = evolve_xi(m, psi, lambda);
  const double exact = -expectation(SparseMatrix(commutator(A, m.B)), xi);
  return std::abs(fd - exact) / std::max(std::abs(exact), 1e-300);
}

}  // namespace

TEST(FockSpace, LaddersMatchJordanWigner) {
  const Basis full = Basis::full(5);
  for (std::size_t i = 0; i < 5; ++i)
    for (bool cr : {false, true}) {
      const Eigen::MatrixXd m = Eigen::MatrixXd(SparseMatrix(ladder_matrix(full, i, cr)));
      EXPECT_EQ((m - jordan_wigner(5, i, cr)).cwiseAbs().maxCoeff(), 0.0) << i << cr;
    }
}

TEST(FockSpace, OperatorOrderAndSign) {
  Bitmask s = 0;
  double sign = 1.0;
  ASSERT_TRUE(apply_ops({{true, 0}, {true, 2}}, s, sign));
  EXPECT_EQ(s, 0b101u);
  EXPECT_EQ(sign, 1.0);
  s = 0;
  sign = 1.0;
  ASSERT_TRUE(apply_ops({{true, 2}, {true, 0}}, s, sign));
  EXPECT_EQ(sign, -1.0);
  EXPECT_FALSE(apply_ops({{true, 0}, {true, 0}}, s = 0, sign = 1.0));
}

TEST(FockModel, ZeroPotentialIsDiagonalKinetic) {
  const Built b = make(0.0);
  const auto& m = b.model;
  EXPECT_EQ(max_abs(SparseMatrix(m.interaction)), 0.0);
  EXPECT_EQ(max_abs(SparseMatrix(m.B)), 0.0);
  for (std::size_t i = 0; i < m.basis.dim(); i += 97) {
    double e = 0.0;
    for (std::size_t j = 0; j < m.modes.size(); ++j)
      if (m.basis.state(i) >> j & 1u) e += m.modes.momentum_sq(j);
    EXPECT_DOUBLE_EQ(m.hamiltonian.coeff(i, i), e);
  }
  const auto tr = trial_vs_oracle(m);
  EXPECT_NEAR(tr.E_exact, m.E_F, 1e-12);
  EXPECT_NEAR(tr.H_trial, m.E_F, 1e-12);
  EXPECT_NEAR(tr.H_fermi, m.E_F, 1e-12);
  EXPECT_NEAR(tr.leading, m.E_F, 1e-12);
}

TEST(FockModel, RegulatorProfile) {
  const auto& m = shared_model().model;
  for (std::size_t i = 0; i < m.modes.size(); ++i) {
    const double k = m.modes.momentum(i);
    if (k <= 2 * m.config.k_F) EXPECT_EQ(m.u_r[i], 0.0);
    if (k >= 3 * m.config.k_F) EXPECT_EQ(m.u_r[i], 1.0);
  }
}

TEST(FockModel, FermiExpectationMatchesMomentumSum) {
  const auto& m = shared_model().model;
  const double L = m.modes.spec().L;
  double sum = 0.0;
  for (const auto& n : m.ball.momenta)
    for (const auto& k : m.ball.momenta) {
      const double p = 2 * std::numbers::pi / L * std::abs(n[0] - k[0]);
      sum += oracle::soft_sphere_fourier(1, 20.0, 0.5, 0.0) - oracle::soft_sphere_fourier(1, 20.0, 0.5, p);
    }
  sum /= 2 * L;
  const double h = expectation(m.hamiltonian, m.fermi_state());
  EXPECT_NEAR(h, m.E_F + sum, 1e-10 * h);
}

TEST(FockModel, IdentitySuite) {
  const auto& m = shared_model().model;
  const auto c = commutator_suite(m);
  EXPECT_LE(c.car_defect, 1e-13);
  EXPECT_LE(c.nilpotency_defect, 1e-13);
  EXPECT_LE(c.B_anti_hermiticity, 1e-13);
  EXPECT_LE(c.H_hermiticity, 1e-13);
  EXPECT_LE(c.H_number_commutator, 1e-13);
  EXPECT_LE(c.H_momentum_commutator, 1e-13);
  EXPECT_LE(c.R_unitarity, 1e-13);
  EXPECT_TRUE(c.R_maps_vacuum_to_fermi_sea);
  EXPECT_LE(c.kinetic_conjugation_defect, 1e-12);
  EXPECT_LE(c.wick_relative_defect, 1e-10);
  EXPECT_NE(c.wick_lattice, 0.0);
  EXPECT_LE(c.number_B_defect, 1e-13);
  EXPECT_TRUE(c.high_inequality_holds);
  EXPECT_LE(c.C_high, 1.0 / 3.0 + 1e-12);
  EXPECT_TRUE(c.alpha_inequality_holds);
}

TEST(FockModel, ParticleHoleConjugationOfKinetic) {
  const auto& m = shared_model().model;
  const SparseMatrix conj = particle_hole_conjugate(m, m.kinetic);
  const Vector F = m.fermi_state();
  EXPECT_NEAR(expectation(conj, m.vacuum()), m.E_F, 1e-12);
  EXPECT_NEAR(expectation(m.H0, m.vacuum()), 0.0, 1e-15);
  EXPECT_NEAR((*m.R * m.vacuum() - F).norm(), 0.0, 0.0);
}

TEST(FockFlow, EvolutionBasics) {
  const auto& m = shared_model().model;
  const Vector F = m.fermi_state();
  EXPECT_EQ((evolve_xi(m, F, 0.0) - m.R->transpose() * F).norm(), 0.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Vector v(m.basis.dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = g(rng);
  v.normalize();
  for (double lambda : {0.25, 0.5, 1.0}) EXPECT_NEAR(apply_exp(m.B, -lambda, v).norm(), 1.0, 1e-11);
  // e^{B} e^{-B} = 1
  EXPECT_LT((apply_exp(m.B, 1.0, apply_exp(m.B, -1.0, v)) - v).norm(), 1e-12);
}

TEST(FockFlow, DerivativeMatchesCommutator) {
  const auto& m = shared_model().model;
  const Vector psi = trial_vs_oracle(m).ground_vector;
  EXPECT_LT(flow_derivative_defect(m, m.number, psi), 1e-6);
  EXPECT_LT(flow_derivative_defect(m, m.H0, psi), 1e-6);
  EXPECT_LT(flow_derivative_defect(m, m.Q4, psi), 1e-6);
}

TEST(FockFlow, GroundStateFreeSectors) {
  const auto& m = make(0.0).model;
  for (std::size_t n : {1u, 2u, 4u}) {
    const Basis sector = Basis::sector(m.modes, n);
    const auto gs = ground_state(m.hamiltonian_on(sector));
    std::vector<double> k2;
    for (std::size_t i = 0; i < m.modes.size(); ++i) k2.push_back(m.modes.momentum_sq(i));
    std::sort(k2.begin(), k2.end());
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += k2[i];
    EXPECT_NEAR(gs.energy, e, 1e-12) << n;
  }
}

TEST(FockFlow, LanczosMatchesDense) {
  const int n = 600;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 10.0 * u(rng));
    for (int k = 0; k < 3; ++k) {
      const int j = static_cast<int>((i * 7919 + k * 104729) % n);
      if (j == i) continue;
      const double w = u(rng);
      t.emplace_back(i, j, w);
      t.emplace_back(j, i, w);
    }
  }
  SparseMatrix H(n, n);
  H.setFromTriplets(t.begin(), t.end());
  const auto dense = ground_state(H);
  const auto lz = lanczos_ground_state(H);
  EXPECT_EQ(dense.method, "dense");
  EXPECT_NEAR(lz.energy, dense.energy, 1e-9 * std::abs(dense.energy));
  EXPECT_LE(lz.residual, 1e-9 * std::abs(lz.energy));
  EXPECT_NEAR(std::abs(lz.vector.dot(dense.vector)), 1.0, 1e-8);
}

TEST(FockFlow, VariationalChain) {
  const auto& m = shared_model().model;
  const auto tr = trial_vs_oracle(m);
  EXPECT_LE(tr.E_exact, tr.H_trial);
  EXPECT_TRUE(tr.exact_below_trial);
  double prev = -1.0;
  for (double v0 : {0.0, 5.0, 20.0, 80.0}) {
    const double e = trial_vs_oracle(make(v0).model).E_exact;
    EXPECT_GE(e, prev - 1e-12);
    prev = e;
  }
}

TEST(FockFlow, AuditClosure) {
  const auto& m = shared_model().model;
  const auto fermi = energy_audit(m, m.fermi_state());
  EXPECT_LE(fermi.relative_defect, 1e-9);
  EXPECT_NEAR(fermi.V1mphi_F_matrix, fermi.V1mphi_F_kernel, 1e-8 * std::abs(fermi.V1mphi_F_kernel));
  const auto trial = energy_audit(m, trial_state(m));
  EXPECT_LE(trial.relative_defect, 1e-9);
  EXPECT_LE(std::abs(trial.xi1_H0_Q4), 1e-12);
  const auto ground = energy_audit(m, trial_vs_oracle(m).ground_vector);
  EXPECT_LE(ground.relative_defect, 1e-9);
}

TEST(FockFlow, AuditWithoutCorrelationReducesToFermi) {
  const auto b = make(0.0);
  const auto a = energy_audit(b.model, b.model.fermi_state());
  EXPECT_NEAR(a.H_psi, b.model.E_F, 1e-12);
  EXPECT_EQ(a.E_Q2, 0.0);
  EXPECT_EQ(a.E_scat, 0.0);
}

TEST(FockFlow, MissingSectorsRaise) {
  FockModelConfig cfg;
  cfg.sectors = {3};
  const auto b = make(20.0, cfg);
  EXPECT_FALSE(b.model.R.has_value());
  try {
    evolve_xi(b.model, b.model.fermi_state(), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SectorMissing);
  }
}
