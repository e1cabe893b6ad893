#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwave/fock_space.hpp"
#include "pwave/scattering.hpp"
#include "pwave/torus.hpp"

namespace pwave {

struct FockModelConfig {
  TorusSpec spec{1, 6.283185307179586};
  double k_F = 1.5;
  double momentum_cutoff = 6.0;
  /// Particle-number sectors kept; empty means the full Fock space.
  std::vector<std::size_t> sectors;
  /// Exponent in the high-momentum counter N_{>alpha} (modes with |k| > k_F (a k_F)^{-alpha}).
  double alpha = 0.25;
  std::size_t dimension_cap = Basis::kDefaultSectorCap;
};

/// Second-quantized operators on a truncated mode set. Operators named in the
/// particle-hole picture (H0, Q2, Q4, B) act on R^* of physical states; the
/// physical Hamiltonian is kinetic + interaction.
struct FockModel {
  FockModel(FockModelConfig cfg, ModeSet m, FermiBall b, Basis bs)
      : config(std::move(cfg)), modes(std::move(m)), ball(std::move(b)), basis(std::move(bs)) {}

  FockModelConfig config;
  ModeSet modes;
  FermiBall ball;
  Basis basis;
  std::vector<bool> in_ball;
  Bitmask fermi_mask = 0;
  double scattering_length = 0.0;

  /// Fourier coefficients keyed by |n|^2 of the momentum transfer.
  std::map<int, double> V_hat;
  std::map<int, double> phi_hat;
  std::map<int, double> Vphi_hat;
  std::vector<double> u_r;  // regulator profile per mode

  // physical picture
  SparseMatrix kinetic;      // dΓ(-Δ)
  SparseMatrix interaction;  // dΓ(V)
  SparseMatrix hamiltonian;  // kinetic + interaction
  SparseMatrix dGamma_Vphi;
  SparseMatrix dGamma_V1mphi;
  std::array<SparseMatrix, 3> total_momentum;

  // particle-hole picture
  SparseMatrix H0;
  SparseMatrix Q2;
  SparseMatrix Q4;
  SparseMatrix B;
  SparseMatrix B_annihilating;  // B = B_annihilating - B_annihilating^T
  SparseMatrix number;
  SparseMatrix number_high;   // modes with |k| > 2 k_F
  SparseMatrix number_alpha;  // modes with |k| > k_F (a k_F)^{-alpha}

  /// Particle-hole transformation as a signed permutation; empty if the basis
  /// is not closed under complementing the Fermi ball.
  std::optional<SparseMatrix> R;

  double E_F = 0.0;
  /// ⟨dΓ(V(1-φ))⟩_F from the real-space pair density of the free state.
  double V1mphi_F_kernel = 0.0;
  /// Squared weight of B terms whose outgoing momenta leave the mode set,
  /// relative to the total (retained plus dropped).
  double dropped_B_fraction = 0.0;
  std::vector<std::string> warnings;

  /// Number of modes in the Fermi ball.
  std::size_t N() const { return ball.N; }
  double volume() const { return modes.spec().volume(); }
  /// Builds dΓ(-Δ) + dΓ(V) on another basis (e.g. a single sector).
  SparseMatrix hamiltonian_on(const Basis& other) const;
  /// Vacuum and filled Fermi sea as basis vectors.
  Vector vacuum() const;
  Vector fermi_state() const;
  /// Embeds a vector given on `sector` into the model basis.
  Vector embed(const Basis& sector, const Vector& v) const;

  // term lists, kept so operators can be rebuilt on other bases
  std::vector<Term> interaction_terms;
};

FockModel build_model(const FockModelConfig& config, const RadialPotential& V, const CutoffScattering& cs);

/// R^* A R.
SparseMatrix particle_hole_conjugate(const FockModel& model, const SparseMatrix& A);

struct CommutatorReport {
  double car_defect = 0.0;
  double nilpotency_defect = 0.0;
  std::size_t car_pairs = 0;
  double B_anti_hermiticity = 0.0;
  double H_hermiticity = 0.0;
  double H_number_commutator = 0.0;
  double H_momentum_commutator = 0.0;
  double R_unitarity = 0.0;
  bool R_maps_vacuum_to_fermi_sea = false;
  double kinetic_conjugation_defect = 0.0;
  double wick_matrix = 0.0;
  double wick_lattice = 0.0;
  double wick_relative_defect = 0.0;
  double minus_two_Vphi_F = 0.0;
  double number_B_defect = 0.0;
  double C_high = 0.0;
  double C_alpha = 0.0;
  bool high_inequality_holds = true;
  bool alpha_inequality_holds = true;
};

CommutatorReport commutator_suite(const FockModel& model);

/// ⟨Ω|[Q2, B]|Ω⟩ from the fully contracted lattice sum.
double wick_vacuum_commutator(const FockModel& model);

/// e^{tB} v by Taylor series, split into substeps when |t| ||B||_1 > 1.
Vector apply_exp(const SparseMatrix& B, double t, const Vector& v);

/// ξ_λ = e^{-λB} R^* ψ.
Vector evolve_xi(const FockModel& model, const Vector& psi, double lambda);

struct GroundState {
  double energy = 0.0;
  Vector vector;
  double residual = 0.0;
  std::string method;
  std::size_t iterations = 0;
};

/// Lowest eigenpair of a symmetric matrix: dense below `dense_threshold`,
/// Lanczos with full reorthogonalization above.
GroundState ground_state(const SparseMatrix& H, std::size_t dense_threshold = 2000);
GroundState lanczos_ground_state(const SparseMatrix& H, std::size_t krylov = 120, std::size_t max_restarts = 50);

struct AuditReport {
  double H_psi = 0.0;
  double E_F = 0.0;
  double V1mphi_F_matrix = 0.0;
  double V1mphi_F_kernel = 0.0;
  double V_F = 0.0;
  double Vphi_F = 0.0;
  double xi1_H0_Q4 = 0.0;
  double E_V = 0.0;
  double E_Q2 = 0.0;
  double E_scat = 0.0;
  double sum = 0.0;
  double closure_defect = 0.0;
  double relative_defect = 0.0;
  int quadrature_order = 0;
  double quadrature_change = 0.0;
  /// (⟨H⟩ - E_F) / (N a^d k_F^{d+2})
  double excess_in_natural_units = 0.0;
};

/// Term-by-term energy decomposition for an N-particle state ψ (N = #B_F).
AuditReport energy_audit(const FockModel& model, const Vector& psi, double rel_tol = 1e-12);

struct TrialReport {
  double E_exact = 0.0;
  double H_fermi = 0.0;
  double H_trial = 0.0;
  double leading = 0.0;  // E_F + ⟨dΓ(V(1-φ))⟩_F
  bool exact_below_trial = false;
  bool trial_below_fermi = false;
  Vector ground_vector;  // in the model basis
};

TrialReport trial_vs_oracle(const FockModel& model);

/// R e^{B} Ω.
Vector trial_state(const FockModel& model);

}  // namespace pwave
