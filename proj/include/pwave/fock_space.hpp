#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pwave/torus.hpp"

namespace pwave {

using Bitmask = std::uint64_t;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

inline constexpr std::size_t kMaxModes = 62;

/// Lattice momenta with |n| <= n_cut in lexicographic order; bit i of a basis
/// state is the occupation of mode i.
class ModeSet {
 public:
  ModeSet(TorusSpec spec, double momentum_cutoff);

  const TorusSpec& spec() const { return spec_; }
  double cutoff() const { return cutoff_; }
  std::size_t size() const { return modes_.size(); }
  const LatticeVector& operator[](std::size_t i) const { return modes_[i]; }
  const std::vector<LatticeVector>& modes() const { return modes_; }

  /// Physical |k|^2 of mode i.
  double momentum_sq(std::size_t i) const;
  double momentum(std::size_t i) const;
  /// Index of n, if present.
  std::optional<std::size_t> find(const LatticeVector& n) const;

 private:
  TorusSpec spec_;
  double cutoff_;
  std::vector<LatticeVector> modes_;
  std::vector<int> lookup_;  // dense box index -> mode index or -1
  int box_ = 0;
};

/// Sorted set of occupation bitmasks.
class Basis {
 public:
  /// Every bitmask over `modes` modes.
  static Basis full(std::size_t modes, std::size_t cap = kDefaultSectorCap);
  /// Fixed particle number, optionally with fixed total momentum.
  static Basis sector(const ModeSet& modes, std::size_t particles, std::optional<LatticeVector> momentum = {},
                      std::size_t cap = kDefaultSectorCap);
  /// Union of several particle-number sectors.
  static Basis sectors(const ModeSet& modes, const std::vector<std::size_t>& particle_numbers,
                       std::size_t cap = kDefaultSectorCap);

  static constexpr std::size_t kDefaultSectorCap = 2'000'000;

  std::size_t dim() const { return states_.size(); }
  std::size_t modes() const { return modes_; }
  Bitmask state(std::size_t i) const { return states_[i]; }
  const std::vector<Bitmask>& states() const { return states_; }
  bool is_full() const { return full_; }
  /// Position of s, or npos.
  std::size_t index(Bitmask s) const;
  bool contains(Bitmask s) const { return index(s) != npos; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  Basis(std::size_t modes, std::vector<Bitmask> states, bool full);
  std::size_t modes_ = 0;
  std::vector<Bitmask> states_;
  bool full_ = false;
};

/// Single fermionic operator: a_i or a_i^*.
struct Ladder {
  bool creation = false;
  std::uint8_t mode = 0;
};

/// coefficient * op[0] op[1] ... op[n-1]  (the rightmost acts first).
struct Term {
  double coefficient = 0.0;
  std::vector<Ladder> ops;
};

/// Applies the product of ladder operators to a basis state. Returns false if
/// the result vanishes; otherwise updates `state` and multiplies `sign`.
bool apply_ops(const std::vector<Ladder>& ops, Bitmask& state, double& sign);

/// Hermitian conjugate of a term (reversed order, creation <-> annihilation).
Term adjoint(const Term& t);

/// Sparse matrix of Σ terms on a basis. Images that leave the basis are dropped
/// and counted in `dropped`.
struct OperatorBuild {
  SparseMatrix matrix;
  std::size_t dropped = 0;
};

OperatorBuild build_operator(const Basis& basis, const std::vector<Term>& terms);

/// Diagonal operator Σ_i w_i n_i.
SparseMatrix number_weighted(const Basis& basis, const std::vector<double>& weights);

/// Ladder operator a_i or a_i^* as a matrix on the basis.
SparseMatrix ladder_matrix(const Basis& basis, std::size_t mode, bool creation);

double max_abs(const SparseMatrix& m);
/// max |M - M^T|
double hermiticity_defect(const SparseMatrix& m);
/// max |M + M^T|
double anti_hermiticity_defect(const SparseMatrix& m);
SparseMatrix commutator(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix anticommutator(const SparseMatrix& a, const SparseMatrix& b);
/// Max column absolute sum.
double norm1(const SparseMatrix& m);

double expectation(const SparseMatrix& op, const Vector& v);

}  // namespace pwave
