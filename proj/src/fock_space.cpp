#include "pwave/fock_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "pwave/errors.hpp"

namespace pwave {
namespace {

constexpr const char* kModule = "fock";

// (-1)^{number of occupied modes below i}
double parity_below(Bitmask s, std::size_t i) {
  const Bitmask below = i == 0 ? 0 : (s & ((Bitmask{1} << i) - 1));
  return (std::popcount(below) & 1) ? -1.0 : 1.0;
}

// Gosper's hack: next larger integer with the same popcount.
Bitmask next_combination(Bitmask v) {
  const Bitmask t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// ModeSet

ModeSet::ModeSet(TorusSpec spec, double momentum_cutoff) : spec_(spec), cutoff_(momentum_cutoff) {
  spec_.validate();
  if (!(momentum_cutoff >= 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "momentum cutoff must be >= 0");
  const double radius = momentum_cutoff / spec_.momentum_unit();
  box_ = static_cast<int>(std::ceil(radius)) + 1;
  const std::int64_t limit = static_cast<std::int64_t>(std::floor(radius * radius * (1.0 + 1e-12)));
  const int d = spec_.dim;
  const int m0 = box_;
  const int m1 = d >= 2 ? box_ : 0;
  const int m2 = d >= 3 ? box_ : 0;
  LatticeVector n{0, 0, 0};
  for (n[0] = -m0; n[0] <= m0; ++n[0])
    for (n[1] = -m1; n[1] <= m1; ++n[1])
      for (n[2] = -m2; n[2] <= m2; ++n[2])
        if (norm_sq(n) <= limit) modes_.push_back(n);
  if (modes_.size() > kMaxModes)
    throw Error(ErrorCode::SectorTooLarge, kModule, "mode set exceeds " + std::to_string(kMaxModes) + " modes");
  const int side = 2 * box_ + 1;
  lookup_.assign(static_cast<std::size_t>(side) * side * side, -1);
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& m = modes_[i];
    lookup_[((m[0] + box_) * side + (m[1] + box_)) * side + (m[2] + box_)] = static_cast<int>(i);
  }
}

double ModeSet::momentum_sq(std::size_t i) const {
  const double u = spec_.momentum_unit();
  return u * u * norm_sq(modes_[i]);
}

double ModeSet::momentum(std::size_t i) const { return std::sqrt(momentum_sq(i)); }

std::optional<std::size_t> ModeSet::find(const LatticeVector& n) const {
  const int side = 2 * box_ + 1;
  for (int c = 0; c < 3; ++c)
    if (n[c] < -box_ || n[c] > box_) return std::nullopt;
  if (spec_.dim < 3 && n[2] != 0) return std::nullopt;
  if (spec_.dim < 2 && n[1] != 0) return std::nullopt;
  const int idx = lookup_[((n[0] + box_) * side + (n[1] + box_)) * side + (n[2] + box_)];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

// ---------------------------------------------------------------------------
// Basis

Basis::Basis(std::size_t modes, std::vector<Bitmask> states, bool full)
    : modes_(modes), states_(std::move(states)), full_(full) {}

Basis Basis::full(std::size_t modes, std::size_t cap) {
  if (modes > kMaxModes || std::ldexp(1.0, static_cast<int>(modes)) > static_cast<double>(cap))
    throw Error(ErrorCode::SectorTooLarge, kModule, "full Fock space exceeds the dimension cap");
  std::vector<Bitmask> states(std::size_t{1} << modes);
  for (std::size_t i = 0; i < states.size(); ++i) states[i] = i;
  return Basis(modes, std::move(states), true);
}

Basis Basis::sector(const ModeSet& modes, std::size_t particles, std::optional<LatticeVector> momentum,
                    std::size_t cap) {
  const std::size_t m = modes.size();
  if (particles > m) throw Error(ErrorCode::InvalidArgument, kModule, "more particles than modes");
  if (binomial(m, particles) > static_cast<double>(cap))
    throw Error(ErrorCode::SectorTooLarge, kModule, "sector dimension exceeds the cap");
  std::vector<Bitmask> states;
  const auto accept = [&](Bitmask s) {
    if (!momentum) return true;
    LatticeVector total{0, 0, 0};
    for (std::size_t i = 0; i < m; ++i)
      if (s >> i & 1)
        for (int c = 0; c < 3; ++c) total[c] += modes[i][c];
    return total == *momentum;
  };
  if (particles == 0) {
    if (accept(0)) states.push_back(0);
  } else {
    const Bitmask last = ((Bitmask{1} << particles) - 1) << (m - particles);
    for (Bitmask s = (Bitmask{1} << particles) - 1;; s = next_combination(s)) {
      if (accept(s)) states.push_back(s);
      if (s == last) break;
    }
  }
  return Basis(m, std::move(states), false);
}

Basis Basis::sectors(const ModeSet& modes, const std::vector<std::size_t>& particle_numbers, std::size_t cap) {
  std::vector<Bitmask> states;
  for (std::size_t n : particle_numbers) {
    const Basis b = sector(modes, n, std::nullopt, cap);
    states.insert(states.end(), b.states().begin(), b.states().end());
    if (states.size() > cap) throw Error(ErrorCode::SectorTooLarge, kModule, "basis dimension exceeds the cap");
  }
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  const bool full = states.size() == (std::size_t{1} << modes.size());
  return Basis(modes.size(), std::move(states), full);
}

std::size_t Basis::index(Bitmask s) const {
  if (full_) return s < states_.size() ? static_cast<std::size_t>(s) : npos;
  const auto it = std::lower_bound(states_.begin(), states_.end(), s);
  if (it == states_.end() || *it != s) return npos;
  return static_cast<std::size_t>(it - states_.begin());
}

// ---------------------------------------------------------------------------
// Operators

bool apply_ops(const std::vector<Ladder>& ops, Bitmask& state, double& sign) {
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const Bitmask bit = Bitmask{1} << it->mode;
    const bool occupied = (state & bit) != 0;
    if (it->creation == occupied) return false;
    sign *= parity_below(state, it->mode);
    state ^= bit;
  }
  return true;
}

Term adjoint(const Term& t) {
  Term out;
  out.coefficient = t.coefficient;
  out.ops.assign(t.ops.rbegin(), t.ops.rend());
  for (auto& op : out.ops) op.creation = !op.creation;
  return out;
}

OperatorBuild build_operator(const Basis& basis, const std::vector<Term>& terms) {
  OperatorBuild out;
  std::vector<Eigen::Triplet<double>> triplets;
  for (const Term& t : terms) {
    if (t.coefficient == 0.0) continue;
    for (std::size_t col = 0; col < basis.dim(); ++col) {
      Bitmask s = basis.state(col);
      double sign = 1.0;
      if (!apply_ops(t.ops, s, sign)) continue;
      const std::size_t row = basis.index(s);
      if (row == Basis::npos) {
        ++out.dropped;
        continue;
      }
      triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), sign * t.coefficient);
    }
  }
  out.matrix.resize(static_cast<Eigen::Index>(basis.dim()), static_cast<Eigen::Index>(basis.dim()));
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.prune(0.0);
  return out;
}

SparseMatrix number_weighted(const Basis& basis, const std::vector<double>& weights) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const Bitmask s = basis.state(i);
    double w = 0.0;
    for (std::size_t m = 0; m < weights.size(); ++m)
      if (s >> m & 1) w += weights[m];
    if (w != 0.0) triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), w);
  }
  SparseMatrix out(static_cast<Eigen::Index>(basis.dim()), static_cast<Eigen::Index>(basis.dim()));
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

SparseMatrix ladder_matrix(const Basis& basis, std::size_t mode, bool creation) {
  Term t{1.0, {Ladder{creation, static_cast<std::uint8_t>(mode)}}};
  return build_operator(basis, {t}).matrix;
}

double max_abs(const SparseMatrix& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  return best;
}

double hermiticity_defect(const SparseMatrix& m) {
  const SparseMatrix t = m.transpose();
  return max_abs(SparseMatrix(m - t));
}

double anti_hermiticity_defect(const SparseMatrix& m) {
  const SparseMatrix t = m.transpose();
  return max_abs(SparseMatrix(m + t));
}

SparseMatrix commutator(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix ab = a * b;
  SparseMatrix ba = b * a;
  return ab - ba;
}

SparseMatrix anticommutator(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix ab = a * b;
  SparseMatrix ba = b * a;
  return ab + ba;
}

double norm1(const SparseMatrix& m) {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(m.cols());
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) col[it.col()] += std::abs(it.value());
  return col.size() ? col.maxCoeff() : 0.0;
}

double expectation(const SparseMatrix& op, const Vector& v) { return v.dot(op * v); }

}  // namespace pwave
