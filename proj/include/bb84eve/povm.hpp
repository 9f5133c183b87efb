#pragma once

// Positive operator-valued measures on the probe space.

#include <stdexcept>
#include <vector>

#include "hilbert.hpp"

namespace bb84eve {

struct Povm {
  std::vector<Operator> elements;

  int dim() const { return elements.empty() ? 0 : elements.front().dim(); }
  int outcomes() const { return static_cast<int>(elements.size()); }
};

// Elements Hermitian and PSD within tol::spectral, summing to the identity.
inline bool is_valid_povm(const Povm& p, double eps = tol::spectral) {
  if (p.elements.empty()) return false;
  Operator sum = Operator::zero(p.dim());
  for (const Operator& e : p.elements) {
    if (e.dim() != p.dim()) return false;
    if (hermiticity_defect(e) > eps) return false;
    EigResult eig = eig_hermitian(e);
    if (eig.values.back() < -eps) return false;
    sum = sum + e;
  }
  return max_abs_entry(sum - Operator::identity(p.dim())) <= eps;
}

// Projective measurement onto an orthonormal basis (rank-1 projectors).
inline Povm projective_povm(const std::vector<StateVector>& basis) {
  if (basis.empty()) throw std::invalid_argument("projective_povm: empty basis");
  const int d = basis.front().dim();
  if (static_cast<int>(basis.size()) != d)
    throw std::invalid_argument("projective_povm: basis size must equal dimension");
  for (const StateVector& v : basis)
    if (v.dim() != d || !v.is_normalized(1e-9))
      throw std::invalid_argument("projective_povm: basis not normalized");
  Povm p;
  p.elements.reserve(basis.size());
  for (const StateVector& v : basis) p.elements.push_back(projector(v));
  return p;
}

// Merge outcome groups by summing their elements; groups must partition the
// outcome index set.
inline Povm coarse_grain(const Povm& p, const std::vector<std::vector<int>>& groups) {
  std::vector<bool> used(static_cast<std::size_t>(p.outcomes()), false);
  Povm out;
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("coarse_grain: empty group");
    Operator acc = Operator::zero(p.dim());
    for (int i : g) {
      if (i < 0 || i >= p.outcomes() || used[static_cast<std::size_t>(i)])
        throw std::invalid_argument("coarse_grain: invalid outcome grouping");
      used[static_cast<std::size_t>(i)] = true;
      acc = acc + p.elements[static_cast<std::size_t>(i)];
    }
    out.elements.push_back(std::move(acc));
  }
  for (bool u : used)
    if (!u) throw std::invalid_argument("coarse_grain: groups must cover all outcomes");
  return out;
}

}  // namespace bb84eve
