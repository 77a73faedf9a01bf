#pragma once

#include <cstddef>
#include <vector>

#include "framelab/linalg.hpp"

namespace framelab {

// An ordered collection of n vectors in R^d. Vectors may be linearly
// dependent or zero; spanning is a property checked by frame_bounds, not an
// invariant of the container.
class FiniteFrame {
 public:
  explicit FiniteFrame(std::vector<Vector> vectors);

  std::size_t size() const { return vecs_.size(); }
  std::size_t dim() const { return dim_; }
  const Vector& operator[](std::size_t i) const { return vecs_[i]; }
  const std::vector<Vector>& vectors() const { return vecs_; }

 private:
  std::vector<Vector> vecs_;
  std::size_t dim_;
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct TightnessResult {
  bool tight = false;
  double bound = 0.0;  // trace(S)/d, the Frobenius-closest multiple of I
};

struct FundamentalIdentityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double inequality = 0.0;
};

// Analysis operator F: x -> (<x, x_i>)_i.
std::vector<double> analysis_apply(const FiniteFrame& frame, const Vector& x);

// Synthesis operator F*: (c_i) -> sum_i c_i x_i.
Vector synthesis_apply(const FiniteFrame& frame, const std::vector<double>& coeffs);

// Unnormalized frame operator S = sum_i x_i x_i^T. The probabilistic
// convention E[XX^T] used by the measures module is S/n; see
// normalized_frame_operator.
Matrix frame_operator(const FiniteFrame& frame);
Matrix normalized_frame_operator(const FiniteFrame& frame);

// Optimal bounds: extreme eigenvalues of S. lower == 0 signals that the
// vectors do not span R^d.
FrameBounds frame_bounds(const FiniteFrame& frame);

TightnessResult is_tight(const FiniteFrame& frame, double tol);

// {S^{-1} x_i}. Throws NumericError for non-spanning input.
FiniteFrame canonical_dual(const FiniteFrame& frame);

// {S^{-1/2} x_i}, a Parseval frame. Throws NumericError for non-spanning input.
FiniteFrame to_parseval(const FiniteFrame& frame);

// sum_i sum_j <x_i, x_j>^2, which also equals ||S||_F^2.
double frame_potential(const FiniteFrame& frame);

// FP / (sum_i ||x_i||^2)^2; >= 1/d when n >= d, with equality exactly for
// tight frames. Throws NumericError on an all-zero frame.
double waldron_ratio(const FiniteFrame& frame);

// For a Parseval frame and subset J: lhs and rhs are the two sides of the
// partition identity, inequality is
//   sum_{i in J} <x,x_i>^2 + || sum_{i not in J} <x,x_i> x_i ||^2 >= 3/4 ||x||^2.
FundamentalIdentityResult fundamental_identity(const FiniteFrame& parseval,
                                               const std::vector<std::size_t>& subset,
                                               const Vector& x);

// Orbit {g x0 : g in closure(generators)} with near-duplicates (Euclidean
// distance <= 1e-9) removed. Generators must be orthogonal to 1e-10 and the
// generated group closure must stay within group_cap elements.
FiniteFrame group_orbit_frame(const std::vector<Matrix>& generators, const Vector& x0,
                              std::size_t group_cap = 10000);

// Closure of a generating set under multiplication (includes identity).
// Shared by group_orbit_frame and the group-symmetrized measures.
std::vector<Matrix> group_closure(const std::vector<Matrix>& generators,
                                  std::size_t group_cap = 10000);

}  // namespace framelab
