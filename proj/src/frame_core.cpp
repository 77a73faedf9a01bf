#include "framelab/frame_core.hpp"

#include <cmath>
#include <utility>

#include "framelab/errors.hpp"

namespace framelab {

FiniteFrame::FiniteFrame(std::vector<Vector> vectors) : vecs_(std::move(vectors)) {
  if (vecs_.empty()) throw ValidationError("frame: needs at least one vector");
  dim_ = vecs_.front().size();
  if (dim_ == 0) throw ValidationError("frame: vectors must have dimension >= 1");
  for (const Vector& v : vecs_) {
    if (v.size() != dim_) throw ValidationError("frame: vectors have mixed dimensions");
    if (!all_finite(v)) throw ValidationError("frame: non-finite entry");
  }
}

std::vector<double> analysis_apply(const FiniteFrame& frame, const Vector& x) {
  if (x.size() != frame.dim())
    throw ValidationError("analysis_apply: vector dimension does not match frame");
  std::vector<double> out(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) out[i] = dot(x, frame[i]);
  return out;
}

Vector synthesis_apply(const FiniteFrame& frame, const std::vector<double>& coeffs) {
  if (coeffs.size() != frame.size())
    throw ValidationError("synthesis_apply: coefficient count does not match frame size");
  Vector out(frame.dim(), 0.0);
  for (std::size_t i = 0; i < frame.size(); ++i)
    for (std::size_t k = 0; k < frame.dim(); ++k) out[k] += coeffs[i] * frame[i][k];
  return out;
}

Matrix frame_operator(const FiniteFrame& frame) {
  const std::size_t d = frame.dim();
  Matrix s(d, d);
  for (const Vector& x : frame.vectors())
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) s(i, j) += x[i] * x[j];
  return s;
}

Matrix normalized_frame_operator(const FiniteFrame& frame) {
  return (1.0 / static_cast<double>(frame.size())) * frame_operator(frame);
}

FrameBounds frame_bounds(const FiniteFrame& frame) {
  const EigenDecomposition eig = eig_sym(frame_operator(frame));
  FrameBounds b;
  b.upper = eig.eigenvalues.front();
  b.lower = std::max(eig.eigenvalues.back(), 0.0);
  return b;
}

TightnessResult is_tight(const FiniteFrame& frame, double tol) {
  if (tol <= 0.0) throw ValidationError("is_tight: tol must be positive");
  const Matrix s = frame_operator(frame);
  const std::size_t d = frame.dim();
  const double a = matrix_trace(s) / static_cast<double>(d);
  const Matrix dev = s - a * Matrix::identity(d);
  return TightnessResult{frobenius_norm(dev) <= tol, a};
}

namespace {

FiniteFrame apply_to_all(const Matrix& m, const FiniteFrame& frame) {
  std::vector<Vector> out;
  out.reserve(frame.size());
  for (const Vector& x : frame.vectors()) out.push_back(matvec(m, x));
  return FiniteFrame(std::move(out));
}

}  // namespace

FiniteFrame canonical_dual(const FiniteFrame& frame) {
  return apply_to_all(symmetric_inverse(frame_operator(frame)), frame);
}

FiniteFrame to_parseval(const FiniteFrame& frame) {
  return apply_to_all(symmetric_inverse_sqrt(frame_operator(frame)), frame);
}

double frame_potential(const FiniteFrame& frame) {
  double fp = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i)
    for (std::size_t j = 0; j < frame.size(); ++j) {
      const double g = dot(frame[i], frame[j]);
      fp += g * g;
    }
  return fp;
}

double waldron_ratio(const FiniteFrame& frame) {
  double energy = 0.0;
  for (const Vector& x : frame.vectors()) energy += norm_sq(x);
  if (energy == 0.0) throw NumericError("waldron_ratio: all frame vectors are zero");
  return frame_potential(frame) / (energy * energy);
}

FundamentalIdentityResult fundamental_identity(const FiniteFrame& parseval,
                                               const std::vector<std::size_t>& subset,
                                               const Vector& x) {
  const TightnessResult t = is_tight(parseval, 1e-8);
  if (!t.tight || std::abs(t.bound - 1.0) > 1e-8)
    throw NumericError("fundamental_identity: input frame is not Parseval");
  if (x.size() != parseval.dim())
    throw ValidationError("fundamental_identity: vector dimension mismatch");

  std::vector<bool> in_subset(parseval.size(), false);
  for (std::size_t idx : subset) {
    if (idx >= parseval.size())
      throw ValidationError("fundamental_identity: subset index out of range");
    in_subset[idx] = true;
  }

  double energy_in = 0.0, energy_out = 0.0;
  Vector partial_in(parseval.dim(), 0.0), partial_out(parseval.dim(), 0.0);
  for (std::size_t i = 0; i < parseval.size(); ++i) {
    const double c = dot(x, parseval[i]);
    Vector& acc = in_subset[i] ? partial_in : partial_out;
    (in_subset[i] ? energy_in : energy_out) += c * c;
    for (std::size_t k = 0; k < parseval.dim(); ++k) acc[k] += c * parseval[i][k];
  }

  FundamentalIdentityResult out;
  out.lhs = energy_in - norm_sq(partial_in);
  out.rhs = energy_out - norm_sq(partial_out);
  out.inequality = energy_in + norm_sq(partial_out);
  return out;
}

std::vector<Matrix> group_closure(const std::vector<Matrix>& generators,
                                  std::size_t group_cap) {
  if (generators.empty()) throw ValidationError("group_closure: no generators");
  const std::size_t d = generators.front().rows();
  for (const Matrix& g : generators) {
    if (g.rows() != d || g.cols() != d)
      throw ValidationError("group_closure: generators have mixed dimensions");
    const Matrix dev = matmul(transpose(g), g) - Matrix::identity(d);
    if (frobenius_norm(dev) > 1e-10)
      throw ValidationError("group_closure: generator is not orthogonal");
  }

  auto contains = [](const std::vector<Matrix>& set, const Matrix& m) {
    for (const Matrix& e : set)
      if (frobenius_norm(e - m) <= 1e-9) return true;
    return false;
  };

  std::vector<Matrix> group;
  group.push_back(Matrix::identity(d));
  std::vector<Matrix> frontier = group;
  while (!frontier.empty()) {
    std::vector<Matrix> fresh;
    for (const Matrix& f : frontier)
      for (const Matrix& g : generators) {
        Matrix prod = matmul(g, f);
        if (!contains(group, prod) && !contains(fresh, prod)) {
          fresh.push_back(std::move(prod));
          if (group.size() + fresh.size() > group_cap)
            throw ValidationError("group_closure: generated group exceeds the cap");
        }
      }
    for (Matrix& m : fresh) group.push_back(std::move(m));
    frontier = std::move(fresh);
  }
  return group;
}

FiniteFrame group_orbit_frame(const std::vector<Matrix>& generators, const Vector& x0,
                              std::size_t group_cap) {
  if (norm(x0) == 0.0) throw ValidationError("group_orbit_frame: x0 must be nonzero");
  const std::vector<Matrix> group = group_closure(generators, group_cap);
  if (group.front().rows() != x0.size())
    throw ValidationError("group_orbit_frame: x0 dimension does not match generators");

  std::vector<Vector> orbit;
  for (const Matrix& g : group) {
    Vector y = matvec(g, x0);
    bool dup = false;
    for (const Vector& z : orbit) {
      double dist_sq = 0.0;
      for (std::size_t k = 0; k < y.size(); ++k)
        dist_sq += (y[k] - z[k]) * (y[k] - z[k]);
      if (std::sqrt(dist_sq) <= 1e-9) {
        dup = true;
        break;
      }
    }
    if (!dup) orbit.push_back(std::move(y));
  }
  return FiniteFrame(std::move(orbit));
}

}  // namespace framelab
