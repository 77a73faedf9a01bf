#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "framelab/frame_core.hpp"
#include "framelab/linalg.hpp"

namespace framelab {

struct BacktrackingRule {
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  // Initial step defaults to 1/(8n) when unset.
  std::optional<double> initial_step;
};

struct DescentConfig {
  int n = 1;
  int d = 1;
  int max_iters = 20000;
  double grad_tol = 1e-9;  // stop when the Riemannian gradient norm drops below
  std::uint64_t seed = 0;
  // Fixed step size; when unset, backtracking applies.
  std::optional<double> fixed_step;
  BacktrackingRule backtracking;
  // Explicit starting frame (unit vectors); random uniform otherwise.
  std::optional<FiniteFrame> initial;
};

struct DescentTrace {
  std::vector<double> fp_history;         // value at each accepted iterate
  std::vector<double> grad_norm_history;  // Riemannian gradient norm per iterate
  std::optional<FiniteFrame> frame;
  double final_fp = 0.0;
  double final_grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;  // gradient tolerance reached
  bool stalled = false;    // converged above the theoretical minimum
  bool reseeded = false;   // the automatic re-seed kicked in
};

struct CertificationReport {
  double fp = 0.0;
  double fp_min = 0.0;
  double fp_gap = 0.0;
  // ||S - (n/d) I||_F when n >= d, ||Gram - I||_F otherwise.
  double residual = 0.0;
  bool n_at_least_d = false;
  bool pass = false;
};

// Euclidean gradient of the frame potential: grad_k = 4 sum_j <x_k,x_j> x_j.
// Vectors must be unit norm to 1e-8.
std::vector<Vector> fp_gradient(const FiniteFrame& frame);

// Projection onto the tangent spaces: g_k - <g_k, x_k> x_k.
std::vector<Vector> tangential_gradient(const FiniteFrame& frame,
                                        const std::vector<Vector>& euclidean);

// n for n <= d, n^2/d otherwise.
double theoretical_min_fp(int n, int d);

// Projected gradient descent on (S^{d-1})^n with renormalization retraction.
// A run that stops above the theoretical minimum is flagged stalled and
// automatically retried once from a derived seed; the better run is returned.
DescentTrace minimize_fp(const DescentConfig& config);

CertificationReport certify_minimizer(const FiniteFrame& frame, double tol);

}  // namespace framelab
