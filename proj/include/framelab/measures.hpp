#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "framelab/frame_core.hpp"
#include "framelab/linalg.hpp"
#include "framelab/rng.hpp"

namespace framelab {

class MeasureSpec;

// --- variant payloads ------------------------------------------------------

struct UniformSphere {
  int d = 1;
  double r = 1.0;
};

// Uniform measures on the lp sphere/ball in the cone-measure sense generated
// by normalized generalized Gaussians; p may be infinity.
struct UniformLpSphere {
  int d = 1;
  double p = 2.0;
  double r = 1.0;
};

struct UniformLpBall {
  int d = 1;
  double p = 2.0;
  double r = 1.0;
};

// Mixture over the directions of a FUNTF on the unit circle with von Mises
// component law exp(kappa * cos(beta - alpha_i)).
struct VonMisesMixture {
  FiniteFrame funtf;
  double kappa = 1.0;
};

// Same mixture with Watson component law exp(kappa * cos^2(beta - alpha_i)).
struct WatsonMixture {
  FiniteFrame funtf;
  double kappa = 1.0;
};

struct GroupSymmetrized {
  std::shared_ptr<const MeasureSpec> base;
  std::vector<Matrix> group;  // full closure, identity included
};

struct SignSymmetrized {
  std::shared_ptr<const MeasureSpec> base;
};

struct BernoulliHypercube {
  int d = 1;
};

// Coordinates i.i.d. N(0, 1/d).
struct IsotropicGaussian {
  int d = 1;
};

struct DiscreteCounting {
  FiniteFrame support;
  std::vector<double> weights;  // sums to 1
};

using MeasureVariant =
    std::variant<UniformSphere, UniformLpSphere, UniformLpBall, VonMisesMixture,
                 WatsonMixture, GroupSymmetrized, SignSymmetrized, BernoulliHypercube,
                 IsotropicGaussian, DiscreteCounting>;

// A sampleable probability measure on a subset of R^d. Validated on
// construction; immutable afterwards, so instances can be shared freely
// across threads. An exclusively owned SeededRng is required per thread of
// sampling.
class MeasureSpec {
 public:
  explicit MeasureSpec(MeasureVariant v);

  const MeasureVariant& variant() const { return variant_; }
  int dim() const { return dim_; }

 private:
  MeasureVariant variant_;
  int dim_;
};

// --- moments ---------------------------------------------------------------

// L = E||X||^2, N = E||X||^4, second_moments(i,j) = E[X_i X_j],
// fourth_mixed(i,j) = E[X_i^2 X_j^2]. Per-field exactness flags separate
// analytic values from Monte-Carlo estimates; se_* are zero for exact fields.
struct MomentSummary {
  double L = 0.0;
  double N = 0.0;
  Matrix second_moments;
  std::optional<Matrix> fourth_mixed;
  bool l_exact = true;
  bool n_exact = true;
  bool second_exact = true;
  bool fourth_exact = true;
  double se_l = 0.0;
  double se_n = 0.0;
  Matrix se_second;
  std::optional<Matrix> se_fourth;
};

Vector sample(const MeasureSpec& spec, SeededRng& rng);

// Analytic-only overload: throws NumericError when the variant has no closed
// forms for L/N/second moments. fourth_mixed is left empty when it would
// require estimation.
MomentSummary moment_summary(const MeasureSpec& spec);
// Fills any non-analytic field by Monte-Carlo with the given sample budget.
MomentSummary moment_summary(const MeasureSpec& spec, long mc_budget, SeededRng& rng);

bool is_probabilistic_tight(const MeasureSpec& spec, double tol);
bool is_probabilistic_tight(const MeasureSpec& spec, double tol, long mc_budget,
                            SeededRng& rng);

// (1/d) * L for a probabilistic tight frame; throws NumericError otherwise.
double tight_bound(const MeasureSpec& spec, double tol = 1e-9);
double tight_bound(const MeasureSpec& spec, double tol, long mc_budget, SeededRng& rng);

MeasureSpec sign_symmetrize(const MeasureSpec& spec);
MeasureSpec group_symmetrize(const MeasureSpec& base, const std::vector<Matrix>& generators,
                             std::size_t group_cap = 10000);

// Pushforward of a discrete measure by S^{-1}, S = E[XX^T]. Input must
// flatten to a discrete measure with spanning support.
MeasureSpec canonical_dual_measure(const MeasureSpec& spec);

// Explicit finite-support form of a spec when one exists (discrete measures,
// possibly wrapped in sign/group symmetrizations).
std::optional<DiscreteCounting> as_discrete_counting(const MeasureSpec& spec);

// True when every sample is guaranteed to lie on the unit sphere.
bool unit_sphere_support(const MeasureSpec& spec);

// --- JSON ------------------------------------------------------------------

// {"type":"uniform_sphere","d":3,"r":1.0} and friends; frames either inline
// ("frame"/"funtf" as row lists) or via "frame_csv"/"funtf_csv" paths
// resolved against base_dir. p accepts the string "inf".
MeasureSpec measure_spec_from_json(const nlohmann::json& j, const std::string& base_dir = "");
nlohmann::json measure_spec_to_json(const MeasureSpec& spec);

}  // namespace framelab
