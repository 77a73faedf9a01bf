#include "framelab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <utility>

#include "framelab/csv.hpp"
#include "framelab/errors.hpp"

namespace framelab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long kRejectionCap = 1000000;

void require(bool cond, const char* msg) {
  if (!cond) throw ValidationError(msg);
}

void validate_funtf_on_circle(const FiniteFrame& funtf) {
  require(funtf.dim() == 2, "mixture: FUNTF centers must lie on the unit circle (d=2)");
  for (const Vector& x : funtf.vectors())
    if (std::abs(norm(x) - 1.0) > 1e-9)
      throw ValidationError("mixture: FUNTF centers must have unit norm");
  if (!is_tight(funtf, 1e-8).tight)
    throw ValidationError("mixture: centers do not form a tight frame");
}

struct Validator {
  void operator()(const UniformSphere& m) const {
    require(m.d >= 1, "uniform_sphere: d must be >= 1");
    require(std::isfinite(m.r) && m.r > 0.0, "uniform_sphere: r must be positive");
  }
  void operator()(const UniformLpSphere& m) const {
    require(m.d >= 1, "uniform_lp_sphere: d must be >= 1");
    require(m.p > 0.0, "uniform_lp_sphere: p must be in (0, inf]");
    require(std::isfinite(m.r) && m.r > 0.0, "uniform_lp_sphere: r must be positive");
  }
  void operator()(const UniformLpBall& m) const {
    require(m.d >= 1, "uniform_lp_ball: d must be >= 1");
    require(m.p > 0.0, "uniform_lp_ball: p must be in (0, inf]");
    require(std::isfinite(m.r) && m.r > 0.0, "uniform_lp_ball: r must be positive");
  }
  void operator()(const VonMisesMixture& m) const {
    require(std::isfinite(m.kappa), "von_mises_mixture: kappa must be finite");
    validate_funtf_on_circle(m.funtf);
  }
  void operator()(const WatsonMixture& m) const {
    require(std::isfinite(m.kappa), "watson_mixture: kappa must be finite");
    validate_funtf_on_circle(m.funtf);
  }
  void operator()(const GroupSymmetrized& m) const {
    require(m.base != nullptr, "group_symmetrized: missing base measure");
    require(!m.group.empty(), "group_symmetrized: empty group");
    for (const Matrix& g : m.group) {
      require(g.rows() == g.cols() && static_cast<int>(g.rows()) == m.base->dim(),
              "group_symmetrized: element dimension does not match base");
      if (frobenius_norm(matmul(transpose(g), g) - Matrix::identity(g.rows())) > 1e-8)
        throw ValidationError("group_symmetrized: non-orthogonal group element");
    }
  }
  void operator()(const SignSymmetrized& m) const {
    require(m.base != nullptr, "sign_symmetrized: missing base measure");
  }
  void operator()(const BernoulliHypercube& m) const {
    require(m.d >= 1, "bernoulli_hypercube: d must be >= 1");
  }
  void operator()(const IsotropicGaussian& m) const {
    require(m.d >= 1, "isotropic_gaussian: d must be >= 1");
  }
  void operator()(const DiscreteCounting& m) const {
    require(m.weights.size() == m.support.size(),
            "discrete_counting: weight count does not match support");
    double total = 0.0;
    for (double w : m.weights) {
      require(w >= 0.0, "discrete_counting: negative weight");
      total += w;
    }
    require(std::abs(total - 1.0) <= 1e-12, "discrete_counting: weights must sum to 1");
  }
};

struct DimVisitor {
  int operator()(const UniformSphere& m) const { return m.d; }
  int operator()(const UniformLpSphere& m) const { return m.d; }
  int operator()(const UniformLpBall& m) const { return m.d; }
  int operator()(const VonMisesMixture&) const { return 2; }
  int operator()(const WatsonMixture&) const { return 2; }
  int operator()(const GroupSymmetrized& m) const { return m.base->dim(); }
  int operator()(const SignSymmetrized& m) const { return m.base->dim(); }
  int operator()(const BernoulliHypercube& m) const { return m.d; }
  int operator()(const IsotropicGaussian& m) const { return m.d; }
  int operator()(const DiscreteCounting& m) const {
    return static_cast<int>(m.support.dim());
  }
};

}  // namespace

MeasureSpec::MeasureSpec(MeasureVariant v) : variant_(std::move(v)) {
  if (auto* dc = std::get_if<DiscreteCounting>(&variant_)) {
    if (dc->weights.empty())
      dc->weights.assign(dc->support.size(), 1.0 / static_cast<double>(dc->support.size()));
  }
  std::visit(Validator{}, variant_);
  dim_ = std::visit(DimVisitor{}, variant_);
}

// --- sampling ---------------------------------------------------------------

namespace {

Vector sphere_point(int d, double r, SeededRng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vector x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.gaussian();
    const double len = norm(x);
    if (len > 1e-150) {
      const double scale = r / len;
      for (double& e : x) e *= scale;
      return x;
    }
  }
  throw NumericError("uniform_sphere: degenerate gaussian draw");
}

double lp_norm(const Vector& v, double p) {
  double mx = 0.0;
  for (double e : v) mx = std::max(mx, std::abs(e));
  if (mx == 0.0) return 0.0;
  if (std::isinf(p)) return mx;
  double s = 0.0;
  for (double e : v) s += std::pow(std::abs(e) / mx, p);
  return mx * std::pow(s, 1.0 / p);
}

// Unit lp-norm direction via normalized generalized Gaussians (cone measure).
Vector lp_direction(int d, double p, SeededRng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vector g(d);
    for (int i = 0; i < d; ++i) {
      const double mag = std::pow(rng.gamma(1.0 / p), 1.0 / p);
      g[i] = rng.uniform() < 0.5 ? -mag : mag;
    }
    const double len = lp_norm(g, p);
    if (len > 1e-150) {
      for (double& e : g) e /= len;
      return g;
    }
  }
  throw NumericError("uniform_lp: degenerate generalized-gaussian draw");
}

Vector lp_sphere_point(int d, double p, double r, SeededRng& rng) {
  if (std::isinf(p)) {
    // Pick a face, pin that coordinate to +-r, spread the rest uniformly.
    Vector x(d);
    const auto face = static_cast<std::size_t>(rng.uniform_below(d));
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(-r, r);
    x[face] = sign * r;
    return x;
  }
  Vector x = lp_direction(d, p, rng);
  for (double& e : x) e *= r;
  return x;
}

Vector lp_ball_point(int d, double p, double r, SeededRng& rng) {
  if (std::isinf(p)) {
    Vector x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(-r, r);
    return x;
  }
  if (p == 1.0 || p == 2.0) {
    // Exact radial law: cone direction scaled by U^(1/d).
    Vector x = lp_direction(d, p, rng);
    const double radius = r * std::pow(rng.uniform(), 1.0 / d);
    for (double& e : x) e *= radius;
    return x;
  }
  for (long iter = 0; iter < kRejectionCap; ++iter) {
    Vector y(d);
    for (int i = 0; i < d; ++i) y[i] = rng.uniform(-r, r);
    if (lp_norm(y, p) <= r) return y;
  }
  throw NumericError("uniform_lp_ball: rejection-sampler iteration cap exceeded");
}

Vector circle_mixture_point(const FiniteFrame& funtf, double kappa, bool watson,
                            SeededRng& rng) {
  const auto i = static_cast<std::size_t>(rng.uniform_below(funtf.size()));
  const double alpha = std::atan2(funtf[i][1], funtf[i][0]);
  for (long iter = 0; iter < kRejectionCap; ++iter) {
    const double beta = rng.uniform(0.0, 2.0 * kPi);
    const double u = rng.uniform();
    const double c = std::cos(beta - alpha);
    const double log_ratio =
        watson ? kappa * c * c - std::max(kappa, 0.0) : kappa * c - std::abs(kappa);
    if (u <= std::exp(log_ratio)) return Vector{std::cos(beta), std::sin(beta)};
  }
  throw NumericError("mixture: rejection-sampler iteration cap exceeded");
}

struct SampleVisitor {
  SeededRng& rng;

  Vector operator()(const UniformSphere& m) const { return sphere_point(m.d, m.r, rng); }
  Vector operator()(const UniformLpSphere& m) const {
    return lp_sphere_point(m.d, m.p, m.r, rng);
  }
  Vector operator()(const UniformLpBall& m) const {
    return lp_ball_point(m.d, m.p, m.r, rng);
  }
  Vector operator()(const VonMisesMixture& m) const {
    return circle_mixture_point(m.funtf, m.kappa, false, rng);
  }
  Vector operator()(const WatsonMixture& m) const {
    return circle_mixture_point(m.funtf, m.kappa, true, rng);
  }
  Vector operator()(const GroupSymmetrized& m) const {
    const auto g = static_cast<std::size_t>(rng.uniform_below(m.group.size()));
    return matvec(m.group[g], sample(*m.base, rng));
  }
  Vector operator()(const SignSymmetrized& m) const {
    Vector x = sample(*m.base, rng);
    if (rng.uniform() < 0.5)
      for (double& e : x) e = -e;
    return x;
  }
  Vector operator()(const BernoulliHypercube& m) const {
    const double mag = 1.0 / std::sqrt(static_cast<double>(m.d));
    Vector x(m.d);
    for (int i = 0; i < m.d; ++i) x[i] = rng.uniform() < 0.5 ? -mag : mag;
    return x;
  }
  Vector operator()(const IsotropicGaussian& m) const {
    const double sigma = 1.0 / std::sqrt(static_cast<double>(m.d));
    Vector x(m.d);
    for (int i = 0; i < m.d; ++i) x[i] = sigma * rng.gaussian();
    return x;
  }
  Vector operator()(const DiscreteCounting& m) const {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < m.weights.size(); ++i) {
      acc += m.weights[i];
      if (u < acc) return m.support[i];
    }
    return m.support[m.support.size() - 1];
  }
};

}  // namespace

Vector sample(const MeasureSpec& spec, SeededRng& rng) {
  return std::visit(SampleVisitor{rng}, spec.variant());
}

// --- flattening -------------------------------------------------------------

std::optional<DiscreteCounting> as_discrete_counting(const MeasureSpec& spec) {
  if (const auto* dc = std::get_if<DiscreteCounting>(&spec.variant())) return *dc;
  if (const auto* ss = std::get_if<SignSymmetrized>(&spec.variant())) {
    auto base = as_discrete_counting(*ss->base);
    if (!base) return std::nullopt;
    std::vector<Vector> points;
    std::vector<double> weights;
    for (std::size_t i = 0; i < base->support.size(); ++i) {
      Vector neg = base->support[i];
      for (double& e : neg) e = -e;
      points.push_back(base->support[i]);
      weights.push_back(0.5 * base->weights[i]);
      points.push_back(std::move(neg));
      weights.push_back(0.5 * base->weights[i]);
    }
    return DiscreteCounting{FiniteFrame(std::move(points)), std::move(weights)};
  }
  if (const auto* gs = std::get_if<GroupSymmetrized>(&spec.variant())) {
    auto base = as_discrete_counting(*gs->base);
    if (!base) return std::nullopt;
    std::vector<Vector> points;
    std::vector<double> weights;
    const double scale = 1.0 / static_cast<double>(gs->group.size());
    for (const Matrix& g : gs->group)
      for (std::size_t i = 0; i < base->support.size(); ++i) {
        points.push_back(matvec(g, base->support[i]));
        weights.push_back(scale * base->weights[i]);
      }
    return DiscreteCounting{FiniteFrame(std::move(points)), std::move(weights)};
  }
  return std::nullopt;
}

// --- moments ----------------------------------------------------------------

namespace {

struct AnalyticMoments {
  MomentSummary summary;
  bool have_core = false;    // L, N, second_moments
  bool have_fourth = false;  // fourth_mixed
};

MomentSummary discrete_exact_summary(const DiscreteCounting& m) {
  const std::size_t d = m.support.dim();
  MomentSummary s;
  s.second_moments = Matrix(d, d);
  s.fourth_mixed = Matrix(d, d);
  s.se_second = Matrix(d, d);
  for (std::size_t k = 0; k < m.support.size(); ++k) {
    const Vector& x = m.support[k];
    const double w = m.weights[k];
    const double n2 = norm_sq(x);
    s.L += w * n2;
    s.N += w * n2 * n2;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        s.second_moments(i, j) += w * x[i] * x[j];
        (*s.fourth_mixed)(i, j) += w * x[i] * x[i] * x[j] * x[j];
      }
  }
  return s;
}

AnalyticMoments analytic_moments(const MeasureSpec& spec);

struct AnalyticVisitor {
  const MeasureSpec& spec;

  AnalyticMoments operator()(const UniformSphere& m) const {
    const double r2 = m.r * m.r;
    const double r4 = r2 * r2;
    const double dd = static_cast<double>(m.d);
    AnalyticMoments out;
    out.summary.L = r2;
    out.summary.N = r4;
    out.summary.second_moments = (r2 / dd) * Matrix::identity(m.d);
    Matrix fourth(m.d, m.d, r4 / (dd * (dd + 2.0)));
    for (int i = 0; i < m.d; ++i) fourth(i, i) = 3.0 * r4 / (dd * (dd + 2.0));
    out.summary.fourth_mixed = std::move(fourth);
    out.summary.se_second = Matrix(m.d, m.d);
    out.have_core = true;
    out.have_fourth = true;
    return out;
  }
  AnalyticMoments operator()(const UniformLpSphere&) const { return {}; }
  AnalyticMoments operator()(const UniformLpBall&) const { return {}; }
  AnalyticMoments operator()(const VonMisesMixture&) const { return circle_mixture(); }
  AnalyticMoments operator()(const WatsonMixture&) const { return circle_mixture(); }
  AnalyticMoments operator()(const GroupSymmetrized& m) const {
    if (auto flat = as_discrete_counting(spec)) {
      AnalyticMoments out;
      out.summary = discrete_exact_summary(*flat);
      out.have_core = true;
      out.have_fourth = true;
      return out;
    }
    AnalyticMoments base = analytic_moments(*m.base);
    if (!base.have_core) return {};
    AnalyticMoments out;
    out.summary.L = base.summary.L;
    out.summary.N = base.summary.N;
    const std::size_t d = base.summary.second_moments.rows();
    Matrix avg(d, d);
    for (const Matrix& g : m.group)
      avg = avg + matmul(matmul(g, base.summary.second_moments), transpose(g));
    out.summary.second_moments = (1.0 / static_cast<double>(m.group.size())) * avg;
    out.summary.se_second = Matrix(d, d);
    out.have_core = true;
    out.have_fourth = false;
    return out;
  }
  AnalyticMoments operator()(const SignSymmetrized& m) const {
    // x x^T is invariant under x -> -x, so all fields pass through.
    if (auto flat = as_discrete_counting(spec)) {
      AnalyticMoments out;
      out.summary = discrete_exact_summary(*flat);
      out.have_core = true;
      out.have_fourth = true;
      return out;
    }
    return analytic_moments(*m.base);
  }
  AnalyticMoments operator()(const BernoulliHypercube& m) const {
    const double dd = static_cast<double>(m.d);
    AnalyticMoments out;
    out.summary.L = 1.0;
    out.summary.N = 1.0;
    out.summary.second_moments = (1.0 / dd) * Matrix::identity(m.d);
    out.summary.fourth_mixed = Matrix(m.d, m.d, 1.0 / (dd * dd));
    out.summary.se_second = Matrix(m.d, m.d);
    out.have_core = true;
    out.have_fourth = true;
    return out;
  }
  AnalyticMoments operator()(const IsotropicGaussian& m) const {
    const double dd = static_cast<double>(m.d);
    AnalyticMoments out;
    out.summary.L = 1.0;
    out.summary.N = 1.0 + 2.0 / dd;
    out.summary.second_moments = (1.0 / dd) * Matrix::identity(m.d);
    Matrix fourth(m.d, m.d, 1.0 / (dd * dd));
    for (int i = 0; i < m.d; ++i) fourth(i, i) = 3.0 / (dd * dd);
    out.summary.fourth_mixed = std::move(fourth);
    out.summary.se_second = Matrix(m.d, m.d);
    out.have_core = true;
    out.have_fourth = true;
    return out;
  }
  AnalyticMoments operator()(const DiscreteCounting& m) const {
    AnalyticMoments out;
    out.summary = discrete_exact_summary(m);
    out.have_core = true;
    out.have_fourth = true;
    return out;
  }

 private:
  AnalyticMoments circle_mixture() const {
    AnalyticMoments out;
    out.summary.L = 1.0;
    out.summary.N = 1.0;
    out.summary.second_moments = 0.5 * Matrix::identity(2);
    out.summary.se_second = Matrix(2, 2);
    out.have_core = true;
    out.have_fourth = false;
    return out;
  }
};

AnalyticMoments analytic_moments(const MeasureSpec& spec) {
  return std::visit(AnalyticVisitor{spec}, spec.variant());
}

MomentSummary mc_estimate(const MeasureSpec& spec, long budget, SeededRng& rng) {
  if (budget < 2) throw ValidationError("moment_summary: mc_budget must be >= 2");
  const auto d = static_cast<std::size_t>(spec.dim());
  Matrix sum_m(d, d), sum_m2(d, d), sum_f2(d, d);
  double sum_l = 0.0, sum_l2 = 0.0, sum_l4 = 0.0;
  for (long k = 0; k < budget; ++k) {
    const Vector x = sample(spec, rng);
    const double n2 = norm_sq(x);
    sum_l += n2;
    sum_l2 += n2 * n2;
    sum_l4 += n2 * n2 * n2 * n2;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const double mij = x[i] * x[j];
        sum_m(i, j) += mij;
        sum_m2(i, j) += mij * mij;  // also the fourth mixed accumulator
        sum_f2(i, j) += mij * mij * mij * mij;
      }
  }
  const double b = static_cast<double>(budget);
  auto se_of = [&b](double mean, double mean_sq) {
    return std::sqrt(std::max(mean_sq - mean * mean, 0.0) / b);
  };

  MomentSummary s;
  s.L = sum_l / b;
  s.N = sum_l2 / b;
  s.se_l = se_of(s.L, sum_l2 / b);
  s.se_n = se_of(s.N, sum_l4 / b);
  s.second_moments = Matrix(d, d);
  s.se_second = Matrix(d, d);
  s.fourth_mixed = Matrix(d, d);
  s.se_fourth = Matrix(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      s.second_moments(i, j) = sum_m(i, j) / b;
      s.se_second(i, j) = se_of(s.second_moments(i, j), sum_m2(i, j) / b);
      (*s.fourth_mixed)(i, j) = sum_m2(i, j) / b;
      (*s.se_fourth)(i, j) = se_of((*s.fourth_mixed)(i, j), sum_f2(i, j) / b);
    }
  s.l_exact = s.n_exact = s.second_exact = s.fourth_exact = false;
  return s;
}

}  // namespace

MomentSummary moment_summary(const MeasureSpec& spec) {
  AnalyticMoments a = analytic_moments(spec);
  if (!a.have_core)
    throw NumericError(
        "moment_summary: measure has no closed-form moments; an mc_budget is required");
  return a.summary;
}

MomentSummary moment_summary(const MeasureSpec& spec, long mc_budget, SeededRng& rng) {
  AnalyticMoments a = analytic_moments(spec);
  if (a.have_core && a.have_fourth) return a.summary;
  MomentSummary est = mc_estimate(spec, mc_budget, rng);
  if (!a.have_core) return est;
  MomentSummary s = a.summary;
  s.fourth_mixed = est.fourth_mixed;
  s.se_fourth = est.se_fourth;
  s.fourth_exact = false;
  return s;
}

namespace {

bool tight_from_summary(const MomentSummary& s, double tol) {
  const std::size_t d = s.second_moments.rows();
  const Matrix dev =
      s.second_moments - (s.L / static_cast<double>(d)) * Matrix::identity(d);
  double band = 0.0;
  if (!s.second_exact || !s.l_exact) {
    double var = s.se_l * s.se_l / static_cast<double>(d);
    for (double e : s.se_second.data()) var += e * e;
    band = 3.0 * std::sqrt(var);
  }
  return frobenius_norm(dev) <= tol + band;
}

}  // namespace

bool is_probabilistic_tight(const MeasureSpec& spec, double tol) {
  if (tol <= 0.0) throw ValidationError("is_probabilistic_tight: tol must be positive");
  return tight_from_summary(moment_summary(spec), tol);
}

bool is_probabilistic_tight(const MeasureSpec& spec, double tol, long mc_budget,
                            SeededRng& rng) {
  if (tol <= 0.0) throw ValidationError("is_probabilistic_tight: tol must be positive");
  AnalyticMoments a = analytic_moments(spec);
  if (a.have_core) return tight_from_summary(a.summary, tol);
  return tight_from_summary(mc_estimate(spec, mc_budget, rng), tol);
}

double tight_bound(const MeasureSpec& spec, double tol) {
  if (!is_probabilistic_tight(spec, tol))
    throw NumericError("tight_bound: measure is not a probabilistic tight frame");
  return moment_summary(spec).L / static_cast<double>(spec.dim());
}

double tight_bound(const MeasureSpec& spec, double tol, long mc_budget, SeededRng& rng) {
  if (!is_probabilistic_tight(spec, tol, mc_budget, rng))
    throw NumericError("tight_bound: measure is not a probabilistic tight frame");
  return moment_summary(spec, mc_budget, rng).L / static_cast<double>(spec.dim());
}

// --- constructions -----------------------------------------------------------

MeasureSpec sign_symmetrize(const MeasureSpec& spec) {
  return MeasureSpec(SignSymmetrized{std::make_shared<const MeasureSpec>(spec)});
}

MeasureSpec group_symmetrize(const MeasureSpec& base, const std::vector<Matrix>& generators,
                             std::size_t group_cap) {
  GroupSymmetrized g;
  g.base = std::make_shared<const MeasureSpec>(base);
  g.group = group_closure(generators, group_cap);
  return MeasureSpec(std::move(g));
}

MeasureSpec canonical_dual_measure(const MeasureSpec& spec) {
  const auto flat = as_discrete_counting(spec);
  if (!flat)
    throw ValidationError("canonical_dual_measure: measure is not discrete");
  const std::size_t d = flat->support.dim();
  Matrix s(d, d);
  for (std::size_t k = 0; k < flat->support.size(); ++k) {
    const Vector& x = flat->support[k];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) s(i, j) += flat->weights[k] * x[i] * x[j];
  }
  const Matrix s_inv = symmetric_inverse(s);  // throws NumericError when singular
  std::vector<Vector> dual;
  dual.reserve(flat->support.size());
  for (const Vector& x : flat->support.vectors()) dual.push_back(matvec(s_inv, x));
  return MeasureSpec(DiscreteCounting{FiniteFrame(std::move(dual)), flat->weights});
}

bool unit_sphere_support(const MeasureSpec& spec) {
  struct V {
    bool operator()(const UniformSphere& m) const { return m.r == 1.0; }
    bool operator()(const UniformLpSphere& m) const { return m.p == 2.0 && m.r == 1.0; }
    bool operator()(const UniformLpBall&) const { return false; }
    bool operator()(const VonMisesMixture&) const { return true; }
    bool operator()(const WatsonMixture&) const { return true; }
    bool operator()(const GroupSymmetrized& m) const {
      return unit_sphere_support(*m.base);
    }
    bool operator()(const SignSymmetrized& m) const { return unit_sphere_support(*m.base); }
    bool operator()(const BernoulliHypercube&) const { return true; }
    bool operator()(const IsotropicGaussian&) const { return false; }
    bool operator()(const DiscreteCounting& m) const {
      for (const Vector& x : m.support.vectors())
        if (std::abs(norm(x) - 1.0) > 1e-9) return false;
      return true;
    }
  };
  return std::visit(V{}, spec.variant());
}

// --- JSON -------------------------------------------------------------------

namespace {

using nlohmann::json;

double parse_p(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity")
      return std::numeric_limits<double>::infinity();
    throw ValidationError("measure spec: bad p value '" + s + "'");
  }
  return j.get<double>();
}

FiniteFrame frame_from_json_rows(const json& rows) {
  if (!rows.is_array() || rows.empty())
    throw ValidationError("measure spec: frame must be a non-empty array of rows");
  std::vector<Vector> vecs;
  for (const json& row : rows) {
    if (!row.is_array()) throw ValidationError("measure spec: frame row must be an array");
    vecs.push_back(row.get<Vector>());
  }
  return FiniteFrame(std::move(vecs));
}

FiniteFrame load_frame(const json& j, const char* inline_key, const char* csv_key,
                       const std::string& base_dir) {
  if (j.contains(inline_key)) return frame_from_json_rows(j.at(inline_key));
  if (j.contains(csv_key)) {
    std::filesystem::path p = j.at(csv_key).get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    return read_frame_csv_file(p.string());
  }
  throw ValidationError(std::string("measure spec: missing '") + inline_key + "' or '" +
                        csv_key + "'");
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("measure spec: bad matrix");
  if (j.front().is_array()) {
    const std::size_t d = j.size();
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      const json& row = j.at(i);
      if (!row.is_array() || row.size() != d)
        throw ValidationError("measure spec: matrix rows must form a square");
      for (std::size_t k = 0; k < d; ++k) m(i, k) = row.at(k).get<double>();
    }
    return m;
  }
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(double(j.size()))));
  if (d * d != j.size())
    throw ValidationError("measure spec: flat matrix length is not a perfect square");
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) m(i, k) = j.at(i * d + k).get<double>();
  return m;
}

json frame_to_json(const FiniteFrame& frame) {
  json rows = json::array();
  for (const Vector& v : frame.vectors()) rows.push_back(v);
  return rows;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

MeasureSpec measure_spec_from_json(const nlohmann::json& j, const std::string& base_dir) {
  if (!j.is_object() || !j.contains("type"))
    throw ValidationError("measure spec: expected an object with a 'type' key");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "uniform_sphere")
      return MeasureSpec(UniformSphere{j.at("d").get<int>(), j.value("r", 1.0)});
    if (type == "uniform_lp_sphere")
      return MeasureSpec(
          UniformLpSphere{j.at("d").get<int>(), parse_p(j.at("p")), j.value("r", 1.0)});
    if (type == "uniform_lp_ball")
      return MeasureSpec(
          UniformLpBall{j.at("d").get<int>(), parse_p(j.at("p")), j.value("r", 1.0)});
    if (type == "von_mises_mixture")
      return MeasureSpec(VonMisesMixture{load_frame(j, "funtf", "funtf_csv", base_dir),
                                         j.at("kappa").get<double>()});
    if (type == "watson_mixture")
      return MeasureSpec(WatsonMixture{load_frame(j, "funtf", "funtf_csv", base_dir),
                                       j.at("kappa").get<double>()});
    if (type == "group_symmetrized") {
      std::vector<Matrix> generators;
      for (const json& g : j.at("generators")) generators.push_back(matrix_from_json(g));
      return group_symmetrize(measure_spec_from_json(j.at("base"), base_dir), generators);
    }
    if (type == "sign_symmetrized")
      return sign_symmetrize(measure_spec_from_json(j.at("base"), base_dir));
    if (type == "bernoulli_hypercube")
      return MeasureSpec(BernoulliHypercube{j.at("d").get<int>()});
    if (type == "isotropic_gaussian")
      return MeasureSpec(IsotropicGaussian{j.at("d").get<int>()});
    if (type == "discrete_counting") {
      DiscreteCounting dc{load_frame(j, "frame", "frame_csv", base_dir), {}};
      if (j.contains("weights")) dc.weights = j.at("weights").get<std::vector<double>>();
      return MeasureSpec(std::move(dc));
    }
  } catch (const json::exception& e) {
    throw ValidationError("measure spec '" + type + "': " + e.what());
  }
  throw ValidationError("measure spec: unknown type '" + type + "'");
}

nlohmann::json measure_spec_to_json(const MeasureSpec& spec) {
  struct V {
    json operator()(const UniformSphere& m) const {
      return {{"type", "uniform_sphere"}, {"d", m.d}, {"r", m.r}};
    }
    json operator()(const UniformLpSphere& m) const {
      json out{{"type", "uniform_lp_sphere"}, {"d", m.d}, {"r", m.r}};
      if (std::isinf(m.p))
        out["p"] = "inf";
      else
        out["p"] = m.p;
      return out;
    }
    json operator()(const UniformLpBall& m) const {
      json out{{"type", "uniform_lp_ball"}, {"d", m.d}, {"r", m.r}};
      if (std::isinf(m.p))
        out["p"] = "inf";
      else
        out["p"] = m.p;
      return out;
    }
    json operator()(const VonMisesMixture& m) const {
      return {{"type", "von_mises_mixture"}, {"funtf", frame_to_json(m.funtf)},
              {"kappa", m.kappa}};
    }
    json operator()(const WatsonMixture& m) const {
      return {{"type", "watson_mixture"}, {"funtf", frame_to_json(m.funtf)},
              {"kappa", m.kappa}};
    }
    json operator()(const GroupSymmetrized& m) const {
      json gens = json::array();
      for (const Matrix& g : m.group) gens.push_back(matrix_to_json(g));
      return {{"type", "group_symmetrized"}, {"base", measure_spec_to_json(*m.base)},
              {"generators", gens}};
    }
    json operator()(const SignSymmetrized& m) const {
      return {{"type", "sign_symmetrized"}, {"base", measure_spec_to_json(*m.base)}};
    }
    json operator()(const BernoulliHypercube& m) const {
      return {{"type", "bernoulli_hypercube"}, {"d", m.d}};
    }
    json operator()(const IsotropicGaussian& m) const {
      return {{"type", "isotropic_gaussian"}, {"d", m.d}};
    }
    json operator()(const DiscreteCounting& m) const {
      return {{"type", "discrete_counting"}, {"frame", frame_to_json(m.support)},
              {"weights", m.weights}};
    }
  };
  return std::visit(V{}, spec.variant());
}

}  // namespace framelab
