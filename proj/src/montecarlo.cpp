#include "framelab/montecarlo.hpp"

#include <cmath>
#include <sstream>
#include <thread>

#include "framelab/csv.hpp"
#include "framelab/errors.hpp"

namespace framelab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_tight_summary(const MomentSummary& s, std::size_t index) {
  const std::size_t d = s.second_moments.rows();
  const Matrix dev =
      s.second_moments - (s.L / static_cast<double>(d)) * Matrix::identity(d);
  double band = 0.0;
  if (!s.second_exact || !s.l_exact) {
    double var = s.se_l * s.se_l / static_cast<double>(d);
    for (double e : s.se_second.data()) var += e * e;
    band = 3.0 * std::sqrt(var);
  }
  if (frobenius_norm(dev) > 1e-9 + band)
    throw NumericError("closed_form_error: spec " + std::to_string(index) +
                       " is not a probabilistic tight frame");
}

double mean_l_tilde(const std::vector<MomentSummary>& summaries) {
  double lt = 0.0;
  for (const MomentSummary& s : summaries) lt += s.L * s.L;
  return lt / static_cast<double>(summaries.size());
}

int resolve_threads(int threads, int trials) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = static_cast<int>(hw == 0 ? 1 : std::min(hw, 8u));
  }
  return std::max(1, std::min(threads, trials));
}

}  // namespace

double closed_form_error(const std::vector<MomentSummary>& summaries, std::size_t n,
                         std::size_t d) {
  if (summaries.size() != n || n == 0)
    throw ValidationError("closed_form_error: summary count must equal n >= 1");
  double big_n = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    require_tight_summary(summaries[k], k);
    if (!std::isfinite(summaries[k].N))
      throw ValidationError("closed_form_error: non-finite fourth moment");
    big_n += summaries[k].N;
  }
  big_n /= static_cast<double>(n);
  return (big_n - mean_l_tilde(summaries) / static_cast<double>(d)) /
         static_cast<double>(n);
}

Matrix per_entry_error(const std::vector<MomentSummary>& summaries, std::size_t n,
                       std::size_t d) {
  if (summaries.size() != n || n == 0)
    throw ValidationError("per_entry_error: summary count must equal n >= 1");
  Matrix mean_fourth(d, d);
  for (std::size_t k = 0; k < n; ++k) {
    require_tight_summary(summaries[k], k);
    if (!summaries[k].fourth_mixed)
      throw NumericError("per_entry_error: missing fourth mixed moments");
    mean_fourth = mean_fourth + *summaries[k].fourth_mixed;
  }
  mean_fourth = (1.0 / static_cast<double>(n)) * mean_fourth;
  const double lt = mean_l_tilde(summaries);
  Matrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double diag = i == j ? lt / static_cast<double>(d * d) : 0.0;
      out(i, j) = (mean_fourth(i, j) - diag) / static_cast<double>(n);
    }
  return out;
}

GeneralMomentBundle bundle_from_summaries(const std::vector<MomentSummary>& summaries) {
  GeneralMomentBundle b;
  for (const MomentSummary& s : summaries) {
    b.frame_operators.push_back(s.second_moments);
    b.fourth_norms.push_back(s.N);
  }
  return b;
}

Matrix mixed_operator(const GeneralMomentBundle& bundle) {
  const std::size_t d = bundle.frame_operators.front().rows();
  Matrix s(d, d);
  for (const Matrix& sk : bundle.frame_operators) s = s + sk;
  return (1.0 / static_cast<double>(bundle.frame_operators.size())) * s;
}

Matrix squared_entry_mean(const GeneralMomentBundle& bundle) {
  const std::size_t d = bundle.frame_operators.front().rows();
  Matrix s(d, d);
  for (const Matrix& sk : bundle.frame_operators)
    for (std::size_t i = 0; i < s.data().size(); ++i)
      s.data()[i] += sk.data()[i] * sk.data()[i];
  return (1.0 / static_cast<double>(bundle.frame_operators.size())) * s;
}

double entry_abs_sum(const Matrix& m) {
  double s = 0.0;
  for (double e : m.data()) s += std::abs(e);
  return s;
}

double closed_form_error_general(const GeneralMomentBundle& bundle, std::size_t n) {
  if (bundle.frame_operators.size() != n || bundle.fourth_norms.size() != n || n == 0)
    throw ValidationError("closed_form_error_general: bundle size must equal n >= 1");
  double big_n = 0.0;
  for (double nk : bundle.fourth_norms) {
    if (!std::isfinite(nk))
      throw ValidationError("closed_form_error_general: non-finite fourth moment");
    big_n += nk;
  }
  big_n /= static_cast<double>(n);
  return (big_n - entry_abs_sum(squared_entry_mean(bundle))) / static_cast<double>(n);
}

namespace {

// Trial results stored per trial and reduced in trial order, so the outcome
// does not depend on how trials were distributed over threads.
struct TrialTable {
  std::vector<double> mse;      // [trials]
  std::vector<double> entries;  // [trials * d * d]
};

ExperimentResult reduce_trials(const TrialTable& table, std::size_t n, std::size_t d,
                               int trials) {
  ExperimentResult out;
  out.n = n;
  out.d = d;
  out.trials = trials;
  const auto t = static_cast<double>(trials);

  double sum = 0.0;
  for (double v : table.mse) sum += v;
  out.empirical_mse = sum / t;

  if (trials > 1) {
    double ss = 0.0;
    for (double v : table.mse) ss += (v - out.empirical_mse) * (v - out.empirical_mse);
    out.standard_error = std::sqrt(ss / (t - 1.0)) / std::sqrt(t);
  }

  out.per_entry_empirical = Matrix(d, d);
  for (int trial = 0; trial < trials; ++trial)
    for (std::size_t e = 0; e < d * d; ++e)
      out.per_entry_empirical.data()[e] += table.entries[trial * d * d + e];
  for (double& e : out.per_entry_empirical.data()) e /= t;
  return out;
}

void run_trial_range(const std::vector<MeasureSpec>& specs, const Matrix& target,
                     std::uint64_t seed, int first, int last, std::size_t d,
                     TrialTable& table) {
  for (int t = first; t < last; ++t) {
    SeededRng rng(seed, static_cast<std::uint64_t>(t));
    Matrix acc(d, d);
    for (const MeasureSpec& spec : specs) {
      const Vector x = sample(spec, rng);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) acc(i, j) += x[i] * x[j];
    }
    const double inv_n = 1.0 / static_cast<double>(specs.size());
    double mse = 0.0;
    for (std::size_t e = 0; e < d * d; ++e) {
      const double dev = acc.data()[e] * inv_n - target.data()[e];
      const double sq = dev * dev;
      table.entries[t * d * d + e] = sq;
      mse += sq;
    }
    table.mse[t] = mse;
  }
}

}  // namespace

ExperimentResult run_experiment(const ConvergenceExperiment& exp, int threads) {
  if (exp.specs.empty()) throw ValidationError("run_experiment: no specs");
  if (exp.trials < 1) throw ValidationError("run_experiment: trials must be >= 1");
  const std::size_t n = exp.specs.size();
  const auto d = static_cast<std::size_t>(exp.specs.front().dim());
  for (const MeasureSpec& s : exp.specs)
    if (static_cast<std::size_t>(s.dim()) != d)
      throw ValidationError("run_experiment: specs have mixed dimensions");

  // Moment summaries feed the target and the closed form. Streams at and
  // above `trials` keep any estimation draws disjoint from the trial draws.
  std::vector<MomentSummary> summaries;
  summaries.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (exp.moment_budget) {
      SeededRng rng(exp.seed, static_cast<std::uint64_t>(exp.trials) + k);
      summaries.push_back(moment_summary(exp.specs[k], *exp.moment_budget, rng));
    } else {
      summaries.push_back(moment_summary(exp.specs[k]));
    }
  }

  Matrix target(d, d);
  double closed = 0.0;
  std::optional<Matrix> per_entry_closed;
  if (exp.target == ConvergenceTarget::kScaledIdentity) {
    double l = 0.0;
    for (const MomentSummary& s : summaries) l += s.L;
    l /= static_cast<double>(n);
    target = (l / static_cast<double>(d)) * Matrix::identity(d);
    closed = closed_form_error(summaries, n, d);
    bool have_fourth = true;
    for (const MomentSummary& s : summaries) have_fourth &= s.fourth_mixed.has_value();
    if (have_fourth) per_entry_closed = per_entry_error(summaries, n, d);
  } else {
    const GeneralMomentBundle bundle = bundle_from_summaries(summaries);
    target = mixed_operator(bundle);
    closed = closed_form_error_general(bundle, n);
    bool have_fourth = true;
    for (const MomentSummary& s : summaries) have_fourth &= s.fourth_mixed.has_value();
    if (have_fourth) {
      Matrix mean_fourth(d, d);
      for (const MomentSummary& s : summaries) mean_fourth = mean_fourth + *s.fourth_mixed;
      mean_fourth = (1.0 / static_cast<double>(n)) * mean_fourth;
      const Matrix st = squared_entry_mean(bundle);
      Matrix pe(d, d);
      for (std::size_t e = 0; e < d * d; ++e)
        pe.data()[e] = (mean_fourth.data()[e] - st.data()[e]) / static_cast<double>(n);
      per_entry_closed = std::move(pe);
    }
  }

  TrialTable table;
  table.mse.assign(exp.trials, 0.0);
  table.entries.assign(static_cast<std::size_t>(exp.trials) * d * d, 0.0);

  const int workers = resolve_threads(threads, exp.trials);
  if (workers == 1) {
    run_trial_range(exp.specs, target, exp.seed, 0, exp.trials, d, table);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const int first = exp.trials * w / workers;
      const int last = exp.trials * (w + 1) / workers;
      pool.emplace_back(run_trial_range, std::cref(exp.specs), std::cref(target),
                        exp.seed, first, last, d, std::ref(table));
    }
    for (std::thread& th : pool) th.join();
  }

  ExperimentResult out = reduce_trials(table, n, d, exp.trials);
  out.closed_form = closed;
  out.per_entry_closed_form = std::move(per_entry_closed);
  return out;
}

double empirical_pfp(const MeasureSpec& spec, long sample_count, SeededRng& rng) {
  if (sample_count < 2) throw ValidationError("empirical_pfp: needs at least 2 samples");
  const auto d = static_cast<std::size_t>(spec.dim());
  Matrix gram_sum(d, d);
  double energy_sum = 0.0;
  double fourth_sum = 0.0;
  for (long k = 0; k < sample_count; ++k) {
    const Vector y = sample(spec, rng);
    const double n2 = norm_sq(y);
    energy_sum += n2;
    fourth_sum += n2 * n2;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) gram_sum(i, j) += y[i] * y[j];
  }
  // sum_{i<j} <y_i,y_j>^2 = (||sum y y^T||_F^2 - sum ||y||^4) / 2.
  const double m = static_cast<double>(sample_count);
  const double gf = frobenius_norm(gram_sum);
  const double numerator = (gf * gf - fourth_sum) / (m * (m - 1.0));
  const double mean_energy = energy_sum / m;
  if (mean_energy == 0.0) throw NumericError("empirical_pfp: all samples are zero");
  return numerator / (mean_energy * mean_energy);
}

double pfp_discrete(const MeasureSpec& spec) {
  const auto flat = as_discrete_counting(spec);
  if (!flat) throw ValidationError("pfp_discrete: measure is not discrete");
  double energy = 0.0;
  for (std::size_t i = 0; i < flat->support.size(); ++i) {
    if (norm_sq(flat->support[i]) == 0.0)
      throw NumericError("pfp_discrete: support contains the zero vector");
    energy += flat->weights[i] * norm_sq(flat->support[i]);
  }
  double num = 0.0;
  for (std::size_t i = 0; i < flat->support.size(); ++i)
    for (std::size_t j = 0; j < flat->support.size(); ++j) {
      const double g = dot(flat->support[i], flat->support[j]);
      num += flat->weights[i] * flat->weights[j] * g * g;
    }
  return num / (energy * energy);
}

namespace {

void run_fourier_range(int d, int n, std::uint64_t seed, int first, int last,
                       const std::vector<double>& cos_table,
                       const std::vector<double>& sin_table, TrialTable& table) {
  const auto dd = static_cast<std::size_t>(d);
  for (int t = first; t < last; ++t) {
    SeededRng rng(seed, static_cast<std::uint64_t>(t));
    Matrix h_re(dd, dd), h_im(dd, dd);
    for (int k = 0; k < n; ++k) {
      const auto j = rng.uniform_below(static_cast<std::uint64_t>(d));
      // (z_j z_j^*)(a,b) = exp(-2 pi i j(a-b)/d) / d.
      for (std::size_t a = 0; a < dd; ++a)
        for (std::size_t b = 0; b < dd; ++b) {
          const std::size_t m = static_cast<std::size_t>(
              ((static_cast<long long>(a) - static_cast<long long>(b)) *
                   static_cast<long long>(j) % d + d) % d);
          h_re(a, b) += cos_table[m];
          h_im(a, b) -= sin_table[m];
        }
    }
    const double inv_nd = 1.0 / (static_cast<double>(n) * d);
    double mse = 0.0;
    for (std::size_t a = 0; a < dd; ++a)
      for (std::size_t b = 0; b < dd; ++b) {
        const double target = a == b ? 1.0 / d : 0.0;
        const double re = h_re(a, b) * inv_nd - target;
        const double im = h_im(a, b) * inv_nd;
        const double sq = re * re + im * im;
        table.entries[t * dd * dd + a * dd + b] = sq;
        mse += sq;
      }
    table.mse[t] = mse;
  }
}

}  // namespace

ExperimentResult fourier_row_experiment(int d, int n, int trials, std::uint64_t seed,
                                        int threads) {
  if (d < 1) throw ValidationError("fourier_row_experiment: d must be >= 1");
  if (n < 1 || trials < 1)
    throw ValidationError("fourier_row_experiment: n and trials must be >= 1");
  const auto dd = static_cast<std::size_t>(d);

  std::vector<double> cos_table(dd), sin_table(dd);
  for (std::size_t m = 0; m < dd; ++m) {
    cos_table[m] = std::cos(2.0 * kPi * static_cast<double>(m) / d);
    sin_table[m] = std::sin(2.0 * kPi * static_cast<double>(m) / d);
  }

  TrialTable table;
  table.mse.assign(trials, 0.0);
  table.entries.assign(static_cast<std::size_t>(trials) * dd * dd, 0.0);

  const int workers = resolve_threads(threads, trials);
  if (workers == 1) {
    run_fourier_range(d, n, seed, 0, trials, cos_table, sin_table, table);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      const int first = trials * w / workers;
      const int last = trials * (w + 1) / workers;
      pool.emplace_back(run_fourier_range, d, n, seed, first, last,
                        std::cref(cos_table), std::cref(sin_table), std::ref(table));
    }
    for (std::thread& th : pool) th.join();
  }

  ExperimentResult out = reduce_trials(table, static_cast<std::size_t>(n), dd, trials);
  out.closed_form = (1.0 - 1.0 / d) / static_cast<double>(n);
  Matrix pe(dd, dd, 1.0 / (static_cast<double>(n) * d * d));
  for (std::size_t a = 0; a < dd; ++a) pe(a, a) = 0.0;
  out.per_entry_closed_form = std::move(pe);
  return out;
}

std::string experiment_csv_header() {
  return "n,d,trials,empirical_mse,standard_error,closed_form";
}

std::string experiment_csv_row(const ExperimentResult& r) {
  std::ostringstream out;
  out << r.n << ',' << r.d << ',' << r.trials << ',' << format_double(r.empirical_mse)
      << ',' << format_double(r.standard_error) << ',' << format_double(r.closed_form);
  return out.str();
}

nlohmann::json experiment_report_json(const ExperimentResult& r) {
  auto matrix_rows = [](const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    return rows;
  };
  nlohmann::json j{{"n", r.n},
                   {"d", r.d},
                   {"trials", r.trials},
                   {"empirical_mse", r.empirical_mse},
                   {"standard_error", r.standard_error},
                   {"closed_form", r.closed_form},
                   {"per_entry_empirical", matrix_rows(r.per_entry_empirical)}};
  if (r.per_entry_closed_form)
    j["per_entry_closed_form"] = matrix_rows(*r.per_entry_closed_form);
  else
    j["per_entry_closed_form"] = nullptr;
  return j;
}

}  // namespace framelab
