#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "framelab/linalg.hpp"
#include "framelab/measures.hpp"

namespace framelab {

enum class ConvergenceTarget { kScaledIdentity, kMixedOperator };

// Draws X_k ~ specs[k] independently per trial and measures the squared
// Frobenius deviation of (1/n) sum_k X_k X_k^T from the target.
struct ConvergenceExperiment {
  std::vector<MeasureSpec> specs;
  int trials = 1;
  ConvergenceTarget target = ConvergenceTarget::kScaledIdentity;
  std::uint64_t seed = 0;
  // Sample budget for moment estimation when a spec lacks closed forms.
  std::optional<long> moment_budget;
};

struct ExperimentResult {
  std::size_t n = 0;
  std::size_t d = 0;
  int trials = 0;
  double empirical_mse = 0.0;
  double standard_error = 0.0;
  double closed_form = 0.0;
  Matrix per_entry_empirical;
  std::optional<Matrix> per_entry_closed_form;
};

// (1/n)(N - Ltilde/d) with N = mean N_k and Ltilde = mean L_k^2. Every
// summary must describe a probabilistic tight frame.
double closed_form_error(const std::vector<MomentSummary>& summaries, std::size_t n,
                         std::size_t d);

// Entry (i,j) = (1/n)(M(i,j) - Ltilde/d^2 delta_ij); entries sum to
// closed_form_error. Requires fourth mixed moments on every summary.
Matrix per_entry_error(const std::vector<MomentSummary>& summaries, std::size_t n,
                       std::size_t d);

// Moment data for measures that need not be tight.
struct GeneralMomentBundle {
  std::vector<Matrix> frame_operators;  // S_k = second-moment matrices
  std::vector<double> fourth_norms;     // N_k
};

GeneralMomentBundle bundle_from_summaries(const std::vector<MomentSummary>& summaries);
Matrix mixed_operator(const GeneralMomentBundle& bundle);          // mean of S_k
Matrix squared_entry_mean(const GeneralMomentBundle& bundle);      // Stilde
double entry_abs_sum(const Matrix& m);                             // ||.||_1 entrywise

// (1/n)(N - ||Stilde||_1), the mean squared Frobenius deviation from the
// mixed operator. The paper's d^2 normalization of the ||Stilde||_1 term is
// dropped: the exhaustive-enumeration oracle and the reduction to the tight
// case both confirm the unnormalized form.
double closed_form_error_general(const GeneralMomentBundle& bundle, std::size_t n);

ExperimentResult run_experiment(const ConvergenceExperiment& exp, int threads = 0);

// U-statistic estimate of the probabilistic frame potential: pairwise
// inner-product kernel over distinct indices, normalized by the squared
// mean energy.
double empirical_pfp(const MeasureSpec& spec, long sample_count, SeededRng& rng);

// Exact potential of a finite measure; the support must exclude zero.
double pfp_discrete(const MeasureSpec& spec);

// I.i.d. uniformly chosen rows of the d x d unitary DFT matrix; Hermitian
// empirical operator against (1/d) I with the complex closed form
// (1/n)(1 - 1/d).
ExperimentResult fourier_row_experiment(int d, int n, int trials, std::uint64_t seed,
                                        int threads = 0);

std::string experiment_csv_header();
std::string experiment_csv_row(const ExperimentResult& result);
nlohmann::json experiment_report_json(const ExperimentResult& result);

}  // namespace framelab
