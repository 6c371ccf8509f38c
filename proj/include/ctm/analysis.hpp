#pragma once

// Statistics over runtimes and distributions: exponential runtime-tail fit,
// missed-mass bound, agreement between distributions, the randomness
// posterior, climbers, concatenation probes and per-length laws.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctm/distribution.hpp"
#include "ctm/filters.hpp"
#include "ctm/machine.hpp"

namespace ctm {

struct RuntimeHistogram {
  std::map<std::uint64_t, Count> counts;  // halting steps -> machines
  std::uint64_t cutoff = 0;               // largest observed step count
  Count sample_size = 0;                  // machines run, halting or not

  void add(std::uint64_t steps, Count weight = 1);
  Count halting() const;
  /// (k, P(S=k | S <= cutoff)) for k = 1..cutoff, empty bins included.
  std::vector<std::pair<double, double>> conditional() const;
};

/// Runtimes of `samples` machines drawn with the campaign sampler, blank 0.
RuntimeHistogram sample_runtimes(int n_states, Mode mode, std::uint64_t samples,
                                 std::uint64_t seed, std::uint64_t cutoff);
/// Runtimes of every machine of the space, blank 0.
RuntimeHistogram exhaustive_runtimes(int n_states, Mode mode, std::uint64_t cutoff);

struct ExpFit {
  double alpha = 0;
  double lambda = 0;
  double rss = 0;
  int iterations = 0;
};

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, ExpFit last) : std::runtime_error(what), last_(last) {}
  const ExpFit& last() const { return last_; }

 private:
  ExpFit last_;
};

inline constexpr std::pair<double, double> kDefaultFitStart{0.4, 0.25};
inline constexpr int kFitIterationCap = 200;

/// Least squares of alpha * exp(-lambda * x) by damped Gauss-Newton (step
/// halving until the residual drops), converged when the relative
/// parameter step falls below 1e-10.
ExpFit fit_exponential(const std::vector<std::pair<double, double>>& points,
                       std::pair<double, double> start = kDefaultFitStart);
ExpFit fit_runtime_tail(const RuntimeHistogram& h,
                        std::pair<double, double> start = kDefaultFitStart);

/// log10 of exp(-cutoff * lambda), the fitted chance of halting later.
double missed_mass_log10(const ExpFit& fit, std::uint64_t cutoff);

struct Outlier {
  std::string string;
  double t = 0;  // externally studentized residual
};

struct Agreement {
  std::size_t shared = 0;
  double pearson_r2 = 0;
  double spearman_rho = 0;
  // Regression of b's probabilities on a's: |t| > 20, 5 < |t| <= 20 and
  // 2 < |t| <= 5, each sorted by decreasing |t|.
  std::vector<Outlier> above_20;
  std::vector<Outlier> from_5_to_20;
  std::vector<Outlier> from_2_to_5;
};

class MetricError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

Agreement agreement(const Distribution& a, const Distribution& b);

/// 1 / (2^(2l) P(s) + 1) with l = |s|; 1 when s is absent.
Real bayes_random_posterior(const Distribution& d, std::string_view s);

/// Strings longer than their successor when strings are listed by
/// decreasing probability. Within a tie the order is decreasing
/// lexicographic, so each symmetry group reports its smallest member.
std::vector<std::string> climbers(const ComplexityTable& table, std::size_t limit = 0);

struct Probes {
  std::optional<Real> repetition;      // P(s s)
  std::optional<Real> symmetrization;  // P(s reverse(s))
  std::optional<Real> completion;      // P(s 0^|s|)
};

Probes probes(const Distribution& d, std::string_view s);

struct ProbeStat {
  double mean = 0;
  double sd = 0;  // sample standard deviation
  std::size_t present = 0;
  std::size_t absent = 0;
};

struct ProbeSummary {
  int length = 0;
  ProbeStat repetition;
  ProbeStat symmetrization;
  ProbeStat completion;
  ProbeStat all_doubled;  // every string of length 2l in d
};

/// Over all strings of each length; absent probe strings are counted, not
/// averaged.
std::vector<ProbeSummary> probe_summary(const Distribution& d, int min_length = 3,
                                        int max_length = 6);

struct LengthRow {
  int length = 0;
  std::size_t present = 0;
  double coverage = 0;    // present / 2^length
  Real mass = 0;          // sum of P over strings of this length
  Real reference = 0;     // 2^-length
  double zeros_sd = 0;    // sd of the number of 0s, weighted by d within the length
  double binomial_sd = 0; // sqrt(length) / 2
};

std::vector<LengthRow> length_laws(const Distribution& d);

// Plot-ready tab-separated tables with a header row.
std::string runtime_tsv(const RuntimeHistogram& h, const std::optional<ExpFit>& fit);
std::string length_laws_tsv(const std::vector<LengthRow>& rows);
std::string probe_summary_tsv(const std::vector<ProbeSummary>& rows);
std::string format_number(double x, int significant = 10);

}  // namespace ctm
