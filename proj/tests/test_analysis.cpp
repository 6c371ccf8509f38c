#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ctm/analysis.hpp"
#include "ctm/campaign.hpp"
#include "oracle.hpp"

using namespace ctm;

namespace {

const Distribution& dist(int n) {
  static std::map<int, Distribution> cache;
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache
             .emplace(n, build_distribution(
                             complete_reduced(sweep(CampaignConfig::whole(n, Mode::kReduced)))))
             .first;
  return it->second;
}

std::vector<std::pair<double, double>> synthetic(double alpha, double lambda, int points) {
  std::vector<std::pair<double, double>> v;
  for (int k = 1; k <= points; ++k) v.emplace_back(k, alpha * std::exp(-lambda * k));
  return v;
}

}  // namespace

TEST(Fit, RecoversNoiselessParameters) {
  for (auto [alpha, lambda] : {std::pair{1.0, 0.5}, std::pair{1.12, 0.793}, std::pair{0.3, 0.1}}) {
    const ExpFit f = fit_exponential(synthetic(alpha, lambda, 60));
    EXPECT_LT(std::fabs(f.alpha - alpha) / alpha, 1e-6);
    EXPECT_LT(std::fabs(f.lambda - lambda) / lambda, 1e-6);
    EXPECT_LE(f.iterations, kFitIterationCap);
  }
}

TEST(Fit, RejectsDegenerateInput) {
  EXPECT_THROW(fit_exponential({{1, 0.5}}), FitError);
  EXPECT_THROW(fit_exponential(synthetic(1, 0.5, 10), {-1, 0.5}), FitError);
}

TEST(Fit, ThreeStateExhaustiveHistogramMatchesBruteForce) {
  const RuntimeHistogram h = exhaustive_runtimes(3, Mode::kFull, 107);
  std::map<std::uint64_t, Count> brute;
  // The tree histogram must agree with direct runs of every machine.
  Simulator sim(107);
  for (Index i = 0; i < full_space_size(3); ++i) {
    std::uint64_t steps = 0;
    if (sim.classify(decode_full(3, i), 0, &steps) == OutcomeKind::kHalted) ++brute[steps];
  }
  EXPECT_EQ(h.counts, brute);
  EXPECT_EQ(h.sample_size, full_space_size(3));
  EXPECT_EQ(h.cutoff, 21u);
  const ExpFit f = fit_runtime_tail(h);
  EXPECT_GT(f.lambda, 0);
  EXPECT_TRUE(std::isfinite(f.rss));
}

TEST(Fit, ConditionalHistogramSumsToOne) {
  const RuntimeHistogram h = sample_runtimes(4, Mode::kFull, 5000, 1, 200);
  double sum = 0;
  for (const auto& [k, p] : h.conditional()) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(h.sample_size, 5000u);
}

TEST(MissedMass, LogSpace) {
  ExpFit f;
  f.lambda = 0.793;
  EXPECT_NEAR(missed_mass_log10(f, 500), -172.2, 0.05);
  f.lambda = 0;
  EXPECT_EQ(missed_mass_log10(f, 500), 0);
}

TEST(Agreement, SelfAgreementIsPerfect) {
  const Agreement g = agreement(dist(3), dist(3));
  EXPECT_NEAR(g.pearson_r2, 1, 1e-12);
  EXPECT_NEAR(g.spearman_rho, 1, 1e-12);
  EXPECT_TRUE(g.above_20.empty());
  EXPECT_TRUE(g.from_5_to_20.empty());
  EXPECT_TRUE(g.from_2_to_5.empty());
}

TEST(Agreement, IndependentReference) {
  // Recomputes Pearson r^2 and Spearman rho over the shared strings.
  const Distribution& a = dist(2);
  const Distribution& b = dist(3);
  std::vector<long double> x, y;
  for (const auto& [s, p] : a.probabilities())
    if (auto q = b.probability(s)) {
      x.push_back(p);
      y.push_back(*q);
    }
  auto pearson = [](const std::vector<long double>& u, const std::vector<long double>& v) {
    long double mu = 0, mv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) mu += u[i], mv += v[i];
    mu /= u.size();
    mv /= v.size();
    long double suv = 0, suu = 0, svv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      suv += (u[i] - mu) * (v[i] - mv);
      suu += (u[i] - mu) * (u[i] - mu);
      svv += (v[i] - mv) * (v[i] - mv);
    }
    return static_cast<double>(suv / std::sqrt(suu * svv));
  };
  auto ranks = [](const std::vector<long double>& v) {
    std::vector<long double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::size_t greater = 0, equal = 0;
      for (std::size_t j = 0; j < v.size(); ++j) greater += v[j] > v[i], equal += v[j] == v[i];
      r[i] = greater + (equal + 1) / 2.0L;
    }
    return r;
  };
  const Agreement g = agreement(a, b);
  EXPECT_EQ(g.shared, x.size());
  const double r = pearson(x, y);
  EXPECT_NEAR(g.pearson_r2, r * r, 1e-12);
  EXPECT_NEAR(g.spearman_rho, pearson(ranks(x), ranks(y)), 1e-12);
}

TEST(Agreement, OutlierIsFlagged) {
  std::map<std::string, Count> a, b;
  std::mt19937 rng(5);
  for (int i = 0; i < 64; ++i) {
    std::string s;
    for (int k = 0; k < 6; ++k) s += static_cast<char>('0' + ((i >> k) & 1));
    const Count c = 1000 + rng() % 1000;
    a[s] = c;
    b[s] = c * 2 + rng() % 3;
  }
  b["000000"] *= 10;
  const Agreement g = agreement(Distribution(a, 0, Normalization::kHalting),
                                Distribution(b, 0, Normalization::kHalting));
  ASSERT_FALSE(g.above_20.empty());
  EXPECT_EQ(g.above_20.front().string, "000000");
}

TEST(Agreement, TooFewStrings) {
  const Distribution a({{"0", 1}, {"1", 2}}, 0, Normalization::kHalting);
  EXPECT_THROW(agreement(a, a), MetricError);
}

TEST(Bayes, Formula) {
  const Distribution& d = dist(3);
  const Real p = *d.probability("0101");
  EXPECT_NEAR(static_cast<double>(bayes_random_posterior(d, "0101")),
              static_cast<double>(1 / (256 * p + 1)), 1e-15);
  EXPECT_EQ(bayes_random_posterior(d, std::string(30, '1')), 1);
  EXPECT_THROW(bayes_random_posterior(d, "2"), std::domain_error);
}

TEST(Bayes, MonotoneInProbabilityAndLength) {
  const Distribution d =
      Distribution::from_probabilities({{"00", 0.2L}, {"01", 0.1L}, {"000", 0.1L}});
  EXPECT_LT(bayes_random_posterior(d, "00"), bayes_random_posterior(d, "01"));
  // 2^(2l) P grows with l, so at equal probability the longer string is
  // less likely to be random.
  EXPECT_GT(bayes_random_posterior(d, "01"), bayes_random_posterior(d, "000"));
}

TEST(Climbers, Definition) {
  const ComplexityTable t = rank_table(dist(3));
  const std::vector<std::string> c = climbers(t);
  ASSERT_FALSE(c.empty());
  // Re-derive: next string under decreasing probability, ties by decreasing string.
  std::vector<ComplexityEntry> e = t.entries();
  std::stable_sort(e.begin(), e.end(), [](const ComplexityEntry& a, const ComplexityEntry& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return a.string > b.string;
  });
  std::vector<std::string> expected;
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    if (e[i].string.size() > e[i + 1].string.size()) expected.push_back(e[i].string);
  EXPECT_EQ(c, expected);
  EXPECT_EQ(climbers(t, 3), std::vector<std::string>(expected.begin(), expected.begin() + 3));
}

TEST(Climbers, LengthSortedTableHasNone) {
  const Distribution d =
      Distribution::from_probabilities({{"0", 0.4L}, {"00", 0.3L}, {"000", 0.2L}, {"0000", 0.1L}});
  EXPECT_TRUE(climbers(rank_table(d)).empty());
}

TEST(Probes, AreLookups) {
  const Distribution& d = dist(2);
  for (const auto& [s, p] : d.probabilities()) {
    const Probes pr = probes(d, s);
    EXPECT_EQ(pr.repetition, d.probability(s + s));
    EXPECT_EQ(pr.symmetrization, d.probability(s + reverse_string(s)));
    EXPECT_EQ(pr.completion, d.probability(s + std::string(s.size(), '0')));
  }
}

TEST(Probes, SummaryCountsAbsences) {
  const auto rows = probe_summary(dist(3), 3, 4);
  ASSERT_EQ(rows.size(), 2u);
  for (const ProbeSummary& r : rows) {
    EXPECT_EQ(r.repetition.present + r.repetition.absent, 1u << r.length);
    EXPECT_EQ(r.completion.present + r.completion.absent, 1u << r.length);
  }
}

TEST(LengthLaws, CoverageAndMass) {
  const auto rows = length_laws(dist(3));
  Real mass = 0;
  for (const LengthRow& r : rows) {
    mass += r.mass;
    EXPECT_LE(r.coverage, 1.0);
    EXPECT_EQ(r.reference, std::ldexp(1.0L, -r.length));
    EXPECT_DOUBLE_EQ(r.binomial_sd, std::sqrt(r.length) / 2);
  }
  EXPECT_NEAR(static_cast<double>(mass), 1.0, 1e-12);
  EXPECT_EQ(rows[3].length, 4);
  EXPECT_EQ(rows[3].coverage, 1.0);
}

TEST(LengthLaws, ZeroCountsMoreScatteredThanBinomial) {
  for (int n = 2; n <= 4; ++n)
    for (const LengthRow& r : length_laws(dist(n)))
      if (r.length >= 4 && r.length <= 8 && r.present > 0)
        EXPECT_GE(r.zeros_sd, r.binomial_sd) << "n=" << n << " length " << r.length;
}

TEST(Tsv, HeadersAndRows) {
  RuntimeHistogram h;
  h.add(1, 3);
  h.add(3, 1);
  h.sample_size = 5;
  const std::string t = runtime_tsv(h, std::nullopt);
  EXPECT_EQ(t.substr(0, t.find('\n')), "steps\tmachines\tconditional_probability");
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 3);  // bins with machines only
  EXPECT_EQ(format_number(0.1, 3), "0.1");
}
