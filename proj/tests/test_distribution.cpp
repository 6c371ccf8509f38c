#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ctm/campaign.hpp"
#include "ctm/distribution.hpp"
#include "oracle.hpp"

using namespace ctm;

namespace {

const Distribution& d3() {
  static const Distribution d =
      build_distribution(complete_reduced(sweep(CampaignConfig::whole(3, Mode::kReduced))));
  return d;
}

}  // namespace

TEST(CodingTheorem, Values) {
  EXPECT_NEAR(static_cast<double>(*coding_theorem(0.175036L)), 2.51428, 5e-6);
  EXPECT_NEAR(static_cast<double>(*coding_theorem(0.0237456L)), 5.3962, 5e-5);
  EXPECT_EQ(*coding_theorem(1), 0);
  EXPECT_EQ(*coding_theorem(0.25L), 2);
  EXPECT_FALSE(coding_theorem(0).has_value());
  EXPECT_THROW(coding_theorem(1.5L), std::domain_error);
}

TEST(Distribution, HaltingNormalizationSumsToOne) {
  Real sum = 0;
  for (const auto& [s, p] : d3().probabilities()) sum += p;
  EXPECT_NEAR(static_cast<double>(sum), 1.0, 1e-12);
  EXPECT_NEAR(static_cast<double>(d3().sum()), 1.0, 1e-15);
}

TEST(Distribution, TotalNormalizationUsesAllRuns) {
  const RawTally t = sweep(CampaignConfig::whole(2, Mode::kFull));
  const Distribution d = build_distribution(t, Normalization::kTotal);
  EXPECT_NEAR(static_cast<double>(d.sum()),
              static_cast<double>(t.halting()) / static_cast<double>(t.machines), 1e-15);
}

TEST(Distribution, FullAndCompletedReducedAgreePointwise) {
  const Distribution full = build_distribution(sweep(CampaignConfig::whole(2, Mode::kFull)));
  const Distribution red =
      build_distribution(complete_reduced(sweep(CampaignConfig::whole(2, Mode::kReduced))));
  EXPECT_EQ(full.probabilities(), red.probabilities());
  const auto oracle_counts = oracle::distribution(2, false, 2, 107);
  std::uint64_t total = 0;
  for (const auto& [s, c] : oracle_counts) total += c;
  for (const auto& [s, c] : oracle_counts)
    EXPECT_EQ(*full.probability(s), static_cast<Real>(c) / static_cast<Real>(total));
}

TEST(Distribution, UncompletedReducedRejected) {
  EXPECT_THROW(build_distribution(sweep(CampaignConfig::whole(2, Mode::kReduced))),
               std::domain_error);
}

TEST(RankTable, AverageRanks) {
  EXPECT_EQ(average_ranks_descending({5, 3, 3, 1}), (std::vector<double>{1, 2.5, 2.5, 4}));
  std::vector<Real> v(1615, 0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0L - static_cast<Real>(i) * 1e-6L;
  v.insert(v.end(), 20, 0.5L);
  v.push_back(0.1L);
  const auto r = average_ranks_descending(v);
  EXPECT_EQ(r[1615], 1625.5);
  EXPECT_EQ(r[1634], 1625.5);
  EXPECT_EQ(r.back(), 1636);
}

TEST(RankTable, OrderAndGroups) {
  const ComplexityTable t = rank_table(d3());
  for (std::size_t i = 1; i < t.size(); ++i)
    EXPECT_GE(t.entries()[i - 1].probability, t.entries()[i].probability);
  EXPECT_EQ(t.entries()[0].rank, 1.5);  // "0" and "1"
  EXPECT_LT(t.groups(), t.size());
  const ComplexityTable single =
      rank_table(Distribution({{"0", 3}}, 3, Normalization::kHalting));
  EXPECT_EQ(single.entries()[0].rank, 1);
}

TEST(Query, FoundAbsentAndSymmetry) {
  const ComplexityTable t = rank_table(d3());
  const QueryResult a = query(t, "01"), b = query(t, "10");
  ASSERT_TRUE(a.found());
  EXPECT_EQ(a.complexity, b.complexity);
  EXPECT_EQ(a.rank, b.rank);
  EXPECT_EQ(query(t, std::string(40, '0')).status, QueryResult::Status::kAbsent);
  EXPECT_THROW(query(t, "012"), std::domain_error);
  EXPECT_THROW(query(t, ""), std::domain_error);

  const ComplexityTable broken = rank_table(Distribution({{"001", 2}, {"1", 1}}, 3, Normalization::kHalting));
  const QueryResult q = query(broken, "100");
  EXPECT_EQ(q.status, QueryResult::Status::kSymmetryDefect);
  EXPECT_EQ(q.witness, "001");
}

TEST(Invariance, IdenticalTablesGiveZero) {
  const ComplexityTable t = rank_table(d3());
  for (Real c : invariance_constants(t, t)) EXPECT_EQ(c, 0);
}

TEST(Invariance, QuartilesFollowRankInFirstTable) {
  // Distinct probabilities in a, one tie group in b: |K_a - K_b| grows with rank.
  std::map<std::string, Count> a, b;
  const char* names[] = {"0", "1", "00", "01", "10", "11", "000", "001"};
  for (int i = 0; i < 8; ++i) {
    a[names[i]] = 1u << (8 - i);
    b[names[i]] = 1u << 8;
  }
  const auto ta = rank_table(Distribution(a, 0, Normalization::kHalting));
  const auto tb = rank_table(Distribution(b, 0, Normalization::kHalting));
  const auto c = invariance_constants(ta, tb);
  auto diff = [&](int i) { return std::fabs(ta.find(names[i])->complexity - tb.find(names[i])->complexity); };
  EXPECT_NEAR(static_cast<double>(c[0]), static_cast<double>(std::max(diff(0), diff(7))), 1e-12);
  EXPECT_NEAR(static_cast<double>(c[3]), static_cast<double>(std::max(diff(0), diff(1))), 1e-12);
  EXPECT_NEAR(static_cast<double>(c[2]), static_cast<double>(std::max(diff(0), diff(3))), 1e-12);
}

TEST(Export, RoundTripKeepsCountsAndProbabilities) {
  std::stringstream io;
  export_distribution(io, d3());
  const Distribution back = ingest_distribution(io);
  EXPECT_EQ(back.counts(), d3().counts());
  EXPECT_EQ(back.total_mass(), d3().total_mass());
  for (const auto& [s, p] : d3().probabilities())
    EXPECT_NEAR(static_cast<double>(*back.probability(s)), static_cast<double>(p), 1e-17);
}

TEST(Ingest, ExternalTables) {
  std::istringstream probs("# external\n1\t-\t0.175036\t2.51428\n0\t-\t0.175036\t2.51428\n");
  const Distribution d = ingest_distribution(probs);
  EXPECT_FALSE(d.has_counts());
  EXPECT_EQ(*d.probability("1"), 0.175036L);

  std::istringstream only_k("0\t-\t-\t1\n1\t-\t-\t2\n");
  const Distribution k = ingest_distribution(only_k);
  EXPECT_EQ(*k.probability("0"), 0.5L);
  EXPECT_EQ(*k.probability("1"), 0.25L);

  std::istringstream two_col("0\t0.5\n1\t0.25\n");
  EXPECT_EQ(*ingest_distribution(two_col).probability("1"), 0.25L);

  std::istringstream bad("0\t-\t-\t-\n");
  EXPECT_THROW(ingest_distribution(bad), DistributionFormatError);
  std::istringstream dup("0\t1\n0\t2\n");
  EXPECT_THROW(ingest_distribution(dup), DistributionFormatError);
  std::istringstream junk("0a\t-\t0.5\t1\n");
  EXPECT_THROW(ingest_distribution(junk), DistributionFormatError);
}
