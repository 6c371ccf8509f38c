#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "ctm/campaign.hpp"
#include "oracle.hpp"

using namespace ctm;

namespace {

CampaignConfig ranged(int n, Mode mode, Index lo, Index hi) {
  CampaignConfig c = CampaignConfig::whole(n, mode);
  c.lo = lo;
  c.hi = hi;
  return c;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("ctm_test_" + std::to_string(::getpid()) + "_" + name))
      .string();
}

}  // namespace

TEST(Campaign, WholeConfigDefaults) {
  const CampaignConfig c = CampaignConfig::whole(5, Mode::kReduced);
  EXPECT_EQ(c.cutoff, 500u);
  EXPECT_EQ(c.hi, reduced_space_size(5));
  EXPECT_EQ(c.blank_policy, BlankPolicy::kZeroWithCompletion);
  EXPECT_EQ(default_cutoff(4), 107u);
  EXPECT_EQ(CampaignConfig::whole(2, Mode::kFull).blank_policy, BlankPolicy::kRunBoth);
}

TEST(Campaign, ValidationErrors) {
  CampaignConfig c = CampaignConfig::whole(3, Mode::kReduced);
  c.hi = 7;
  EXPECT_THROW(c.validate(), std::domain_error);  // not divisible by 4
  c.hi = reduced_space_size(3) + 4;
  EXPECT_THROW(c.validate(), std::domain_error);
  c = CampaignConfig::whole(3, Mode::kFull);
  c.cutoff = 0;
  EXPECT_THROW(c.validate(), std::domain_error);
  EXPECT_THROW(parse_blank_policy("both"), std::domain_error);
  EXPECT_EQ(parse_blank_policy("zero-only"), BlankPolicy::kZeroWithCompletion);
}

TEST(Campaign, FullTwoStateSweepMatchesOracle) {
  const RawTally t = sweep(CampaignConfig::whole(2, Mode::kFull));
  EXPECT_EQ(t.machines, 20000u);
  std::uint64_t misses = 0;
  EXPECT_EQ(t.strings, oracle::distribution(2, false, 2, 107, &misses));
  EXPECT_EQ(t.nonhalting_total(), misses);
  EXPECT_TRUE(t.finished());
}

TEST(Campaign, CompletionWorkedExample) {
  RawTally t = empty_tally(ranged(5, Mode::kReduced, 0, 8));
  t.strings = {{"01", 3}};
  t.category(OutcomeKind::kCutoffExceeded) = 5;
  t.machines = 8;
  const RawTally c = complete_reduced(t);
  const std::map<std::string, Count> expected{{"01", 6}, {"10", 6}, {"0", 2}, {"1", 2}};
  EXPECT_EQ(c.strings, expected);
  EXPECT_TRUE(c.completed);
  // 5.5 M at five states
  EXPECT_EQ(c.machines, 44u);
  Count sum = c.nonhalting_total();
  for (const auto& [s, k] : c.strings) sum += k;
  EXPECT_EQ(sum, c.machines);
}

TEST(Campaign, CompletedReducedEqualsFullRunBoth) {
  for (int n = 2; n <= 3; ++n) {
    const RawTally full = sweep(CampaignConfig::whole(n, Mode::kFull));
    const RawTally red = complete_reduced(sweep(CampaignConfig::whole(n, Mode::kReduced)));
    EXPECT_EQ(red.strings, full.strings) << "n=" << n;
    EXPECT_EQ(red.machines, full.machines);
    EXPECT_EQ(red.halting(), full.halting());
    EXPECT_EQ(red.machines, 2 * census(n).full_count);
  }
}

TEST(Campaign, CompletedTallyIsSymmetric) {
  const RawTally t = complete_reduced(sweep(CampaignConfig::whole(3, Mode::kReduced)));
  for (const auto& [s, k] : t.strings) {
    EXPECT_EQ(t.strings.at(reverse_string(s)), k);
    EXPECT_EQ(t.strings.at(complement_string(s)), k);
    EXPECT_EQ(t.strings.at(reverse_string(complement_string(s))), k);
  }
}

TEST(Campaign, CompletionRejectsWrongInputs) {
  EXPECT_THROW(complete_reduced(sweep(CampaignConfig::whole(2, Mode::kFull))), std::domain_error);
  const RawTally c = complete_reduced(sweep(CampaignConfig::whole(2, Mode::kReduced)));
  EXPECT_THROW(complete_reduced(c), std::domain_error);
}

TEST(Campaign, MergeOfHalvesEqualsWhole) {
  for (int n = 2; n <= 3; ++n) {
    const Index size = reduced_space_size(n);
    const Index mid = size / 2 / reduced_first_choices(n) * reduced_first_choices(n);
    const RawTally whole = sweep(CampaignConfig::whole(n, Mode::kReduced));
    const RawTally a = sweep(ranged(n, Mode::kReduced, 0, mid));
    const RawTally b = sweep(ranged(n, Mode::kReduced, mid, size));
    EXPECT_EQ(format_tally_body(merge({a, b})), format_tally_body(whole));
    EXPECT_EQ(merge({b, a}), merge({a, b}));
    EXPECT_EQ(merge({a, b}).done, whole.done);
  }
}

TEST(Campaign, MergeWithEmptyIsIdentity) {
  const RawTally x = sweep(ranged(3, Mode::kFull, 0, 100000));
  const RawTally e = empty_tally(ranged(3, Mode::kFull, 100000, 100000));
  EXPECT_EQ(format_tally_body(merge({x, e})), format_tally_body(x));
}

TEST(Campaign, MergeOrderInvarianceOverEightChunks) {
  const Index size = full_space_size(3);
  std::vector<RawTally> parts;
  for (int i = 0; i < 8; ++i)
    parts.push_back(sweep(ranged(3, Mode::kFull, size * i / 8, size * (i + 1) / 8)));
  const std::string reference = format_tally_body(sweep(CampaignConfig::whole(3, Mode::kFull)));
  std::mt19937 rng(2);
  for (int k = 0; k < 6; ++k) {
    std::shuffle(parts.begin(), parts.end(), rng);
    EXPECT_EQ(format_tally_body(merge(parts)), reference);
  }
}

TEST(Campaign, MergeRejectsOverlapAndMismatch) {
  const RawTally a = sweep(ranged(2, Mode::kFull, 0, 600));
  const RawTally b = sweep(ranged(2, Mode::kFull, 500, 1000));
  EXPECT_THROW(merge({a, b}), std::domain_error);
  CampaignConfig other = ranged(2, Mode::kFull, 600, 1000);
  other.cutoff = 50;
  EXPECT_THROW(merge({a, sweep(other)}), std::domain_error);
  EXPECT_THROW(merge({}), std::domain_error);
}

TEST(Campaign, ChunkAndParallelismInvariance) {
  CampaignConfig c = CampaignConfig::whole(3, Mode::kFull);
  const std::string reference = format_tally_body(sweep(c));
  for (std::uint64_t every : {1'000'003ull, 77'777ull}) {
    c.snapshot_every = every;
    for (int jobs : {1, 3, 8}) {
      SweepOptions o;
      o.jobs = jobs;
      EXPECT_EQ(format_tally_body(sweep(c, o)), reference) << every << ' ' << jobs;
    }
  }
}

TEST(Campaign, InterruptAndResume) {
  const std::string path = temp_path("resume.tally");
  CampaignConfig c = CampaignConfig::whole(3, Mode::kReduced);
  c.snapshot_every = 100'000;
  const RawTally reference = sweep(c);
  SweepOptions o;
  o.checkpoint_path = path;
  for (std::uint64_t stop : {1ull, 12'345ull, 1'000'000ull}) {
    sweep(c, SweepOptions{1, path, nullptr, stop});
    auto [partial, next] = resume(path);
    EXPECT_EQ(next, stop);
    const RawTally finished = continue_sweep(partial, o);
    EXPECT_EQ(finished, reference) << stop;
  }
  auto [done, next] = resume(path);
  EXPECT_EQ(next, c.hi);
  EXPECT_EQ(continue_sweep(done), reference);
  std::filesystem::remove(path);
}

TEST(Campaign, SnapshotsAreCheckpointed) {
  CampaignConfig c = CampaignConfig::whole(2, Mode::kFull);
  c.snapshot_every = 3000;
  std::vector<std::uint64_t> seen;
  SweepOptions o;
  o.on_snapshot = [&](const RawTally& t) { seen.push_back(t.units_done()); };
  sweep(c, o);
  EXPECT_EQ(seen, (std::vector<std::uint64_t>{3000, 6000, 9000, 10000}));
}

TEST(TallyFormat, RoundTrip) {
  const RawTally t = sweep(CampaignConfig::whole(3, Mode::kReduced));
  const std::string text = format_tally(t);
  EXPECT_EQ(parse_tally(text), t);
  const RawTally c = complete_reduced(t);
  EXPECT_EQ(parse_tally(format_tally(c)), c);
}

TEST(TallyFormat, BodyIsSortedByCount) {
  const RawTally t = sweep(CampaignConfig::whole(2, Mode::kFull));
  std::istringstream body(format_tally_body(t));
  std::string line;
  Count last = UINT64_MAX;
  while (std::getline(body, line) && line[0] != '!') {
    const Count k = std::stoull(line.substr(line.find('\t') + 1));
    EXPECT_LE(k, last);
    last = k;
  }
}

TEST(TallyFormat, TruncationAndCorruptionAreDetected) {
  const std::string text = format_tally(sweep(CampaignConfig::whole(2, Mode::kFull)));
  EXPECT_THROW(parse_tally(text.substr(0, text.size() / 2)), TallyFormatError);
  std::string flipped = text;
  flipped[text.find("\n0\t") + 3] ^= 1;
  EXPECT_THROW(parse_tally(flipped), TallyFormatError);
  EXPECT_THROW(parse_tally(""), TallyFormatError);
}

TEST(TallyFormat, SaveAndLoad) {
  const std::string path = temp_path("save.tally");
  const RawTally t = sweep(ranged(3, Mode::kFull, 5, 50000));
  save_tally(path, t);
  EXPECT_EQ(load_tally(path), t);
  EXPECT_THROW(load_tally(path + ".missing"), TallyFormatError);
  std::filesystem::remove(path);
}

TEST(Sampler, DeterministicAndInRange) {
  for (std::uint64_t draw = 0; draw < 1000; ++draw) {
    const Index i = sample_index(42, draw, 100, 1100);
    EXPECT_GE(i, 100u);
    EXPECT_LT(i, 1100u);
    EXPECT_EQ(i, sample_index(42, draw, 100, 1100));
  }
  EXPECT_NE(sample_index(1, 0, 0, UINT64_MAX), sample_index(2, 0, 0, UINT64_MAX));
}

TEST(Sampler, RoughlyUniform) {
  std::array<int, 10> bins{};
  for (std::uint64_t d = 0; d < 100000; ++d) ++bins[sample_index(7, d, 0, 10)];
  for (int b : bins) EXPECT_NEAR(b, 10000, 500);
}

TEST(Sampler, SampledSweepIsChunkInvariant) {
  CampaignConfig c = CampaignConfig::whole(5, Mode::kReduced);
  c.samples = 20000;
  c.seed = 3;
  const std::string reference = format_tally_body(sweep(c));
  c.snapshot_every = 999;
  EXPECT_EQ(format_tally_body(sweep(c, SweepOptions{4, {}, nullptr, 0})), reference);
  EXPECT_EQ(sweep(c).machines, 20000u);
}

TEST(Strings, ReverseAndComplement) {
  EXPECT_EQ(reverse_string("0011"), "1100");
  EXPECT_EQ(complement_string("0010"), "1101");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
