#include <gtest/gtest.h>

#include <map>
#include <random>

#include "ctm/enumerator.hpp"
#include "oracle.hpp"

using namespace ctm;

namespace {

struct Collect : LeafSink {
  std::map<std::string, Count> strings;
  std::map<OutcomeKind, Count> nonhalting;
  Count total = 0;
  void on_halt(const Execution& ex, Count weight, const DigitMasks&) override {
    strings[ex.tape.window()] += weight;
    total += weight;
  }
  void on_nonhalt(OutcomeKind kind, std::uint64_t, Count weight) override {
    nonhalting[kind] += weight;
    total += weight;
  }
};

Collect collect(bool tree, int n, Mode mode, Index lo, Index hi, std::uint8_t blank) {
  EnumerationRequest r;
  r.n_states = n;
  r.mode = mode;
  r.lo = lo;
  r.hi = hi;
  r.blank = blank;
  Collect c;
  if (tree)
    enumerate_tree(r, c);
  else
    enumerate_direct(r, c);
  return c;
}

}  // namespace

TEST(RangeCounter, CountsMatchBruteForce) {
  std::mt19937_64 rng(1);
  const int n = 2;
  for (Mode mode : {Mode::kFull, Mode::kReduced}) {
    const Index size = space_size(n, mode);
    for (int k = 0; k < 200; ++k) {
      Index lo = rng() % size, hi = rng() % (size + 1);
      if (lo > hi) std::swap(lo, hi);
      RangeCounter counter(n, mode, lo, hi);
      DigitMasks masks{};
      for (int s = 0; s < counter.slots(); ++s)
        masks[s] = static_cast<DigitMask>(rng()) & counter.full_mask(s);
      Count brute = 0;
      Index first = hi;
      for (Index i = lo; i < hi; ++i) {
        const MachineSpec m = decode(n, mode, i);
        bool ok = true;
        for (int s = 0; s < counter.slots(); ++s)
          ok &= ((masks[s] >> action_digit(n, mode, s, m.slot(s))) & 1) != 0;
        if (ok && first == hi) first = i;
        brute += ok;
      }
      EXPECT_EQ(counter.count(masks), brute);
      EXPECT_EQ(counter.first(masks), first);
    }
  }
}

TEST(Tree, AgreesWithDirectOnWholeSmallSpaces) {
  for (Mode mode : {Mode::kFull, Mode::kReduced})
    for (std::uint8_t blank : {0, 1}) {
      const Index size = space_size(2, mode);
      const Collect t = collect(true, 2, mode, 0, size, blank);
      const Collect d = collect(false, 2, mode, 0, size, blank);
      EXPECT_EQ(t.strings, d.strings);
      EXPECT_EQ(t.nonhalting, d.nonhalting);
      EXPECT_EQ(t.total, size);
    }
}

TEST(Tree, AgreesWithDirectOnRandomSubranges) {
  std::mt19937_64 rng(8);
  for (int n = 3; n <= 5; ++n)
    for (Mode mode : {Mode::kFull, Mode::kReduced}) {
      const Index size = space_size(n, mode);
      for (int k = 0; k < 4; ++k) {
        const Index lo = rng() % (size - 50000);
        const Index hi = lo + 1 + rng() % 50000;
        const Collect t = collect(true, n, mode, lo, hi, 0);
        const Collect d = collect(false, n, mode, lo, hi, 0);
        EXPECT_EQ(t.strings, d.strings) << n << ' ' << lo << ' ' << hi;
        EXPECT_EQ(t.nonhalting, d.nonhalting) << n << ' ' << lo << ' ' << hi;
        EXPECT_EQ(t.total, hi - lo);
      }
    }
}

TEST(Tree, ThreeStateReducedSpaceAgreesWithOracle) {
  const Collect t = collect(true, 3, Mode::kReduced, 0, space_size(3, Mode::kReduced), 0);
  std::uint64_t misses = 0;
  const auto o = oracle::distribution(3, true, 1, 107, &misses);
  EXPECT_EQ(t.strings, o);
  Count nonhalting = 0;
  for (const auto& [kind, c] : t.nonhalting) nonhalting += c;
  EXPECT_EQ(nonhalting, misses);
}

TEST(Tree, EmptyRange) {
  const Collect t = collect(true, 3, Mode::kFull, 10, 10, 0);
  EXPECT_EQ(t.total, 0u);
}
