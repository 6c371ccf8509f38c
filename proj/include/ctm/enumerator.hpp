#pragma once

// Exhaustive enumeration of an index interval of the full or reduced space.
//
// A run depends only on the table entries it consults, so machines are
// explored as a tree of partial tables: an entry is fixed only when the
// simulation first needs it, and every leaf stands for all machines of the
// interval that agree with it on the fixed entries. Leaf weights are exact
// counts of such machines inside [lo, hi), computed digit by digit, so the
// aggregate equals running each machine of the interval separately.

#include <array>
#include <cstdint>

#include "ctm/execution.hpp"
#include "ctm/filters.hpp"
#include "ctm/machine.hpp"
#include "ctm/simulator.hpp"

namespace ctm {

using DigitMask = std::uint32_t;
using DigitMasks = std::array<DigitMask, kMaxEntries>;

// Counts the machines of [lo, hi) whose digit at every slot lies in the
// corresponding mask.
class RangeCounter {
 public:
  RangeCounter(int n_states, Mode mode, Index lo, Index hi);

  Count count(const DigitMasks& masks) const;
  /// Smallest index of [lo, hi) whose digits all lie in `masks`, or `hi` if
  /// there is none.
  Index first(const DigitMasks& masks) const;
  int slots() const { return slots_; }
  DigitMask full_mask(int slot) const { return full_[slot]; }
  /// Digits whose action does not enter the halt state.
  DigitMask running_mask(int slot) const { return running_[slot]; }

 private:
  Count below(const std::array<int, kMaxEntries>& bound, bool bound_is_end,
              const DigitMasks& masks) const;

  Index lo_;
  Index hi_;
  int slots_;
  bool whole_space_;
  std::array<int, kMaxEntries> radix_{};
  std::array<int, kMaxEntries> lo_digits_{};
  std::array<int, kMaxEntries> hi_digits_{};
  bool hi_is_end_ = false;
  std::array<DigitMask, kMaxEntries> full_{};
  std::array<DigitMask, kMaxEntries> running_{};
};

// Receives every leaf of the enumeration tree.
class LeafSink {
 public:
  virtual ~LeafSink() = default;
  /// `execution` holds the halted tape; `weight` machines share it, namely
  /// those of the interval whose digits lie in `masks`.
  virtual void on_halt(const Execution& execution, Count weight,
                       const DigitMasks& masks) = 0;
  virtual void on_nonhalt(OutcomeKind kind, std::uint64_t steps,
                          Count weight) = 0;
};

struct EnumerationStats {
  std::uint64_t leaves = 0;
  std::uint64_t simulated_steps = 0;
};

struct EnumerationRequest {
  int n_states = 2;
  Mode mode = Mode::kFull;
  Index lo = 0;
  Index hi = 0;
  std::uint8_t blank = 0;
  std::uint64_t cutoff = 107;
  FilterSet filters = FilterSet::all();
};

/// Visits every machine of [lo, hi) with the given blank symbol. The total
/// weight delivered to `sink` is exactly hi - lo.
EnumerationStats enumerate_tree(const EnumerationRequest& request,
                                LeafSink& sink);

/// Same contract, one machine at a time: decode, filter, simulate.
EnumerationStats enumerate_direct(const EnumerationRequest& request,
                                  LeafSink& sink);

}  // namespace ctm
