#include "ctm/enumerator.hpp"

#include <bit>
#include <stdexcept>
#include <vector>

namespace ctm {
namespace {

std::array<int, kMaxEntries> digits_of(int n_states, Mode mode, Index value) {
  std::array<int, kMaxEntries> digits{};
  for (int slot = 2 * n_states - 1; slot >= 0; --slot) {
    const int radix = digit_radix(n_states, mode, slot);
    digits[slot] = static_cast<int>(value % radix);
    value /= radix;
  }
  return digits;
}

void check_range(int n_states, Mode mode, Index lo, Index hi) {
  const Count size = space_size(n_states, mode);
  if (lo > hi || hi > size)
    throw std::domain_error("index range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + ") exceeds the " +
                            std::string(to_string(mode)) + " space of size " +
                            std::to_string(size));
}

// Partial table seen by the stepping loop. Slots whose mask has one digit
// are fixed.
class PartialTable {
 public:
  PartialTable(int n_states, Mode mode, const DigitMasks& masks)
      : n_(n_states), mode_(mode), masks_(masks) {
    for (int slot = 0; slot < 2 * n_; ++slot) refresh(slot);
  }

  const Action* lookup(int slot) const {
    return fixed_[slot] ? &actions_[slot] : nullptr;
  }

  Tri matches(int slot, const Action& a) const {
    const int digit = digit_for(slot, a);
    if (digit < 0 || !((masks_[slot] >> digit) & 1u)) return Tri::kNo;
    return fixed_[slot] ? Tri::kYes : Tri::kUnknown;
  }

  int digit_for(int slot, const Action& a) const {
    if (mode_ == Mode::kReduced && slot == 0) {
      if (a.move != 1 || a.next < 2) return -1;
      return encode_reduced_first(n_, a);
    }
    return encode_action(n_, a);
  }

  DigitMask mask(int slot) const { return masks_[slot]; }
  const DigitMasks& masks() const { return masks_; }

  void set_mask(int slot, DigitMask mask) {
    masks_[slot] = mask;
    refresh(slot);
  }

 private:
  void refresh(int slot) {
    fixed_[slot] = std::popcount(masks_[slot]) == 1;
    if (fixed_[slot])
      actions_[slot] =
          digit_action(n_, mode_, slot, std::countr_zero(masks_[slot]));
  }

  int n_;
  Mode mode_;
  DigitMasks masks_{};
  std::array<Action, kMaxEntries> actions_{};
  std::array<bool, kMaxEntries> fixed_{};
};

class TreeWalker {
 public:
  TreeWalker(const EnumerationRequest& req, LeafSink& sink)
      : req_(req),
        counter_(req.n_states, req.mode, req.lo, req.hi),
        sink_(sink) {
    const std::size_t reserve =
        static_cast<std::size_t>(std::min<std::uint64_t>(req.cutoff, 4096)) + 2;
    for (int i = 0; i < 2 * kMaxEntries + 2; ++i)
      stack_.emplace_back(req.blank, reserve);
  }

  EnumerationStats run() {
    DigitMasks masks{};
    for (int slot = 0; slot < counter_.slots(); ++slot)
      masks[slot] = counter_.full_mask(slot);
    PartialTable table(req_.n_states, req_.mode, masks);
    if (counter_.count(table.masks()) == 0) return stats_;
    stack_[0].reset(req_.blank);
    explore(0, table);
    return stats_;
  }

 private:
  void explore(int depth, PartialTable& table) {
    Execution& ex = stack_[depth];
    // Masks narrowed at this depth, restored before returning.
    std::array<std::pair<int, DigitMask>, kMaxEntries * 2> undo{};
    int undo_size = 0;
    auto narrow = [&](int slot, DigitMask mask) {
      undo[undo_size++] = {slot, table.mask(slot)};
      table.set_mask(slot, mask);
    };

    while (true) {
      const std::uint64_t before = ex.steps;
      const AdvanceResult r = advance(ex, table, req_.n_states, req_.cutoff,
                                      req_.filters);
      stats_.simulated_steps += ex.steps - before;

      if (r.status == Advance::kNeedSplit) {
        const DigitMask current = table.mask(r.slot);
        const DigitMask wanted = DigitMask{1} << table.digit_for(r.slot, r.wanted);
        narrow(r.slot, wanted);
        emit_nonhalt(table, OutcomeKind::kCycleTwo, ex.steps);
        table.set_mask(r.slot, current & ~wanted);
        if (counter_.count(table.masks()) == 0) break;
        continue;
      }

      if (r.status == Advance::kNeedEntry) {
        const DigitMask current = table.mask(r.slot);
        for (DigitMask rest = current; rest != 0; rest &= rest - 1) {
          const DigitMask bit = rest & (~rest + 1);
          table.set_mask(r.slot, bit);
          if (counter_.count(table.masks()) == 0) continue;
          stack_[depth + 1].assign(ex);
          explore(depth + 1, table);
        }
        table.set_mask(r.slot, current);
        break;
      }

      const OutcomeKind kind = outcome_of(r.status);
      if (kind == OutcomeKind::kHalted) {
        ++stats_.leaves;
        sink_.on_halt(ex, counter_.count(table.masks()), table.masks());
      } else {
        emit_nonhalt(table, kind, ex.steps);
      }
      break;
    }
    while (undo_size > 0) {
      --undo_size;
      table.set_mask(undo[undo_size].first, undo[undo_size].second);
    }
  }

  void emit_nonhalt(const PartialTable& table, OutcomeKind kind,
                    std::uint64_t steps) {
    ++stats_.leaves;
    const Count weight = counter_.count(table.masks());
    if (weight == 0) return;
    Count no_halt = 0;
    if (req_.filters.static_no_halt) {
      DigitMasks running = table.masks();
      for (int slot = 0; slot < counter_.slots(); ++slot)
        running[slot] &= counter_.running_mask(slot);
      no_halt = counter_.count(running);
    }
    if (no_halt > 0) sink_.on_nonhalt(OutcomeKind::kNoHaltTransition, 0, no_halt);
    if (weight > no_halt) sink_.on_nonhalt(kind, steps, weight - no_halt);
  }

  const EnumerationRequest& req_;
  RangeCounter counter_;
  LeafSink& sink_;
  std::vector<Execution> stack_;
  EnumerationStats stats_;
};

}  // namespace

RangeCounter::RangeCounter(int n_states, Mode mode, Index lo, Index hi)
    : lo_(lo), hi_(hi), slots_(2 * n_states) {
  check_range(n_states, mode, lo, hi);
  const Count size = space_size(n_states, mode);
  whole_space_ = lo == 0 && hi == size;
  for (int slot = 0; slot < slots_; ++slot) {
    radix_[slot] = digit_radix(n_states, mode, slot);
    full_[slot] = (DigitMask{1} << radix_[slot]) - 1;
    running_[slot] = full_[slot];
    if (!(mode == Mode::kReduced && slot == 0)) running_[slot] &= ~DigitMask{3};
  }
  lo_digits_ = digits_of(n_states, mode, lo);
  hi_is_end_ = hi == size;
  if (!hi_is_end_) hi_digits_ = digits_of(n_states, mode, hi);
}

Count RangeCounter::below(const std::array<int, kMaxEntries>& bound,
                          bool bound_is_end, const DigitMasks& masks) const {
  std::array<Count, kMaxEntries + 1> suffix{};
  suffix[slots_] = 1;
  for (int p = slots_ - 1; p >= 0; --p)
    suffix[p] = suffix[p + 1] * static_cast<Count>(std::popcount(masks[p]));
  if (bound_is_end) return suffix[0];
  Count result = 0;
  for (int p = 0; p < slots_; ++p) {
    const int x = bound[p];
    const DigitMask lower = masks[p] & ((DigitMask{1} << x) - 1);
    result += static_cast<Count>(std::popcount(lower)) * suffix[p + 1];
    if (!((masks[p] >> x) & 1u)) return result;
  }
  return result;
}

Count RangeCounter::count(const DigitMasks& masks) const {
  if (whole_space_) {
    Count total = 1;
    for (int p = 0; p < slots_; ++p)
      total *= static_cast<Count>(std::popcount(masks[p]));
    return total;
  }
  return below(hi_digits_, hi_is_end_, masks) -
         below(lo_digits_, false, masks);
}

Index RangeCounter::first(const DigitMasks& masks) const {
  if (lo_ >= hi_) return hi_;
  for (int p = 0; p < slots_; ++p)
    if (masks[p] == 0) return hi_;
  auto lowest_from = [&](std::array<int, kMaxEntries> digits, int from) {
    for (int p = from; p < slots_; ++p) digits[p] = std::countr_zero(masks[p]);
    Index value = 0;
    for (int p = 0; p < slots_; ++p) value = value * radix_[p] + digits[p];
    return value;
  };
  // The answer shares the longest possible prefix with lo; past it, one digit
  // is strictly larger and the rest are minimal.
  int common = 0;
  while (common < slots_ && ((masks[common] >> lo_digits_[common]) & 1u)) ++common;
  if (common == slots_) return lo_ < hi_ ? lo_ : hi_;
  for (int p = common; p >= 0; --p) {
    const DigitMask above = masks[p] & ~((DigitMask{2} << lo_digits_[p]) - 1);
    if (above == 0) continue;
    std::array<int, kMaxEntries> digits = lo_digits_;
    digits[p] = std::countr_zero(above);
    const Index value = lowest_from(digits, p + 1);
    return value < hi_ ? value : hi_;
  }
  return hi_;
}

EnumerationStats enumerate_tree(const EnumerationRequest& request,
                                LeafSink& sink) {
  if (request.cutoff == 0) throw std::domain_error("cutoff must be at least 1");
  TreeWalker walker(request, sink);
  return walker.run();
}

EnumerationStats enumerate_direct(const EnumerationRequest& request,
                                  LeafSink& sink) {
  check_range(request.n_states, request.mode, request.lo, request.hi);
  EnumerationStats stats;
  const int slots = 2 * request.n_states;
  Simulator sim(request.cutoff, request.filters);
  Execution scratch(request.blank);
  for (Index i = request.lo; i < request.hi; ++i) {
    const MachineSpec machine = decode(request.n_states, request.mode, i);
    std::uint64_t steps = 0;
    const OutcomeKind kind = sim.classify(machine, request.blank, &steps);
    ++stats.leaves;
    stats.simulated_steps += steps;
    if (kind == OutcomeKind::kHalted) {
      scratch.tape = sim.tape();
      scratch.steps = steps;
      scratch.state = kHaltState;
      DigitMasks masks{};
      for (int slot = 0; slot < slots; ++slot)
        masks[slot] = DigitMask{1} << action_digit(request.n_states,
                                                   request.mode, slot,
                                                   machine.slot(slot));
      sink.on_halt(scratch, 1, masks);
    } else {
      sink.on_nonhalt(kind, steps, 1);
    }
  }
  return stats;
}

}  // namespace ctm
