#pragma once

// The stepping loop shared by the single-machine simulator and the
// transition-tree enumerator. The loop is parameterised on a table policy so
// it can run against a fully specified machine or against a partially
// specified one, in which case it stops and reports which entry it needs.

#include <cstdint>

#include "ctm/filters.hpp"
#include "ctm/machine.hpp"
#include "ctm/tape.hpp"

namespace ctm {

enum class Advance : std::uint8_t {
  kHalted,
  kShortEscapee,
  kEscapee,
  kCycleTwo,
  kCutoffExceeded,
  kNeedEntry,   // `slot` must be resolved before stepping on
  kNeedSplit,   // decide whether `slot` equals `wanted` (cycle lookahead)
};

enum class Tri : std::uint8_t { kNo, kYes, kUnknown };

struct Execution {
  Tape tape;
  int state = 1;
  std::uint64_t steps = 0;
  EscapeeTracker tracker;

  explicit Execution(std::uint8_t blank = 0, std::size_t reserve = 64)
      : tape(blank, reserve) {}

  void reset(std::uint8_t blank) {
    tape.reset(blank);
    state = 1;
    steps = 0;
    tracker = {};
  }

  void assign(const Execution& other) {
    tape.assign(other.tape);
    state = other.state;
    steps = other.steps;
    tracker = other.tracker;
  }

  /// The head cell has not been visited before the head arrived on it.
  bool on_fresh_cell() const { return steps == 0 || tracker.fresh_run_length > 0; }
  /// Direction leading to unvisited cells from a fresh cell; 0 at the origin.
  int direction_of_new_cells() const {
    return steps == 0 ? 0 : tracker.last_direction;
  }
};

struct AdvanceResult {
  Advance status;
  int slot = -1;
  Action wanted{};
};

// Table policy:
//   const Action* lookup(int slot) const;          nullptr when undetermined
//   Tri matches(int slot, const Action& a) const;  could the entry equal a?
template <class Table>
AdvanceResult advance(Execution& ex, const Table& table, int n_states,
                      std::uint64_t cutoff, const FilterSet& filters) {
  while (ex.steps < cutoff) {
    const std::uint8_t read = ex.tape.read();
    const int slot = entry_slot(ex.state, read);
    const Action* action = table.lookup(slot);
    if (action == nullptr) return {Advance::kNeedEntry, slot};

    if (action->halts()) {
      ex.tape.write(action->write);
      ++ex.steps;
      ex.state = kHaltState;
      return {Advance::kHalted};
    }

    if (filters.short_escapee &&
        short_escapee_check(ex.state, ex.on_fresh_cell(), *action,
                            ex.direction_of_new_cells()))
      return {Advance::kShortEscapee};

    // A write that leaves the tape unchanged followed by an entry that comes
    // straight back, again without writing, repeats forever.
    if (filters.cycle_two && action->write == read) {
      const std::uint8_t neighbour = ex.tape.at(ex.tape.head() + action->move);
      const int back_slot = entry_slot(action->next, neighbour);
      const Action back{neighbour, static_cast<std::int8_t>(-action->move),
                        static_cast<std::uint8_t>(ex.state)};
      switch (table.matches(back_slot, back)) {
        case Tri::kYes:
          return {Advance::kCycleTwo};
        case Tri::kUnknown:
          return {Advance::kNeedSplit, back_slot, back};
        case Tri::kNo:
          break;
      }
    }

    ex.tape.write(action->write);
    const bool fresh = ex.tape.move(action->move);
    ex.state = action->next;
    ++ex.steps;
    ex.tracker.observe(fresh, action->move);
    if (filters.escapee && escapee_check(ex.tracker, n_states))
      return {Advance::kEscapee};
  }
  return {Advance::kCutoffExceeded};
}

// Policy over a fully specified machine.
struct CompleteTable {
  const MachineSpec& machine;

  const Action* lookup(int slot) const { return &machine.slot(slot); }
  Tri matches(int slot, const Action& a) const {
    return machine.slot(slot) == a ? Tri::kYes : Tri::kNo;
  }
};

}  // namespace ctm
