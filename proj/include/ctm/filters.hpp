#pragma once

// Non-halting detectors. Each one is sound: a machine it flags never halts.
// None of them is complete.

#include <cstdint>

#include "ctm/machine.hpp"
#include "ctm/tape.hpp"

namespace ctm {

struct FilterSet {
  bool static_no_halt = true;
  bool short_escapee = true;
  bool escapee = true;
  bool cycle_two = true;

  static constexpr FilterSet all() { return {}; }
  static constexpr FilterSet none() { return {false, false, false, false}; }
  bool any() const {
    return static_no_halt || short_escapee || escapee || cycle_two;
  }
  friend bool operator==(const FilterSet&, const FilterSet&) = default;
};

/// True iff no entry of the table moves to the halt state.
bool static_no_halt(const MachineSpec& machine);

/// One-step escapee: the head is on a cell it has never visited before
/// (hence blank), and the action keeps the state while moving toward
/// unvisited cells. `direction_of_new_cells` is 0 on the untouched origin,
/// where both directions lead to new cells.
inline bool short_escapee_check(int state, bool read_is_fresh_blank,
                                const Action& action,
                                int direction_of_new_cells) {
  if (!read_is_fresh_blank || action.next != state || action.move == 0)
    return false;
  return direction_of_new_cells == 0 || action.move == direction_of_new_cells;
}

// Counts consecutive moves onto never-visited cells. Such a run is
// necessarily in one direction because the visited region is an interval.
struct EscapeeTracker {
  int fresh_run_length = 0;
  int last_direction = 0;

  void observe(bool landed_fresh, int direction) {
    fresh_run_length = landed_fresh ? fresh_run_length + 1 : 0;
    last_direction = direction;
  }
};

/// After n+1 consecutive fresh moves some state read a fresh blank twice
/// under the same transition, so the machine escapes forever.
inline bool escapee_check(const EscapeeTracker& tracker, int n_states) {
  return tracker.fresh_run_length > n_states;
}

/// Period-two cycle test for the transition {s,k} -> {s',k,d}, which leaves
/// the tape unchanged. `lookup(state, symbol)` returns the table entry.
/// True iff the entry for (s', t[i+d]) is {t[i+d], -d, s}.
template <class Lookup>
bool cycle_two_check(Lookup&& lookup, int state, std::uint8_t read,
                     const Action& action, const Tape& tape) {
  if (action.halts() || action.write != read) return false;
  const std::uint8_t neighbour = tape.at(tape.head() + action.move);
  const Action& back = lookup(action.next, neighbour);
  return back.next == state && back.write == neighbour &&
         back.move == -action.move;
}

inline bool cycle_two_check(const MachineSpec& machine, int state,
                            std::uint8_t read, const Tape& tape) {
  return cycle_two_check(
      [&](int s, std::uint8_t k) -> const Action& { return machine.entry(s, k); },
      state, read, machine.entry(state, read), tape);
}

}  // namespace ctm
