#pragma once

// Rado (n,2) Turing machines: transition actions, machine tables, the
// positional index codecs for the full and reduced enumerations, and the
// closed-form machine counts.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace ctm {

using Index = std::uint64_t;
using Count = std::uint64_t;

inline constexpr int kHaltState = 0;
// Largest n whose full space (4n+2)^{2n} still fits in 64 bits.
inline constexpr int kMaxStates = 6;
inline constexpr int kMaxEntries = 2 * kMaxStates;
// Bumped whenever the action ordering or digit layout changes.
inline constexpr int kCodecVersion = 1;

struct Action {
  std::uint8_t write = 0;
  std::int8_t move = 0;  // -1 left, +1 right, 0 only when halting
  std::uint8_t next = kHaltState;

  bool halts() const { return next == kHaltState; }
  friend bool operator==(const Action&, const Action&) = default;
};

enum class Mode : std::uint8_t { kFull, kReduced };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Number of distinct actions for n states, 4n+2.
constexpr int action_count(int n_states) { return 4 * n_states + 2; }

/// Action codes order (next_state, write, move) lexicographically, so the two
/// halting actions are codes 0 and 1 and code 2 + 4(s-1) + 2w + [move=+1]
/// is the action writing w and moving to state s.
Action decode_action(int n_states, int code);
int encode_action(int n_states, const Action& action);

/// Reduced-space choices for the (state 1, blank) entry: move right into a
/// state in 2..n. Digit d selects next = 2 + d/2, write = d%2.
inline constexpr int reduced_first_choices(int n_states) {
  return 2 * (n_states - 1);
}
Action decode_reduced_first(int n_states, int digit);
int encode_reduced_first(int n_states, const Action& action);

/// Table entry slot for (state, read symbol); state is 1-based.
constexpr int entry_slot(int state, int symbol) {
  return 2 * (state - 1) + symbol;
}

class MachineSpec {
 public:
  MachineSpec() = default;
  MachineSpec(int n_states, std::span<const Action> table, Index index,
              Mode mode);

  int n_states() const { return n_states_; }
  int entry_count() const { return 2 * n_states_; }
  Index index() const { return index_; }
  Mode mode() const { return mode_; }

  const Action& entry(int state, int symbol) const {
    return table_[entry_slot(state, symbol)];
  }
  const Action& slot(int i) const { return table_[i]; }
  std::span<const Action> table() const {
    return {table_.data(), static_cast<std::size_t>(entry_count())};
  }

  bool has_halting_entry() const;

  /// Swaps 0 and 1 in both the read index and the written symbol.
  MachineSpec complemented() const;
  /// Negates every move direction.
  MachineSpec mirrored() const;

  /// Compact human-readable form, entries in slot order, e.g. "1RB 0LA 1-H ...".
  std::string describe() const;

  friend bool operator==(const MachineSpec& a, const MachineSpec& b) {
    if (a.n_states_ != b.n_states_ || a.index_ != b.index_ ||
        a.mode_ != b.mode_)
      return false;
    for (int i = 0; i < a.entry_count(); ++i)
      if (!(a.table_[i] == b.table_[i])) return false;
    return true;
  }

 private:
  int n_states_ = 0;
  std::array<Action, kMaxEntries> table_{};
  Index index_ = 0;
  Mode mode_ = Mode::kFull;
};

/// (4n+2)^{2n}; throws std::domain_error on 64-bit overflow.
Count full_space_size(int n_states);
/// 2(n-1)(4n+2)^{2n-1}; throws for n < 2 or overflow.
Count reduced_space_size(int n_states);
Count space_size(int n_states, Mode mode);

/// Radix of table slot `slot` under `mode`; slot 0 is the most significant.
inline int digit_radix(int n_states, Mode mode, int slot) {
  return (mode == Mode::kReduced && slot == 0) ? reduced_first_choices(n_states)
                                               : action_count(n_states);
}

/// Action selected by `digit` at `slot` under `mode`.
Action digit_action(int n_states, Mode mode, int slot, int digit);
int action_digit(int n_states, Mode mode, int slot, const Action& action);

MachineSpec decode_full(int n_states, Index index);
Index encode_full(const MachineSpec& spec);
MachineSpec decode_reduced(int n_states, Index index);
Index encode_reduced(const MachineSpec& spec);
MachineSpec decode(int n_states, Mode mode, Index index);

/// Whether a full-space table belongs to the reduced subspace.
bool in_reduced_space(const MachineSpec& spec);

struct SpaceCensus {
  int n_states = 0;
  Count full_count = 0;
  Count reduced_count = 0;
  Count no_halt_transition_count = 0;
};

SpaceCensus census(int n_states);

}  // namespace ctm
