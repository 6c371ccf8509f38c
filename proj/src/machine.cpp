#include "ctm/machine.hpp"

#include <stdexcept>

namespace ctm {
namespace {

void check_states(int n_states) {
  if (n_states < 1 || n_states > kMaxStates)
    throw std::domain_error("state count must be in 1.." +
                            std::to_string(kMaxStates) + ", got " +
                            std::to_string(n_states));
}

Count checked_pow(Count base, int exponent) {
  Count result = 1;
  for (int i = 0; i < exponent; ++i) {
    Count next = 0;
    if (__builtin_mul_overflow(result, base, &next))
      throw std::domain_error("machine count overflows 64 bits");
    result = next;
  }
  return result;
}

Count checked_mul(Count a, Count b) {
  Count out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    throw std::domain_error("machine count overflows 64 bits");
  return out;
}

char state_letter(int state) {
  return state == kHaltState ? 'H' : static_cast<char>('A' + state - 1);
}

}  // namespace

std::string_view to_string(Mode mode) {
  return mode == Mode::kFull ? "full" : "reduced";
}

Mode parse_mode(std::string_view text) {
  if (text == "full") return Mode::kFull;
  if (text == "reduced") return Mode::kReduced;
  throw std::invalid_argument("unknown enumeration mode '" + std::string(text) +
                              "'");
}

Action decode_action(int n_states, int code) {
  check_states(n_states);
  if (code < 0 || code >= action_count(n_states))
    throw std::domain_error("action code " + std::to_string(code) +
                            " out of range for n=" + std::to_string(n_states));
  if (code < 2) return Action{static_cast<std::uint8_t>(code), 0, kHaltState};
  const int rest = code - 2;
  return Action{static_cast<std::uint8_t>((rest >> 1) & 1),
                static_cast<std::int8_t>((rest & 1) ? 1 : -1),
                static_cast<std::uint8_t>(1 + rest / 4)};
}

int encode_action(int n_states, const Action& action) {
  check_states(n_states);
  if (action.write > 1 || action.next > n_states)
    throw std::domain_error("action outside the (n,2) formalism");
  if (action.halts()) {
    if (action.move != 0)
      throw std::domain_error("halting action must not move");
    return action.write;
  }
  if (action.move != 1 && action.move != -1)
    throw std::domain_error("non-halting action must move left or right");
  return 2 + 4 * (action.next - 1) + 2 * action.write + (action.move == 1);
}

Action decode_reduced_first(int n_states, int digit) {
  check_states(n_states);
  if (digit < 0 || digit >= reduced_first_choices(n_states))
    throw std::domain_error("reduced initial-transition digit out of range");
  return Action{static_cast<std::uint8_t>(digit & 1), 1,
                static_cast<std::uint8_t>(2 + digit / 2)};
}

int encode_reduced_first(int n_states, const Action& action) {
  check_states(n_states);
  if (action.move != 1 || action.next < 2 || action.next > n_states ||
      action.write > 1)
    throw std::domain_error(
        "initial transition is outside the reduced enumeration");
  return 2 * (action.next - 2) + action.write;
}

MachineSpec::MachineSpec(int n_states, std::span<const Action> table,
                         Index index, Mode mode)
    : n_states_(n_states), index_(index), mode_(mode) {
  check_states(n_states);
  if (table.size() != static_cast<std::size_t>(2 * n_states))
    throw std::domain_error("transition table must have 2n entries");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Action& a = table[i];
    if (a.write > 1 || a.next > n_states || (a.halts() != (a.move == 0)) ||
        a.move < -1 || a.move > 1)
      throw std::domain_error("invalid transition in slot " +
                              std::to_string(i));
    table_[i] = a;
  }
}

bool MachineSpec::has_halting_entry() const {
  for (int i = 0; i < entry_count(); ++i)
    if (table_[i].halts()) return true;
  return false;
}

MachineSpec MachineSpec::complemented() const {
  MachineSpec out = *this;
  for (int s = 1; s <= n_states_; ++s) {
    for (int k = 0; k < 2; ++k) {
      Action a = table_[entry_slot(s, k)];
      a.write ^= 1;
      out.table_[entry_slot(s, k ^ 1)] = a;
    }
  }
  return out;
}

MachineSpec MachineSpec::mirrored() const {
  MachineSpec out = *this;
  for (int i = 0; i < entry_count(); ++i)
    out.table_[i].move = static_cast<std::int8_t>(-table_[i].move);
  return out;
}

std::string MachineSpec::describe() const {
  std::string out;
  for (int i = 0; i < entry_count(); ++i) {
    if (i) out += ' ';
    const Action& a = table_[i];
    out += static_cast<char>('0' + a.write);
    out += a.move < 0 ? 'L' : (a.move > 0 ? 'R' : '-');
    out += state_letter(a.next);
  }
  return out;
}

Count full_space_size(int n_states) {
  check_states(n_states);
  return checked_pow(static_cast<Count>(action_count(n_states)), 2 * n_states);
}

Count reduced_space_size(int n_states) {
  check_states(n_states);
  if (n_states < 2)
    throw std::domain_error("the reduced enumeration is empty for n=1");
  return checked_mul(
      static_cast<Count>(reduced_first_choices(n_states)),
      checked_pow(static_cast<Count>(action_count(n_states)), 2 * n_states - 1));
}

Count space_size(int n_states, Mode mode) {
  return mode == Mode::kFull ? full_space_size(n_states)
                             : reduced_space_size(n_states);
}

Action digit_action(int n_states, Mode mode, int slot, int digit) {
  return (mode == Mode::kReduced && slot == 0)
             ? decode_reduced_first(n_states, digit)
             : decode_action(n_states, digit);
}

int action_digit(int n_states, Mode mode, int slot, const Action& action) {
  return (mode == Mode::kReduced && slot == 0)
             ? encode_reduced_first(n_states, action)
             : encode_action(n_states, action);
}

MachineSpec decode(int n_states, Mode mode, Index index) {
  const Count size = space_size(n_states, mode);
  if (index >= size)
    throw std::domain_error("index " + std::to_string(index) +
                            " outside the " + std::string(to_string(mode)) +
                            " space of size " + std::to_string(size));
  std::array<Action, kMaxEntries> table{};
  Index rest = index;
  for (int slot = 2 * n_states - 1; slot >= 0; --slot) {
    const int radix = digit_radix(n_states, mode, slot);
    table[slot] = digit_action(n_states, mode, slot,
                               static_cast<int>(rest % radix));
    rest /= radix;
  }
  return MachineSpec(n_states,
                     std::span<const Action>(table.data(), 2 * n_states), index,
                     mode);
}

MachineSpec decode_full(int n_states, Index index) {
  return decode(n_states, Mode::kFull, index);
}

MachineSpec decode_reduced(int n_states, Index index) {
  return decode(n_states, Mode::kReduced, index);
}

namespace {
Index encode_with(const MachineSpec& spec, Mode mode) {
  const int n = spec.n_states();
  Index index = 0;
  for (int slot = 0; slot < spec.entry_count(); ++slot)
    index = index * digit_radix(n, mode, slot) +
            action_digit(n, mode, slot, spec.slot(slot));
  return index;
}
}  // namespace

Index encode_full(const MachineSpec& spec) {
  return encode_with(spec, Mode::kFull);
}

Index encode_reduced(const MachineSpec& spec) {
  reduced_space_size(spec.n_states());
  return encode_with(spec, Mode::kReduced);
}

bool in_reduced_space(const MachineSpec& spec) {
  const Action& first = spec.entry(1, 0);
  return spec.n_states() >= 2 && first.move == 1 && first.next >= 2;
}

SpaceCensus census(int n_states) {
  if (n_states < 2)
    throw std::domain_error("census requires n >= 2");
  SpaceCensus c;
  c.n_states = n_states;
  c.full_count = full_space_size(n_states);
  c.reduced_count = reduced_space_size(n_states);
  c.no_halt_transition_count = checked_mul(
      static_cast<Count>(reduced_first_choices(n_states)),
      checked_pow(static_cast<Count>(4 * n_states), 2 * n_states - 1));
  return c;
}

}  // namespace ctm
