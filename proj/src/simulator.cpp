#include "ctm/simulator.hpp"

#include <stdexcept>

namespace ctm {

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::kHalted:
      return "halted";
    case OutcomeKind::kNoHaltTransition:
      return "no_halt_transition";
    case OutcomeKind::kShortEscapee:
      return "short_escapee";
    case OutcomeKind::kEscapee:
      return "escapee";
    case OutcomeKind::kCycleTwo:
      return "cycle_two";
    case OutcomeKind::kCutoffExceeded:
      return "cutoff_exceeded";
  }
  return "unknown";
}

OutcomeKind outcome_of(Advance advance) {
  switch (advance) {
    case Advance::kHalted:
      return OutcomeKind::kHalted;
    case Advance::kShortEscapee:
      return OutcomeKind::kShortEscapee;
    case Advance::kEscapee:
      return OutcomeKind::kEscapee;
    case Advance::kCycleTwo:
      return OutcomeKind::kCycleTwo;
    case Advance::kCutoffExceeded:
      return OutcomeKind::kCutoffExceeded;
    case Advance::kNeedEntry:
    case Advance::kNeedSplit:
      break;
  }
  throw std::logic_error("advance stopped on an undetermined entry");
}

int step(const MachineSpec& machine, Tape& tape, int state) {
  if (state < 1 || state > machine.n_states())
    throw std::domain_error("step from a non-running state");
  const Action& action = machine.entry(state, tape.read());
  tape.write(action.write);
  if (!action.halts()) tape.move(action.move);
  return action.next;
}

std::string extract_output(const Tape& tape) { return tape.window(); }

Simulator::Simulator(std::uint64_t cutoff, FilterSet filters)
    : cutoff_(cutoff), filters_(filters), execution_(0, 64) {
  if (cutoff == 0) throw std::domain_error("cutoff must be at least 1");
}

OutcomeKind Simulator::classify(const MachineSpec& machine, std::uint8_t blank,
                                std::uint64_t* steps) {
  execution_.reset(blank);
  if (filters_.static_no_halt && static_no_halt(machine)) {
    if (steps) *steps = 0;
    return OutcomeKind::kNoHaltTransition;
  }
  const AdvanceResult r = advance(execution_, CompleteTable{machine},
                                  machine.n_states(), cutoff_, filters_);
  if (steps) *steps = execution_.steps;
  return outcome_of(r.status);
}

RunOutcome Simulator::run(const MachineSpec& machine, std::uint8_t blank) {
  RunOutcome out;
  out.kind = classify(machine, blank, &out.steps);
  if (out.kind == OutcomeKind::kHalted) out.output = extract_output(execution_.tape);
  return out;
}

RunOutcome run(const MachineSpec& machine, std::uint8_t blank,
               std::uint64_t cutoff, const FilterSet& filters) {
  Simulator sim(cutoff, filters);
  return sim.run(machine, blank);
}

}  // namespace ctm
