#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ctm/execution.hpp"
#include "ctm/filters.hpp"
#include "ctm/machine.hpp"
#include "ctm/tape.hpp"

namespace ctm {

enum class OutcomeKind : std::uint8_t {
  kHalted,
  kNoHaltTransition,
  kShortEscapee,
  kEscapee,
  kCycleTwo,
  kCutoffExceeded,
};

std::string_view to_string(OutcomeKind kind);

struct RunOutcome {
  OutcomeKind kind = OutcomeKind::kCutoffExceeded;
  std::string output;  // set iff kind == kHalted
  std::uint64_t steps = 0;

  bool halted() const { return kind == OutcomeKind::kHalted; }
  friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

/// Executes the transition for the scanned cell and returns the new state
/// (0 after a halting transition, which writes but does not move).
int step(const MachineSpec& machine, Tape& tape, int state);

/// Visited cells, left to right.
std::string extract_output(const Tape& tape);

/// Runs `machine` from an all-`blank` tape in state 1 for at most `cutoff`
/// steps. The halting transition counts as a step.
RunOutcome run(const MachineSpec& machine, std::uint8_t blank,
               std::uint64_t cutoff, const FilterSet& filters = FilterSet::all());

// Reusable simulator that keeps its tape allocation between runs.
class Simulator {
 public:
  explicit Simulator(std::uint64_t cutoff, FilterSet filters = FilterSet::all());

  RunOutcome run(const MachineSpec& machine, std::uint8_t blank);
  /// Same classification without materialising the output string.
  OutcomeKind classify(const MachineSpec& machine, std::uint8_t blank,
                       std::uint64_t* steps = nullptr);

  const Tape& tape() const { return execution_.tape; }
  std::uint64_t cutoff() const { return cutoff_; }

 private:
  std::uint64_t cutoff_;
  FilterSet filters_;
  Execution execution_;
};

OutcomeKind outcome_of(Advance advance);

struct BusyBeaverEstimate {
  std::uint64_t max_steps = 0;   // S(n,2) if the cutoff is large enough
  std::uint64_t max_ones = 0;    // Sigma(n,2) under the same proviso
  std::vector<MachineSpec> max_steps_machines;
  std::vector<MachineSpec> max_ones_machines;
  std::uint64_t halting = 0;
  bool lower_bound = false;      // true when the cutoff may be below S(n,2)
};

/// Smallest cutoff known to decide halting for n states (S(n,2)), or 0 when
/// no value is known.
std::uint64_t known_busy_beaver_steps(int n_states);

/// Exhaustive maximum runtime and maximum number of 1s over the halting
/// machines of the full (n,2) space, blank 0. For n >= 5 `allow_lower_bound`
/// must be set; the answer is then only a lower bound.
BusyBeaverEstimate busy_beaver_estimate(int n_states, std::uint64_t cutoff,
                                        bool allow_lower_bound = false);

}  // namespace ctm
