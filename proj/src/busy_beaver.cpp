#include <algorithm>
#include <stdexcept>

#include "ctm/enumerator.hpp"
#include "ctm/simulator.hpp"

namespace ctm {
namespace {

class BusyBeaverSink : public LeafSink {
 public:
  explicit BusyBeaverSink(const RangeCounter& counter) : counter_(counter) {}

  void on_halt(const Execution& ex, Count weight,
               const DigitMasks& masks) override {
    result.halting += weight;
    std::uint64_t ones = 0;
    for (Position p = ex.tape.min_visited(); p <= ex.tape.max_visited(); ++p)
      ones += ex.tape.at(p);
    if (ex.steps >= steps_best_) {
      if (ex.steps > steps_best_) steps_masks_.clear();
      steps_best_ = ex.steps;
      steps_masks_.push_back(masks);
    }
    if (ones >= ones_best_) {
      if (ones > ones_best_) ones_masks_.clear();
      ones_best_ = ones;
      ones_masks_.push_back(masks);
    }
  }
  void on_nonhalt(OutcomeKind, std::uint64_t, Count) override {}

  // One representative per leaf: its lowest consistent index.
  void finish(int n_states) {
    result.max_steps = steps_best_;
    result.max_ones = ones_best_;
    for (const auto& m : steps_masks_)
      result.max_steps_machines.push_back(decode_full(n_states, counter_.first(m)));
    for (const auto& m : ones_masks_)
      result.max_ones_machines.push_back(decode_full(n_states, counter_.first(m)));
    auto by_index = [](const MachineSpec& a, const MachineSpec& b) {
      return a.index() < b.index();
    };
    std::sort(result.max_steps_machines.begin(), result.max_steps_machines.end(), by_index);
    std::sort(result.max_ones_machines.begin(), result.max_ones_machines.end(), by_index);
  }

  BusyBeaverEstimate result;

 private:
  const RangeCounter& counter_;
  std::uint64_t steps_best_ = 0;
  std::uint64_t ones_best_ = 0;
  std::vector<DigitMasks> steps_masks_;
  std::vector<DigitMasks> ones_masks_;
};

}  // namespace

std::uint64_t known_busy_beaver_steps(int n_states) {
  switch (n_states) {
    case 1: return 1;
    case 2: return 6;
    case 3: return 21;
    case 4: return 107;
    case 5: return 47176870;
    default: return 0;
  }
}

BusyBeaverEstimate busy_beaver_estimate(int n_states, std::uint64_t cutoff,
                                        bool allow_lower_bound) {
  if (n_states < 1) throw std::domain_error("need at least one state");
  const Count size = full_space_size(n_states);
  const std::uint64_t known = known_busy_beaver_steps(n_states);
  const bool lower_bound = known == 0 || cutoff < known;
  if (lower_bound && !allow_lower_bound)
    throw std::domain_error("cutoff " + std::to_string(cutoff) +
                            " does not decide halting for n=" +
                            std::to_string(n_states) +
                            "; the result would only be a lower bound");
  EnumerationRequest req;
  req.n_states = n_states;
  req.mode = Mode::kFull;
  req.lo = 0;
  req.hi = size;
  req.blank = 0;
  req.cutoff = cutoff;
  RangeCounter counter(n_states, Mode::kFull, 0, size);
  BusyBeaverSink sink(counter);
  enumerate_tree(req, sink);
  sink.finish(n_states);
  sink.result.lower_bound = lower_bound;
  return sink.result;
}

}  // namespace ctm
