#pragma once

// Campaigns: sweep an index interval (or a seeded sample of it), aggregate
// outcomes into integer tallies, complete reduced tallies to the full space,
// merge partial tallies and checkpoint / resume long sweeps.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctm/machine.hpp"
#include "ctm/simulator.hpp"

namespace ctm {

enum class BlankPolicy : std::uint8_t { kRunBoth, kZeroWithCompletion };

std::string_view to_string(BlankPolicy policy);
BlankPolicy parse_blank_policy(std::string_view text);

/// 107 up to four states (S(4,2)), 500 for five and beyond.
std::uint64_t default_cutoff(int n_states);

struct CampaignConfig {
  int n_states = 2;
  std::uint64_t cutoff = 107;
  Mode mode = Mode::kReduced;
  Index lo = 0;
  Index hi = 0;
  std::uint64_t snapshot_every = 1'000'000'000;
  BlankPolicy blank_policy = BlankPolicy::kZeroWithCompletion;
  // samples > 0 switches from sweeping [lo, hi) to drawing `samples`
  // indices from it with the seeded sampler below.
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  /// Whole space of `mode` with the default cutoff.
  static CampaignConfig whole(int n_states, Mode mode);

  bool sampled() const { return samples > 0; }
  /// Work units are indices when sweeping and draw numbers when sampling.
  std::uint64_t work_begin() const { return sampled() ? 0 : lo; }
  std::uint64_t work_end() const { return sampled() ? samples : hi; }
  int blanks_per_machine() const {
    return blank_policy == BlankPolicy::kRunBoth ? 2 : 1;
  }
  /// Halting is decided exactly (cutoff at least the known S(n,2)).
  bool exact() const;

  /// Throws std::domain_error when the configuration is unusable.
  void validate() const;

  friend bool operator==(const CampaignConfig&, const CampaignConfig&) = default;
};

/// Deterministic sampler: draw `i` of a campaign depends only on (seed, i),
/// so samples can be generated in any order or in parallel. Uniform on
/// [lo, hi) by rejection on splitmix64 output.
Index sample_index(std::uint64_t seed, std::uint64_t draw, Index lo, Index hi);

using WorkRange = std::pair<std::uint64_t, std::uint64_t>;  // [first, second)

inline constexpr int kNonHaltingKinds = 5;
/// Non-halting kinds in tally order.
inline constexpr std::array<OutcomeKind, kNonHaltingKinds> kNonHaltingOrder = {
    OutcomeKind::kNoHaltTransition, OutcomeKind::kShortEscapee,
    OutcomeKind::kEscapee, OutcomeKind::kCycleTwo,
    OutcomeKind::kCutoffExceeded};

struct RawTally {
  CampaignConfig config;
  std::map<std::string, Count> strings;
  std::array<Count, kNonHaltingKinds> nonhalting{};
  // M: runs accumulated (machines times blanks). After completion the
  // represented full-space mass.
  Count machines = 0;
  // Finished work units, sorted, disjoint and coalesced.
  std::vector<WorkRange> done;
  bool completed = false;

  Count& category(OutcomeKind kind);
  Count category(OutcomeKind kind) const;
  Count halting() const;
  Count nonhalting_total() const;
  std::uint64_t units_done() const;
  bool finished() const;
  /// Where an interrupted sweep continues; requires `done` to be a prefix.
  std::uint64_t next_unit() const;

  friend bool operator==(const RawTally&, const RawTally&) = default;
};

/// Empty tally for `config` with nothing done yet.
RawTally empty_tally(const CampaignConfig& config);

struct SweepOptions {
  int jobs = 1;
  // Written atomically after every snapshot, if non-empty.
  std::string checkpoint_path;
  // Called after every snapshot with the tally so far.
  std::function<void(const RawTally&)> on_snapshot;
  // Stop after this many work units (testing interruptions); 0 = no limit.
  std::uint64_t stop_after = 0;
};

/// Default parallelism: $CTM_JOBS if set, else the hardware thread count.
int default_jobs();

RawTally sweep(const CampaignConfig& config, const SweepOptions& options = {});
/// Continues `tally` from its next unit to the end of its work.
RawTally continue_sweep(RawTally tally, const SweepOptions& options = {});

/// Completion of a reduced blank-0 tally to the full space on both blanks.
RawTally complete_reduced(const RawTally& tally);

RawTally merge(const std::vector<RawTally>& tallies);

class TallyFormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kTallyFormatVersion = 1;

void write_tally(std::ostream& out, const RawTally& tally);
std::string format_tally(const RawTally& tally);
/// Body only: string and category lines, no header or trailer.
std::string format_tally_body(const RawTally& tally);
RawTally read_tally(std::istream& in);
RawTally parse_tally(std::string_view text);

void save_tally(const std::string& path, const RawTally& tally);
RawTally load_tally(const std::string& path);

/// Loads a checkpoint and reports where the sweep continues.
std::pair<RawTally, std::uint64_t> resume(const std::string& checkpoint_path);

/// Hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

std::string reverse_string(std::string_view s);
std::string complement_string(std::string_view s);

}  // namespace ctm
