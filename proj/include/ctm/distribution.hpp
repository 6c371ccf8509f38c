#pragma once

// Output frequency distributions D(n), their Coding-theorem complexities
// K_D(s) = -log2 D(n)(s), rank tables and cross-distribution constants.

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctm/campaign.hpp"

namespace ctm {

using Real = long double;

enum class Normalization : std::uint8_t { kHalting, kTotal };

std::string_view to_string(Normalization normalization);
Normalization parse_normalization(std::string_view text);

class Distribution {
 public:
  Distribution() = default;

  /// From integer counts. `total_mass` is only used by total normalization.
  Distribution(std::map<std::string, Count> counts, Count total_mass,
               Normalization normalization, std::string provenance = {});

  /// From probabilities only (an ingested table without counts).
  static Distribution from_probabilities(std::map<std::string, Real> probabilities,
                                         std::string provenance = {});

  std::optional<Real> probability(std::string_view s) const;
  std::optional<Count> count(std::string_view s) const;
  bool contains(std::string_view s) const { return probabilities_.count(std::string(s)) != 0; }

  const std::map<std::string, Real>& probabilities() const { return probabilities_; }
  const std::map<std::string, Count>& counts() const { return counts_; }
  bool has_counts() const { return !counts_.empty() || probabilities_.empty(); }
  Count halting_mass() const { return halting_mass_; }
  Count total_mass() const { return total_mass_; }
  Normalization normalization() const { return normalization_; }
  const std::string& provenance() const { return provenance_; }
  std::size_t size() const { return probabilities_.size(); }
  Real sum() const;

 private:
  std::map<std::string, Count> counts_;
  std::map<std::string, Real> probabilities_;
  Count halting_mass_ = 0;
  Count total_mass_ = 0;
  Normalization normalization_ = Normalization::kHalting;
  std::string provenance_;
};

/// Requires a completed (full-space-equivalent) tally.
Distribution build_distribution(const RawTally& tally,
                                Normalization normalization = Normalization::kHalting);

/// -log2 p, or nullopt when p <= 0 (the string was never produced).
std::optional<Real> coding_theorem(Real p);

struct ComplexityEntry {
  std::string string;
  Real probability = 0;
  Real complexity = 0;  // K_D, bits
  double rank = 0;      // 1-based; tied probabilities share the average rank
  std::optional<Count> count;
};

class ComplexityTable {
 public:
  ComplexityTable() = default;
  explicit ComplexityTable(std::vector<ComplexityEntry> entries);

  /// Decreasing probability; ties in increasing string order.
  const std::vector<ComplexityEntry>& entries() const { return entries_; }
  const ComplexityEntry* find(std::string_view s) const;
  std::size_t size() const { return entries_.size(); }
  /// Number of distinct probability values.
  std::size_t groups() const;

 private:
  std::vector<ComplexityEntry> entries_;
  std::unordered_map<std::string, std::size_t> position_;
};

ComplexityTable rank_table(const Distribution& d);

/// Average ranks of `values` in decreasing order (rank 1 = largest).
std::vector<double> average_ranks_descending(const std::vector<Real>& values);

/// max |K_a(s) - K_b(s)| over the strings of both tables, then over those
/// among the top 3/4, 1/2 and 1/4 by rank in `a`: rank <= f * N with N the
/// number of shared strings.
std::array<Real, 4> invariance_constants(const ComplexityTable& a,
                                         const ComplexityTable& b);

struct QueryResult {
  enum class Status : std::uint8_t { kFound, kAbsent, kSymmetryDefect };
  Status status = Status::kAbsent;
  Real complexity = 0;
  double rank = 0;
  Real probability = 0;
  // For a symmetry defect: the symmetric variant that is present.
  std::string witness;

  bool found() const { return status == Status::kFound; }
};

/// Looks up `s` (binary, else std::domain_error). When `s` is absent but a
/// reversed or complemented form is present the table violates the output
/// symmetry and the result says so instead of answering.
QueryResult query(const ComplexityTable& table, std::string_view s);

bool is_binary_string(std::string_view s);

class DistributionFormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tally-style header and "<string>\t<count>\t<probability>\t<K_D>" rows in
/// table order.
void export_distribution(std::ostream& out, const Distribution& d);

/// Accepts exported distributions and external tables with the same column
/// layout. Rows may give a count, a probability or both; '#' lines are
/// ignored except for "#halting_mass" / "#total_mass" / "#normalization".
/// Without counts, probabilities are taken as given (or derived from K_D
/// when that is the only value column, written "-" for missing fields).
Distribution ingest_distribution(std::istream& in, std::string provenance = {});
Distribution load_distribution(const std::string& path);

/// A tally file (completed) or an exported / external distribution file.
Distribution load_any_distribution(const std::string& path,
                                   Normalization normalization = Normalization::kHalting);

}  // namespace ctm
