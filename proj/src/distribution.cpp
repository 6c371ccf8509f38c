#include "ctm/distribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ctm {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const std::size_t tab = line.find('\t');
    out.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line = line.substr(tab + 1);
  }
  return out;
}

std::optional<Count> parse_count(std::string_view text) {
  Count value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<Real> parse_real(std::string_view text) {
  if (text.empty() || text == "-") return std::nullopt;
  const std::string copy(text);
  char* end = nullptr;
  const Real value = std::strtold(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size()) return std::nullopt;
  return value;
}

std::string format_real(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.18Lg", x);
  return buf;
}

}  // namespace

std::string_view to_string(Normalization normalization) {
  return normalization == Normalization::kHalting ? "halting" : "total";
}

Normalization parse_normalization(std::string_view text) {
  if (text == "halting") return Normalization::kHalting;
  if (text == "total") return Normalization::kTotal;
  throw std::domain_error("unknown normalization '" + std::string(text) + "'");
}

bool is_binary_string(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

Distribution::Distribution(std::map<std::string, Count> counts, Count total_mass,
                           Normalization normalization, std::string provenance)
    : counts_(std::move(counts)),
      total_mass_(total_mass),
      normalization_(normalization),
      provenance_(std::move(provenance)) {
  for (const auto& [s, c] : counts_) halting_mass_ += c;
  if (halting_mass_ == 0) throw std::domain_error("distribution without halting machines");
  if (total_mass_ < halting_mass_) {
    if (normalization == Normalization::kTotal)
      throw std::domain_error("total mass below halting mass");
    total_mass_ = halting_mass_;
  }
  const Real denominator = static_cast<Real>(
      normalization == Normalization::kHalting ? halting_mass_ : total_mass_);
  for (const auto& [s, c] : counts_) probabilities_[s] = static_cast<Real>(c) / denominator;
}

Distribution Distribution::from_probabilities(std::map<std::string, Real> probabilities,
                                              std::string provenance) {
  Distribution d;
  for (const auto& [s, p] : probabilities)
    if (!(p > 0) || p > 1) throw std::domain_error("probability of " + s + " outside (0, 1]");
  d.probabilities_ = std::move(probabilities);
  d.provenance_ = std::move(provenance);
  return d;
}

std::optional<Real> Distribution::probability(std::string_view s) const {
  const auto it = probabilities_.find(std::string(s));
  if (it == probabilities_.end()) return std::nullopt;
  return it->second;
}

std::optional<Count> Distribution::count(std::string_view s) const {
  const auto it = counts_.find(std::string(s));
  if (it == counts_.end()) return std::nullopt;
  return it->second;
}

Real Distribution::sum() const {
  if (!counts_.empty()) {
    const Count denominator = normalization_ == Normalization::kHalting ? halting_mass_ : total_mass_;
    return static_cast<Real>(halting_mass_) / static_cast<Real>(denominator);
  }
  Real total = 0;
  for (const auto& [s, p] : probabilities_) total += p;
  return total;
}

Distribution build_distribution(const RawTally& tally, Normalization normalization) {
  if (!tally.completed && tally.config.mode != Mode::kFull)
    throw std::domain_error("reduced tallies must be completed before building a distribution");
  std::string provenance = "n=" + std::to_string(tally.config.n_states) +
                           " cutoff=" + std::to_string(tally.config.cutoff) +
                           " mode=" + std::string(to_string(tally.config.mode));
  return Distribution(tally.strings, tally.machines, normalization, std::move(provenance));
}

std::optional<Real> coding_theorem(Real p) {
  if (!(p > 0)) return std::nullopt;
  if (p > 1) throw std::domain_error("probability above 1");
  return -std::log2(p);
}

std::vector<double> average_ranks_descending(const std::vector<Real>& values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

ComplexityTable::ComplexityTable(std::vector<ComplexityEntry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const ComplexityEntry& a, const ComplexityEntry& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return a.string < b.string;
  });
  for (std::size_t i = 0; i < entries_.size();) {
    std::size_t j = i;
    while (j < entries_.size() && entries_[j].probability == entries_[i].probability) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) entries_[k].rank = rank;
    i = j;
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) position_[entries_[i].string] = i;
}

const ComplexityEntry* ComplexityTable::find(std::string_view s) const {
  const auto it = position_.find(std::string(s));
  return it == position_.end() ? nullptr : &entries_[it->second];
}

std::size_t ComplexityTable::groups() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (i == 0 || entries_[i].probability != entries_[i - 1].probability) ++n;
  return n;
}

ComplexityTable rank_table(const Distribution& d) {
  std::vector<ComplexityEntry> entries;
  entries.reserve(d.size());
  for (const auto& [s, p] : d.probabilities()) {
    ComplexityEntry e;
    e.string = s;
    e.probability = p;
    e.complexity = *coding_theorem(p);
    e.count = d.count(s);
    entries.push_back(std::move(e));
  }
  return ComplexityTable(std::move(entries));
}

std::array<Real, 4> invariance_constants(const ComplexityTable& a, const ComplexityTable& b) {
  std::vector<std::pair<double, Real>> shared;  // (rank in a, |K_a - K_b|)
  for (const ComplexityEntry& e : a.entries())
    if (const ComplexityEntry* other = b.find(e.string))
      shared.emplace_back(e.rank, std::fabs(e.complexity - other->complexity));
  if (shared.empty()) throw std::domain_error("the tables share no string");
  // A string is in the top fraction f when its (average) rank is at most
  // f times the number of shared strings, so tie groups stay together.
  std::array<Real, 4> c{};
  static constexpr double kFractions[4] = {1.0, 0.75, 0.5, 0.25};
  const double n = static_cast<double>(shared.size());
  for (int q = 0; q < 4; ++q) {
    Real worst = 0;
    for (const auto& [rank, diff] : shared)
      if (q == 0 || rank <= kFractions[q] * n) worst = std::max(worst, diff);
    c[q] = worst;
  }
  return c;
}

QueryResult query(const ComplexityTable& table, std::string_view s) {
  if (!is_binary_string(s)) throw std::domain_error("not a binary string: '" + std::string(s) + "'");
  QueryResult r;
  if (const ComplexityEntry* e = table.find(s)) {
    r.status = QueryResult::Status::kFound;
    r.complexity = e->complexity;
    r.rank = e->rank;
    r.probability = e->probability;
    return r;
  }
  const std::string rev = reverse_string(s);
  const std::string comp = complement_string(s);
  for (const std::string& variant : {rev, comp, reverse_string(comp)}) {
    if (table.find(variant)) {
      r.status = QueryResult::Status::kSymmetryDefect;
      r.witness = variant;
      return r;
    }
  }
  return r;
}

void export_distribution(std::ostream& out, const Distribution& d) {
  out << "#format\tctm-distribution/1\n";
  out << "#normalization\t" << to_string(d.normalization()) << '\n';
  if (d.has_counts()) {
    out << "#halting_mass\t" << d.halting_mass() << '\n';
    out << "#total_mass\t" << d.total_mass() << '\n';
  }
  if (!d.provenance().empty()) out << "#provenance\t" << d.provenance() << '\n';
  out << "#columns\tstring\tcount\tprobability\tK_D\n";
  const ComplexityTable table = rank_table(d);
  for (const ComplexityEntry& e : table.entries()) {
    out << e.string << '\t' << (e.count ? std::to_string(*e.count) : std::string("-")) << '\t'
        << format_real(e.probability) << '\t' << format_real(e.complexity) << '\n';
  }
}

Distribution ingest_distribution(std::istream& in, std::string provenance) {
  std::map<std::string, Count> counts;
  std::map<std::string, Real> probabilities;
  bool all_counts = true;
  std::optional<Count> total_mass;
  Normalization normalization = Normalization::kHalting;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '!') continue;
    const auto fields = split_tabs(line);
    if (line.front() == '#') {
      if (fields.size() >= 2 && fields[0] == "#total_mass") total_mass = parse_count(fields[1]);
      if (fields.size() >= 2 && fields[0] == "#normalization") normalization = parse_normalization(fields[1]);
      if (fields.size() >= 2 && fields[0] == "#provenance" && provenance.empty())
        provenance = std::string(fields[1]);
      continue;
    }
    auto fail = [&](const std::string& why) {
      return DistributionFormatError("line " + std::to_string(line_no) + ": " + why);
    };
    const std::string s(fields[0]);
    if (!is_binary_string(s)) throw fail("not a binary string");
    if (fields.size() < 2) throw fail("missing value column");
    if (counts.count(s) || probabilities.count(s)) throw fail("duplicate string " + s);
    const std::optional<Count> c = parse_count(fields[1]);
    std::optional<Real> p;
    if (fields.size() >= 3) p = parse_real(fields[2]);
    if (!c && fields.size() == 2) p = parse_real(fields[1]);
    if (!p && fields.size() >= 4) {
      if (const auto k = parse_real(fields[3])) p = std::exp2(-*k);
    }
    if (c) counts[s] = *c;
    else all_counts = false;
    if (p) probabilities[s] = *p;
    else if (!c) throw fail("no count, probability or K_D");
  }
  if (all_counts && !counts.empty()) {
    Count halting = 0;
    for (const auto& [s, c] : counts) halting += c;
    return Distribution(std::move(counts), total_mass.value_or(halting), normalization,
                        std::move(provenance));
  }
  for (const auto& [s, c] : counts)
    if (!probabilities.count(s)) throw DistributionFormatError("mixed rows: " + s + " has only a count");
  if (probabilities.empty()) throw DistributionFormatError("empty distribution");
  return Distribution::from_probabilities(std::move(probabilities), std::move(provenance));
}

Distribution load_distribution(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DistributionFormatError("cannot open " + path);
  return ingest_distribution(in, path);
}

Distribution load_any_distribution(const std::string& path, Normalization normalization) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DistributionFormatError("cannot open " + path);
  std::string first;
  std::getline(in, first);
  if (first.rfind("#format\tctm-tally/", 0) == 0) {
    RawTally t = load_tally(path);
    if (!t.completed && t.config.mode == Mode::kReduced) t = complete_reduced(t);
    return build_distribution(t, normalization);
  }
  in.seekg(0);
  return ingest_distribution(in, path);
}

}  // namespace ctm
