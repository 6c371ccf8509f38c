#include "ctm/campaign.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "ctm/enumerator.hpp"

namespace ctm {
namespace {

int kind_slot(OutcomeKind kind) {
  for (int i = 0; i < kNonHaltingKinds; ++i)
    if (kNonHaltingOrder[i] == kind) return i;
  throw std::logic_error("halting is not a tally category");
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Per-worker accumulator.
struct Piece {
  std::unordered_map<std::string, Count> strings;
  std::array<Count, kNonHaltingKinds> nonhalting{};
  Count runs = 0;
};

class PieceSink : public LeafSink {
 public:
  explicit PieceSink(Piece& piece) : piece_(piece) {}
  void on_halt(const Execution& ex, Count weight, const DigitMasks&) override {
    piece_.strings[ex.tape.window()] += weight;
    piece_.runs += weight;
  }
  void on_nonhalt(OutcomeKind kind, std::uint64_t, Count weight) override {
    piece_.nonhalting[kind_slot(kind)] += weight;
    piece_.runs += weight;
  }

 private:
  Piece& piece_;
};

std::vector<std::uint8_t> blanks_of(const CampaignConfig& c) {
  if (c.blank_policy == BlankPolicy::kRunBoth) return {0, 1};
  return {0};
}

void run_units(const CampaignConfig& c, std::uint64_t first,
               std::uint64_t last, Piece& piece) {
  if (first >= last) return;
  if (!c.sampled()) {
    PieceSink sink(piece);
    for (std::uint8_t blank : blanks_of(c)) {
      EnumerationRequest req;
      req.n_states = c.n_states;
      req.mode = c.mode;
      req.lo = first;
      req.hi = last;
      req.blank = blank;
      req.cutoff = c.cutoff;
      enumerate_tree(req, sink);
    }
    return;
  }
  Simulator sim(c.cutoff);
  for (std::uint64_t draw = first; draw < last; ++draw) {
    const MachineSpec m = decode(c.n_states, c.mode, sample_index(c.seed, draw, c.lo, c.hi));
    for (std::uint8_t blank : blanks_of(c)) {
      const OutcomeKind kind = sim.classify(m, blank);
      if (kind == OutcomeKind::kHalted)
        ++piece.strings[sim.tape().window()];
      else
        ++piece.nonhalting[kind_slot(kind)];
      ++piece.runs;
    }
  }
}

void add_done(std::vector<WorkRange>& done, WorkRange r) {
  if (r.first >= r.second) return;
  done.push_back(r);
  std::sort(done.begin(), done.end());
  std::vector<WorkRange> merged;
  for (const WorkRange& x : done) {
    if (!merged.empty() && x.first < merged.back().second)
      throw std::domain_error("overlapping work ranges");
    if (!merged.empty() && x.first == merged.back().second)
      merged.back().second = x.second;
    else
      merged.push_back(x);
  }
  done = std::move(merged);
}

void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot replace checkpoint " + path + ": " + ec.message());
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw TallyFormatError("bad " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

std::string format_done(const std::vector<WorkRange>& done) {
  if (done.empty()) return "-";
  std::string out;
  for (const WorkRange& r : done) {
    if (!out.empty()) out += ',';
    out += std::to_string(r.first) + ":" + std::to_string(r.second);
  }
  return out;
}

std::vector<WorkRange> parse_done(std::string_view text) {
  std::vector<WorkRange> done;
  if (text == "-") return done;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) throw TallyFormatError("bad range list");
    done.emplace_back(parse_number<std::uint64_t>(item.substr(0, colon), "range"),
                      parse_number<std::uint64_t>(item.substr(colon + 1), "range"));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
  }
  return done;
}

bool is_binary(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

}  // namespace

std::string_view to_string(BlankPolicy policy) {
  return policy == BlankPolicy::kRunBoth ? "run-both" : "zero-only-with-completion";
}

BlankPolicy parse_blank_policy(std::string_view text) {
  if (text == "run-both") return BlankPolicy::kRunBoth;
  if (text == "zero-only-with-completion" || text == "zero-only")
    return BlankPolicy::kZeroWithCompletion;
  throw std::domain_error("unknown blank policy '" + std::string(text) + "'");
}

std::uint64_t default_cutoff(int n_states) { return n_states <= 4 ? 107 : 500; }

CampaignConfig CampaignConfig::whole(int n_states, Mode mode) {
  CampaignConfig c;
  c.n_states = n_states;
  c.mode = mode;
  c.cutoff = default_cutoff(n_states);
  c.lo = 0;
  c.hi = space_size(n_states, mode);
  c.blank_policy = mode == Mode::kFull ? BlankPolicy::kRunBoth
                                       : BlankPolicy::kZeroWithCompletion;
  return c;
}

bool CampaignConfig::exact() const {
  const std::uint64_t known = known_busy_beaver_steps(n_states);
  return known != 0 && cutoff >= known;
}

void CampaignConfig::validate() const {
  if (n_states < 1 || n_states > kMaxStates)
    throw std::domain_error("states must be in 1.." + std::to_string(kMaxStates));
  if (mode == Mode::kReduced && n_states < 2)
    throw std::domain_error("the reduced space needs at least two states");
  if (cutoff == 0) throw std::domain_error("cutoff must be at least 1");
  if (snapshot_every == 0) throw std::domain_error("snapshot cadence must be at least 1");
  const Count size = space_size(n_states, mode);
  if (lo > hi || hi > size)
    throw std::domain_error("index range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + ") exceeds the " +
                            std::string(to_string(mode)) + " space of size " +
                            std::to_string(size));
  if (sampled() && lo == hi) throw std::domain_error("cannot sample an empty range");
  if (mode == Mode::kReduced && blank_policy == BlankPolicy::kZeroWithCompletion) {
    const std::uint64_t units = work_end() - work_begin();
    const auto k = static_cast<std::uint64_t>(reduced_first_choices(n_states));
    if (units % k != 0)
      throw std::domain_error("reduced campaigns need a machine count divisible by " +
                              std::to_string(k) + " for completion");
  }
}

Index sample_index(std::uint64_t seed, std::uint64_t draw, Index lo, Index hi) {
  if (lo >= hi) throw std::domain_error("cannot sample an empty range");
  const std::uint64_t range = hi - lo;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t state = seed ^ (draw * 0xD1B54A32D192ED03ull);
  while (true) {
    const std::uint64_t x = splitmix64(state);
    if (x < limit) return lo + x % range;
  }
}

Count& RawTally::category(OutcomeKind kind) { return nonhalting[kind_slot(kind)]; }
Count RawTally::category(OutcomeKind kind) const { return nonhalting[kind_slot(kind)]; }

Count RawTally::halting() const {
  Count total = 0;
  for (const auto& [s, c] : strings) total += c;
  return total;
}

Count RawTally::nonhalting_total() const {
  Count total = 0;
  for (Count c : nonhalting) total += c;
  return total;
}

std::uint64_t RawTally::units_done() const {
  std::uint64_t total = 0;
  for (const WorkRange& r : done) total += r.second - r.first;
  return total;
}

bool RawTally::finished() const {
  return units_done() == config.work_end() - config.work_begin();
}

std::uint64_t RawTally::next_unit() const {
  if (done.empty()) return config.work_begin();
  if (done.size() > 1 || done.front().first != config.work_begin())
    throw std::domain_error("tally does not cover a prefix of its work; it cannot be resumed");
  return done.front().second;
}

RawTally empty_tally(const CampaignConfig& config) {
  config.validate();
  RawTally t;
  t.config = config;
  return t;
}

int default_jobs() {
  if (const char* env = std::getenv("CTM_JOBS")) {
    int jobs = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), jobs);
    if (ec == std::errc() && ptr == text.data() + text.size() && jobs > 0) return jobs;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

RawTally sweep(const CampaignConfig& config, const SweepOptions& options) {
  return continue_sweep(empty_tally(config), options);
}

RawTally continue_sweep(RawTally tally, const SweepOptions& options) {
  const CampaignConfig& c = tally.config;
  c.validate();
  if (tally.completed) throw std::domain_error("cannot continue a completed tally");
  const int jobs = std::max(1, options.jobs);
  std::uint64_t next = tally.next_unit();
  const std::uint64_t end = c.work_end();
  std::uint64_t budget = options.stop_after == 0 ? UINT64_MAX : options.stop_after;

  while (next < end && budget > 0) {
    const std::uint64_t chunk_end = next + std::min({c.snapshot_every, end - next, budget});
    const std::uint64_t width = chunk_end - next;
    const std::uint64_t pieces =
        std::min<std::uint64_t>(width, jobs == 1 ? 1 : static_cast<std::uint64_t>(jobs) * 4);

    std::vector<Piece> results(pieces);
    std::atomic<std::uint64_t> cursor{0};
    auto worker = [&] {
      for (std::uint64_t p; (p = cursor.fetch_add(1)) < pieces;) {
        const std::uint64_t a = next + width * p / pieces;
        const std::uint64_t b = next + width * (p + 1) / pieces;
        run_units(c, a, b, results[p]);
      }
    };
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
    }
    for (const Piece& piece : results) {
      for (const auto& [s, count] : piece.strings) tally.strings[s] += count;
      for (int i = 0; i < kNonHaltingKinds; ++i) tally.nonhalting[i] += piece.nonhalting[i];
      tally.machines += piece.runs;
    }
    add_done(tally.done, {next, chunk_end});
    next = chunk_end;
    budget -= width;
    if (!options.checkpoint_path.empty())
      write_atomically(options.checkpoint_path, format_tally(tally));
    if (options.on_snapshot) options.on_snapshot(tally);
  }
  return tally;
}

RawTally complete_reduced(const RawTally& tally) {
  const CampaignConfig& c = tally.config;
  if (tally.completed) throw std::domain_error("tally is already completed");
  if (c.mode != Mode::kReduced || c.blank_policy != BlankPolicy::kZeroWithCompletion)
    throw std::domain_error("completion applies to reduced blank-0 tallies only");
  const Count k = static_cast<Count>(reduced_first_choices(c.n_states));
  const Count m = tally.machines;
  if (m % k != 0)
    throw std::domain_error("machine count " + std::to_string(m) +
                            " is not divisible by " + std::to_string(k));
  RawTally out = tally;

  // Machines whose first move is to the left: mirror images.
  std::map<std::string, Count> step;
  for (const auto& [s, count] : out.strings) {
    step[s] += count;
    step[reverse_string(s)] += count;
  }
  out.strings = std::move(step);
  for (Count& v : out.nonhalting) v *= 2;

  // First transition halts: one step, output is the written symbol.
  out.strings["0"] += m / k;
  out.strings["1"] += m / k;

  // First transition stays in state 1: it moves onto fresh blank cells forever,
  // the one-step escapee pattern.
  out.category(OutcomeKind::kShortEscapee) += 2 * m / (k / 2);

  // Blank 1: complemented machines.
  step.clear();
  for (const auto& [s, count] : out.strings) {
    step[s] += count;
    step[complement_string(s)] += count;
  }
  out.strings = std::move(step);
  for (Count& v : out.nonhalting) v *= 2;

  out.machines = m * static_cast<Count>(action_count(c.n_states)) / (k / 2);
  out.completed = true;
  return out;
}

RawTally merge(const std::vector<RawTally>& tallies) {
  if (tallies.empty()) throw std::domain_error("nothing to merge");
  const RawTally& first = tallies.front();
  RawTally out;
  out.config = first.config;
  out.completed = first.completed;
  for (const RawTally& t : tallies) {
    CampaignConfig a = t.config, b = first.config;
    if (!a.sampled()) {
      a.lo = b.lo = 0;
      a.hi = b.hi = 0;
    }
    if (!(a == b) || t.completed != first.completed)
      throw std::domain_error("cannot merge tallies with different configurations");
    if (!t.config.sampled() && t.config.lo < t.config.hi) {
      if (out.config.lo == out.config.hi) {
        out.config.lo = t.config.lo;
        out.config.hi = t.config.hi;
      } else {
        out.config.lo = std::min(out.config.lo, t.config.lo);
        out.config.hi = std::max(out.config.hi, t.config.hi);
      }
    }
  }
  for (const RawTally& t : tallies) {
    for (const WorkRange& r : t.done) {
      try {
        add_done(out.done, r);
      } catch (const std::domain_error&) {
        throw std::domain_error("cannot merge tallies with overlapping ranges");
      }
    }
    for (const auto& [s, count] : t.strings) out.strings[s] += count;
    for (int i = 0; i < kNonHaltingKinds; ++i) out.nonhalting[i] += t.nonhalting[i];
    out.machines += t.machines;
  }
  return out;
}

std::string format_tally_body(const RawTally& tally) {
  std::vector<std::pair<std::string, Count>> rows(tally.strings.begin(), tally.strings.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  std::string out;
  for (const auto& [s, count] : rows) {
    out += s;
    out += '\t';
    out += std::to_string(count);
    out += '\n';
  }
  for (int i = 0; i < kNonHaltingKinds; ++i) {
    out += '!';
    out += to_string(kNonHaltingOrder[i]);
    out += '\t';
    out += std::to_string(tally.nonhalting[i]);
    out += '\n';
  }
  return out;
}

std::string format_tally(const RawTally& t) {
  const CampaignConfig& c = t.config;
  std::ostringstream h;
  h << "#format\tctm-tally/" << kTallyFormatVersion << '\n'
    << "#n\t" << c.n_states << '\n'
    << "#cutoff\t" << c.cutoff << '\n'
    << "#mode\t" << to_string(c.mode) << '\n'
    << "#lo\t" << c.lo << '\n'
    << "#hi\t" << c.hi << '\n'
    << "#machines\t" << t.machines << '\n'
    << "#blank_policy\t" << to_string(c.blank_policy) << '\n'
    << "#snapshot_every\t" << c.snapshot_every << '\n'
    << "#samples\t" << c.samples << '\n'
    << "#seed\t" << c.seed << '\n'
    << "#codec\t" << kCodecVersion << '\n'
    << "#done\t" << format_done(t.done) << '\n'
    << "#completed\t" << (t.completed ? 1 : 0) << '\n'
    << "#exact\t" << (c.exact() ? 1 : 0) << '\n';
  std::string content = h.str() + format_tally_body(t);
  return content + "#sha256:" + sha256_hex(content) + "\n";
}

void write_tally(std::ostream& out, const RawTally& tally) { out << format_tally(tally); }

RawTally parse_tally(std::string_view text) {
  const std::string_view marker = "#sha256:";
  const std::size_t pos = text.rfind(marker);
  if (pos == std::string_view::npos || (pos != 0 && text[pos - 1] != '\n'))
    throw TallyFormatError("missing checksum trailer (truncated file?)");
  std::string_view digest = text.substr(pos + marker.size());
  while (!digest.empty() && (digest.back() == '\n' || digest.back() == '\r'))
    digest.remove_suffix(1);
  const std::string_view content = text.substr(0, pos);
  if (digest != sha256_hex(content)) throw TallyFormatError("checksum mismatch");

  RawTally t;
  CampaignConfig& c = t.config;
  bool seen_format = false;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t stop = content.find('\n', start);
    if (stop == std::string_view::npos) stop = content.size();
    const std::string_view line = content.substr(start, stop - start);
    start = stop + 1;
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw TallyFormatError("line without a tab: " + std::string(line));
    const std::string_view key = line.substr(0, tab);
    const std::string_view value = line.substr(tab + 1);
    if (key.front() == '#') {
      const std::string_view k = key.substr(1);
      if (k == "format") {
        if (value != "ctm-tally/" + std::to_string(kTallyFormatVersion))
          throw TallyFormatError("unsupported format " + std::string(value));
        seen_format = true;
      } else if (k == "n") {
        c.n_states = parse_number<int>(value, "n");
      } else if (k == "cutoff") {
        c.cutoff = parse_number<std::uint64_t>(value, "cutoff");
      } else if (k == "mode") {
        c.mode = parse_mode(value);
      } else if (k == "lo") {
        c.lo = parse_number<Index>(value, "lo");
      } else if (k == "hi") {
        c.hi = parse_number<Index>(value, "hi");
      } else if (k == "machines") {
        t.machines = parse_number<Count>(value, "machines");
      } else if (k == "blank_policy") {
        c.blank_policy = parse_blank_policy(value);
      } else if (k == "snapshot_every") {
        c.snapshot_every = parse_number<std::uint64_t>(value, "snapshot cadence");
      } else if (k == "samples") {
        c.samples = parse_number<std::uint64_t>(value, "samples");
      } else if (k == "seed") {
        c.seed = parse_number<std::uint64_t>(value, "seed");
      } else if (k == "codec") {
        if (parse_number<int>(value, "codec") != kCodecVersion)
          throw TallyFormatError("tally written with another index codec");
      } else if (k == "done") {
        t.done = parse_done(value);
      } else if (k == "completed") {
        t.completed = value == "1";
      }
      // Unknown header keys are informational.
    } else if (key.front() == '!') {
      const std::string_view name = key.substr(1);
      bool found = false;
      for (int i = 0; i < kNonHaltingKinds; ++i)
        if (to_string(kNonHaltingOrder[i]) == name) {
          t.nonhalting[i] = parse_number<Count>(value, "category count");
          found = true;
        }
      if (!found) throw TallyFormatError("unknown category " + std::string(name));
    } else {
      if (!is_binary(key)) throw TallyFormatError("not a binary string: " + std::string(key));
      t.strings[std::string(key)] += parse_number<Count>(value, "count");
    }
  }
  if (!seen_format) throw TallyFormatError("missing format header");
  try {
    c.validate();
  } catch (const std::domain_error& e) {
    throw TallyFormatError(std::string("invalid configuration: ") + e.what());
  }
  if (t.halting() + t.nonhalting_total() != t.machines)
    throw TallyFormatError("counts do not add up to the machine count");
  return t;
}

RawTally read_tally(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_tally(buffer.str());
}

void save_tally(const std::string& path, const RawTally& tally) {
  write_atomically(path, format_tally(tally));
}

RawTally load_tally(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TallyFormatError("cannot open " + path);
  return read_tally(in);
}

std::pair<RawTally, std::uint64_t> resume(const std::string& checkpoint_path) {
  RawTally t = load_tally(checkpoint_path);
  const std::uint64_t next = t.next_unit();
  return {std::move(t), next};
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string reverse_string(std::string_view s) { return {s.rbegin(), s.rend()}; }

std::string complement_string(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = ch == '0' ? '1' : '0';
  return out;
}

}  // namespace ctm
