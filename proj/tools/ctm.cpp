// ctm: sweeps, distributions and analyses from the command line.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctm/analysis.hpp"
#include "ctm/campaign.hpp"
#include "ctm/distribution.hpp"
#include "ctm/machine.hpp"
#include "ctm/simulator.hpp"

#ifndef CTM_VERSION
#define CTM_VERSION "unknown"
#endif

namespace {

using namespace ctm;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A non-zero exit that is not an error message ("absent" in strict mode).
struct QuietFailure {
  int code;
};

// Accepts 1000000, 1e9, 10^9 and 2*10^9.
std::uint64_t parse_count(const std::string& text) {
  auto term = [&](const std::string& t) -> long double {
    if (t.empty()) throw UsageError("bad number '" + text + "'");
    if (auto caret = t.find('^'); caret != std::string::npos) {
      const long double base = std::stold(t.substr(0, caret));
      const long double exp = std::stold(t.substr(caret + 1));
      return std::pow(base, exp);
    }
    std::size_t used = 0;
    const long double v = std::stold(t, &used);
    if (used != t.size()) throw UsageError("bad number '" + text + "'");
    return v;
  };
  long double value = 1;
  try {
    std::size_t start = 0;
    while (true) {
      const std::size_t star = text.find('*', start);
      value *= term(text.substr(start, star == std::string::npos ? std::string::npos : star - start));
      if (star == std::string::npos) break;
      start = star + 1;
    }
  } catch (const std::logic_error&) {
    throw UsageError("bad number '" + text + "'");
  }
  if (!(value >= 0) || value > 1.8e19L || value != std::floor(value))
    throw UsageError("not a non-negative integer: '" + text + "'");
  return static_cast<std::uint64_t>(value);
}

std::string iso_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string joined_argv(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

std::string g_argv;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

using Fields = std::vector<std::pair<std::string, std::string>>;

Fields config_fields(const CampaignConfig& c) {
  return {{"n", std::to_string(c.n_states)},
          {"cutoff", std::to_string(c.cutoff)},
          {"mode", std::string(to_string(c.mode))},
          {"lo", std::to_string(c.lo)},
          {"hi", std::to_string(c.hi)},
          {"blank_policy", std::string(to_string(c.blank_policy))},
          {"snapshot_every", std::to_string(c.snapshot_every)},
          {"samples", std::to_string(c.samples)},
          {"seed", std::to_string(c.seed)}};
}

// "<output>.manifest": what produced the file. Only the final line (the
// timestamp) differs between identical invocations.
void write_manifest(const std::string& output, const std::string& command,
                    const Fields& fields) {
  std::ofstream m(output + ".manifest", std::ios::binary);
  if (!m) throw std::runtime_error("cannot write " + output + ".manifest");
  m << "#format\tctm-manifest/1\n"
    << "command\t" << command << '\n'
    << "argv\t" << g_argv << '\n'
    << "code_version\t" << CTM_VERSION << '\n'
    << "codec_version\t" << kCodecVersion << '\n'
    << "tally_format\t" << kTallyFormatVersion << '\n';
  for (const auto& [k, v] : fields) m << k << '\t' << v << '\n';
  m << "output\t" << std::filesystem::path(output).filename().string() << '\n'
    << "output_sha256\t" << sha256_hex(read_file(output)) << '\n'
    << "created\t" << iso_now() << '\n';
}

// Text commands print to stdout, or to --out with a manifest beside it.
void emit(const std::string& text, const std::string& out, const std::string& command,
          const Fields& fields) {
  if (out.empty()) {
    std::cout << text << std::flush;
    return;
  }
  {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
  }
  write_manifest(out, command, fields);
}

std::string num(long double x, int digits) { return format_number(static_cast<double>(x), digits); }

void check_strings(const std::vector<std::string>& strings) {
  for (const auto& s : strings)
    if (!is_binary_string(s)) throw UsageError("not a binary string: '" + s + "'");
}

// --- sweep ---------------------------------------------------------------

struct SweepArgs {
  int n = 2;
  std::string mode = "reduced";
  std::string cutoff;
  std::string range;
  std::string snapshot_every = "10^9";
  int jobs = 0;
  std::string out;
  std::string resume;
  std::string samples = "0";
  std::uint64_t seed = 0;
  std::string blank_policy;
  bool quiet = false;
};

CampaignConfig sweep_config(const SweepArgs& a) {
  CampaignConfig c;
  try {
    c = CampaignConfig::whole(a.n, parse_mode(a.mode));
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  if (!a.cutoff.empty()) c.cutoff = parse_count(a.cutoff);
  if (!a.blank_policy.empty()) {
    try {
      c.blank_policy = parse_blank_policy(a.blank_policy);
    } catch (const std::domain_error& e) {
      throw UsageError(e.what());
    }
  }
  if (!a.range.empty()) {
    const auto colon = a.range.find(':');
    if (colon == std::string::npos) throw UsageError("--range takes lo:hi");
    const std::string lo = a.range.substr(0, colon), hi = a.range.substr(colon + 1);
    if (!lo.empty()) c.lo = parse_count(lo);
    if (!hi.empty()) c.hi = parse_count(hi);
  }
  c.snapshot_every = parse_count(a.snapshot_every);
  c.samples = parse_count(a.samples);
  c.seed = a.seed;
  try {
    c.validate();
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  return c;
}

int run_sweep(const SweepArgs& a) {
  SweepOptions options;
  options.jobs = a.jobs > 0 ? a.jobs : default_jobs();
  RawTally start;
  if (!a.resume.empty()) {
    auto [tally, next] = resume(a.resume);
    start = std::move(tally);
    if (!a.quiet)
      std::cerr << "resuming at unit " << next << " of " << start.config.work_end() << '\n';
  } else {
    start = empty_tally(sweep_config(a));
  }
  const std::string out = a.out.empty() ? a.resume : a.out;
  if (out.empty()) throw UsageError("--out is required");
  options.checkpoint_path = out;
  const auto t0 = std::chrono::steady_clock::now();
  if (!a.quiet) {
    options.on_snapshot = [&](const RawTally& t) {
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cerr << "snapshot: " << t.units_done() << " / "
                << (t.config.work_end() - t.config.work_begin()) << " units, "
                << format_number(secs, 4) << " s\n";
    };
  }
  RawTally result = continue_sweep(std::move(start), options);
  save_tally(out, result);
  Fields fields = config_fields(result.config);
  fields.emplace_back("jobs", std::to_string(options.jobs));
  write_manifest(out, "sweep", fields);
  if (!a.quiet)
    std::cerr << "wrote " << out << ": " << result.strings.size() << " strings, "
              << result.halting() << " halting of " << result.machines << " runs\n";
  return 0;
}

// --- merge / dist --------------------------------------------------------

RawTally merged(const std::vector<std::string>& inputs) {
  std::vector<RawTally> tallies;
  for (const auto& path : inputs) tallies.push_back(load_tally(path));
  return tallies.size() == 1 ? tallies.front() : merge(tallies);
}

int run_merge(const std::vector<std::string>& inputs, const std::string& out) {
  RawTally t = merged(inputs);
  save_tally(out, t);
  Fields fields = config_fields(t.config);
  for (const auto& in : inputs) fields.emplace_back("input", in);
  write_manifest(out, "merge", fields);
  return 0;
}

int run_dist(const std::vector<std::string>& inputs, const std::string& out,
             const std::string& normalization) {
  const Normalization norm = parse_normalization(normalization);
  Distribution d;
  Fields fields{{"normalization", std::string(to_string(norm))}};
  for (const auto& in : inputs) fields.emplace_back("input", in);
  if (inputs.size() == 1) {
    d = load_any_distribution(inputs.front(), norm);
  } else {
    RawTally t = merged(inputs);
    if (!t.completed && t.config.mode == Mode::kReduced) t = complete_reduced(t);
    d = build_distribution(t, norm);
  }
  std::ostringstream text;
  export_distribution(text, d);
  emit(text.str(), out, "dist", fields);
  return 0;
}

// --- k / compare ---------------------------------------------------------

int run_k(const std::string& dist, const std::vector<std::string>& strings, bool strict,
          int digits, const std::string& out) {
  check_strings(strings);
  const ComplexityTable table = rank_table(load_any_distribution(dist));
  std::ostringstream text;
  text << "string\tprobability\tK\trank\n";
  bool missing = false;
  for (const auto& s : strings) {
    const QueryResult r = query(table, s);
    text << (s.empty() ? "-" : s) << '\t';
    switch (r.status) {
      case QueryResult::Status::kFound:
        text << num(r.probability, digits) << '\t' << num(r.complexity, digits) << '\t'
             << format_number(r.rank, 12) << '\n';
        break;
      case QueryResult::Status::kAbsent:
        text << "absent\t-\t-\n";
        missing = true;
        break;
      case QueryResult::Status::kSymmetryDefect:
        text << "symmetry-defect\t-\t-\t" << r.witness << '\n';
        missing = true;
        break;
    }
  }
  emit(text.str(), out, "k", {{"dist", dist}});
  if (strict && missing) throw QuietFailure{1};
  return 0;
}

int run_compare(const std::string& a_path, const std::string& b_path, int digits,
                bool list_outliers, const std::string& out) {
  const Distribution a = load_any_distribution(a_path);
  const Distribution b = load_any_distribution(b_path);
  const Agreement g = agreement(a, b);
  const auto c = invariance_constants(rank_table(a), rank_table(b));
  std::ostringstream text;
  text << "shared\t" << g.shared << '\n'
       << "pearson_r2\t" << format_number(g.pearson_r2, digits) << '\n'
       << "spearman_rho\t" << format_number(g.spearman_rho, digits) << '\n'
       << "invariance_all\t" << num(c[0], digits) << '\n'
       << "invariance_top_3/4\t" << num(c[1], digits) << '\n'
       << "invariance_top_1/2\t" << num(c[2], digits) << '\n'
       << "invariance_top_1/4\t" << num(c[3], digits) << '\n'
       << "outliers_above_20\t" << g.above_20.size() << '\n'
       << "outliers_5_to_20\t" << g.from_5_to_20.size() << '\n'
       << "outliers_2_to_5\t" << g.from_2_to_5.size() << '\n';
  if (list_outliers) {
    for (const auto* bucket : {&g.above_20, &g.from_5_to_20, &g.from_2_to_5})
      for (const auto& o : *bucket)
        text << "outlier\t" << o.string << '\t' << format_number(o.t, digits) << '\n';
  }
  emit(text.str(), out, "compare", {{"a", a_path}, {"b", b_path}});
  return 0;
}

// --- analyze -------------------------------------------------------------

struct FitArgs {
  int n = 5;
  std::string mode = "full";
  std::string samples = "10^5";
  std::uint64_t seed = 1;
  std::string cutoff = "5000";
  std::string bound_cutoff;
  std::string tsv;
  int digits = 10;
};

int run_fit(const FitArgs& a, const std::string& out) {
  Mode mode;
  try {
    mode = parse_mode(a.mode);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  const std::uint64_t samples = parse_count(a.samples);
  const std::uint64_t cutoff = parse_count(a.cutoff);
  if (cutoff == 0) throw UsageError("cutoff must be at least 1");
  const std::uint64_t bound =
      a.bound_cutoff.empty() ? default_cutoff(a.n) : parse_count(a.bound_cutoff);
  const RuntimeHistogram h = samples == 0 ? exhaustive_runtimes(a.n, mode, cutoff)
                                          : sample_runtimes(a.n, mode, samples, a.seed, cutoff);
  Fields fields{{"n", std::to_string(a.n)},          {"mode", a.mode},
                {"samples", std::to_string(samples)}, {"seed", std::to_string(a.seed)},
                {"cutoff", std::to_string(cutoff)},   {"bound_cutoff", std::to_string(bound)}};
  std::optional<ExpFit> fit;
  std::string failure;
  try {
    fit = fit_runtime_tail(h);
  } catch (const FitError& e) {
    failure = e.what();
  }
  if (!a.tsv.empty()) emit(runtime_tsv(h, fit), a.tsv, "analyze fit", fields);
  if (!fit) throw std::runtime_error("fit failed: " + failure);
  std::ostringstream text;
  text << "machines\t" << h.sample_size << '\n'
       << "halting\t" << h.halting() << '\n'
       << "longest\t" << h.cutoff << '\n'
       << "alpha\t" << format_number(fit->alpha, a.digits) << '\n'
       << "lambda\t" << format_number(fit->lambda, a.digits) << '\n'
       << "rss\t" << format_number(fit->rss, a.digits) << '\n'
       << "iterations\t" << fit->iterations << '\n'
       << "missed_mass_log10_at_" << bound << '\t'
       << format_number(missed_mass_log10(*fit, bound), a.digits) << '\n';
  emit(text.str(), out, "analyze fit", fields);
  return 0;
}

int run_bayes(const std::string& dist, const std::vector<std::string>& strings, int digits,
              const std::string& out) {
  check_strings(strings);
  const Distribution d = load_any_distribution(dist);
  std::ostringstream text;
  text << "string\tposterior_random\n";
  for (const auto& s : strings)
    text << s << '\t' << num(bayes_random_posterior(d, s), digits) << '\n';
  emit(text.str(), out, "analyze bayes", {{"dist", dist}});
  return 0;
}

int run_climbers(const std::string& dist, std::size_t top, const std::string& out) {
  std::ostringstream text;
  for (const auto& s : climbers(rank_table(load_any_distribution(dist)), top)) text << s << '\n';
  emit(text.str(), out, "analyze climbers", {{"dist", dist}, {"top", std::to_string(top)}});
  return 0;
}

int run_probes(const std::string& dist, const std::vector<std::string>& strings, int min_length,
               int max_length, int digits, const std::string& out) {
  check_strings(strings);
  const Distribution d = load_any_distribution(dist);
  Fields fields{{"dist", dist}};
  if (strings.empty()) {
    fields.emplace_back("min_length", std::to_string(min_length));
    fields.emplace_back("max_length", std::to_string(max_length));
    emit(probe_summary_tsv(probe_summary(d, min_length, max_length)), out, "analyze probes",
         fields);
    return 0;
  }
  auto cell = [&](const std::optional<Real>& p) { return p ? num(*p, digits) : std::string("absent"); };
  std::ostringstream text;
  text << "string\tP(s)\tP(ss)\tP(s_reverse)\tP(s_zeros)\n";
  for (const auto& s : strings) {
    const Probes p = probes(d, s);
    text << s << '\t' << cell(d.probability(s)) << '\t' << cell(p.repetition) << '\t'
         << cell(p.symmetrization) << '\t' << cell(p.completion) << '\n';
  }
  emit(text.str(), out, "analyze probes", fields);
  return 0;
}

int run_lengths(const std::string& dist, const std::string& out) {
  emit(length_laws_tsv(length_laws(load_any_distribution(dist))), out, "analyze lengths",
       {{"dist", dist}});
  return 0;
}

// --- census / bb ---------------------------------------------------------

int run_census(int n, const std::string& out) {
  SpaceCensus c;
  try {
    c = census(n);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  std::ostringstream text;
  text << "n\t" << c.n_states << '\n'
       << "full_count\t" << c.full_count << '\n'
       << "reduced_count\t" << c.reduced_count << '\n'
       << "no_halt_transition_count\t" << c.no_halt_transition_count << '\n';
  emit(text.str(), out, "census", {{"n", std::to_string(n)}});
  return 0;
}

int run_bb(int n, const std::string& cutoff_text, bool allow_lower_bound, bool list,
           const std::string& out) {
  if (n < 1 || n > kMaxStates) throw UsageError("states must be in 1.." + std::to_string(kMaxStates));
  std::uint64_t cutoff = cutoff_text.empty() ? known_busy_beaver_steps(n) : parse_count(cutoff_text);
  if (cutoff == 0) cutoff = default_cutoff(n);
  const BusyBeaverEstimate e = busy_beaver_estimate(n, cutoff, allow_lower_bound);
  std::ostringstream text;
  text << "n\t" << n << '\n'
       << "cutoff\t" << cutoff << '\n'
       << "max_steps\t" << e.max_steps << '\n'
       << "max_ones\t" << e.max_ones << '\n'
       << "halting\t" << e.halting << '\n'
       << "lower_bound\t" << (e.lower_bound ? "yes" : "no") << '\n';
  if (list) {
    for (const auto& m : e.max_steps_machines)
      text << "max_steps_machine\t" << m.index() << '\t' << m.describe() << '\n';
    for (const auto& m : e.max_ones_machines)
      text << "max_ones_machine\t" << m.index() << '\t' << m.describe() << '\n';
  }
  emit(text.str(), out, "bb", {{"n", std::to_string(n)}, {"cutoff", std::to_string(cutoff)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  g_argv = joined_argv(argc, argv);
  CLI::App app{"Output frequency distributions of small Turing machines"};
  app.set_version_flag("--version", std::string(CTM_VERSION));
  app.require_subcommand(1);

  std::function<int()> action;
  std::string out;
  int digits = 10;

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "run a campaign over an index range or a sample of it");
  sweep->add_option("-n,--states", sw.n, "number of states")->check(CLI::Range(1, kMaxStates));
  sweep->add_option("--mode", sw.mode, "full or reduced")->check(CLI::IsMember({"full", "reduced"}));
  sweep->add_option("--cutoff", sw.cutoff, "step cutoff (default 107 up to 4 states, else 500)");
  sweep->add_option("--range", sw.range, "index range lo:hi, either side may be empty");
  sweep->add_option("--snapshot-every", sw.snapshot_every, "work units between checkpoints");
  sweep->add_option("--jobs", sw.jobs, "worker threads (0: $CTM_JOBS or all cores)")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("-o,--out", sw.out, "tally file, rewritten at every snapshot");
  sweep->add_option("--resume", sw.resume, "continue from this checkpoint (its config is used)")
      ->check(CLI::ExistingFile);
  sweep->add_option("--samples", sw.samples, "draw this many machines instead of sweeping");
  sweep->add_option("--seed", sw.seed, "sampler seed");
  sweep->add_option("--blank-policy", sw.blank_policy, "run-both or zero-only-with-completion");
  sweep->add_flag("-q,--quiet", sw.quiet, "no progress on stderr");
  sweep->callback([&] { action = [&] { return run_sweep(sw); }; });

  std::vector<std::string> inputs;
  auto* merge_cmd = app.add_subcommand("merge", "merge partial tallies of one campaign");
  merge_cmd->add_option("inputs", inputs, "tally files")->required()->check(CLI::ExistingFile);
  merge_cmd->add_option("-o,--out", out, "merged tally")->required();
  merge_cmd->callback([&] { action = [&] { return run_merge(inputs, out); }; });

  std::string normalization = "halting";
  auto* dist = app.add_subcommand("dist", "distribution from tallies (reduced ones are completed)");
  dist->add_option("inputs", inputs, "tally files or one distribution file")
      ->required()
      ->check(CLI::ExistingFile);
  dist->add_option("-o,--out", out, "output file (default stdout)");
  dist->add_option("--normalization", normalization, "halting or total")
      ->check(CLI::IsMember({"halting", "total"}));
  dist->callback([&] { action = [&] { return run_dist(inputs, out, normalization); }; });

  std::string dist_path;
  std::vector<std::string> strings;
  bool strict = false;
  auto* k = app.add_subcommand("k", "probability, K and rank of strings");
  k->add_option("--dist", dist_path, "distribution or tally")->required()->check(CLI::ExistingFile);
  k->add_option("strings", strings, "binary strings")->required();
  k->add_flag("--strict", strict, "exit 1 when a string is absent");
  k->add_option("--digits", digits, "significant digits")->check(CLI::Range(1, 21));
  k->add_option("-o,--out", out, "output file (default stdout)");
  k->callback([&] { action = [&] { return run_k(dist_path, strings, strict, digits, out); }; });

  std::string a_path, b_path;
  bool list_outliers = false;
  auto* compare = app.add_subcommand("compare", "agreement and invariance constants of two distributions");
  compare->add_option("a", a_path, "first distribution")->required()->check(CLI::ExistingFile);
  compare->add_option("b", b_path, "second distribution")->required()->check(CLI::ExistingFile);
  compare->add_flag("--outliers", list_outliers, "list studentized-residual outliers");
  compare->add_option("--digits", digits, "significant digits")->check(CLI::Range(1, 21));
  compare->add_option("-o,--out", out, "output file (default stdout)");
  compare->callback(
      [&] { action = [&] { return run_compare(a_path, b_path, digits, list_outliers, out); }; });

  auto* analyze = app.add_subcommand("analyze", "statistical studies");
  analyze->require_subcommand(1);

  FitArgs fa;
  auto* fit = analyze->add_subcommand("fit", "exponential fit of the runtime tail");
  fit->add_option("-n,--states", fa.n, "number of states")->check(CLI::Range(1, kMaxStates));
  fit->add_option("--mode", fa.mode, "full or reduced")->check(CLI::IsMember({"full", "reduced"}));
  fit->add_option("--samples", fa.samples, "sampled machines (0: the whole space)");
  fit->add_option("--seed", fa.seed, "sampler seed");
  fit->add_option("--cutoff", fa.cutoff, "step cutoff for the histogram");
  fit->add_option("--bound-cutoff", fa.bound_cutoff, "cutoff for the missed-mass bound");
  fit->add_option("--tsv", fa.tsv, "write the histogram and fitted curve here");
  fit->add_option("--digits", fa.digits, "significant digits")->check(CLI::Range(1, 21));
  fit->add_option("-o,--out", out, "output file (default stdout)");
  fit->callback([&] { action = [&] { return run_fit(fa, out); }; });

  auto* bayes = analyze->add_subcommand("bayes", "posterior probability that a string is random");
  bayes->add_option("--dist", dist_path, "distribution or tally")->required()->check(CLI::ExistingFile);
  bayes->add_option("strings", strings, "binary strings")->required();
  bayes->add_option("--digits", digits, "significant digits")->check(CLI::Range(1, 21));
  bayes->add_option("-o,--out", out, "output file (default stdout)");
  bayes->callback([&] { action = [&] { return run_bayes(dist_path, strings, digits, out); }; });

  std::size_t top = 50;
  auto* climb = analyze->add_subcommand("climbers", "strings longer than their successor");
  climb->add_option("--dist", dist_path, "distribution or tally")->required()->check(CLI::ExistingFile);
  climb->add_option("--top", top, "how many (0: all)");
  climb->add_option("-o,--out", out, "output file (default stdout)");
  climb->callback([&] { action = [&] { return run_climbers(dist_path, top, out); }; });

  int min_length = 3, max_length = 6;
  auto* probe = analyze->add_subcommand("probes", "repetition, symmetrization and completion probes");
  probe->add_option("--dist", dist_path, "distribution or tally")->required()->check(CLI::ExistingFile);
  probe->add_option("strings", strings, "binary strings (none: per-length summary)");
  probe->add_option("--min-length", min_length, "summary from this length")->check(CLI::PositiveNumber);
  probe->add_option("--max-length", max_length, "summary up to this length")->check(CLI::PositiveNumber);
  probe->add_option("--digits", digits, "significant digits")->check(CLI::Range(1, 21));
  probe->add_option("-o,--out", out, "output file (default stdout)");
  probe->callback([&] {
    action = [&] { return run_probes(dist_path, strings, min_length, max_length, digits, out); };
  });

  auto* lengths = analyze->add_subcommand("lengths", "coverage, mass and spread per length");
  lengths->add_option("--dist", dist_path, "distribution or tally")->required()->check(CLI::ExistingFile);
  lengths->add_option("-o,--out", out, "output file (default stdout)");
  lengths->callback([&] { action = [&] { return run_lengths(dist_path, out); }; });

  int n = 4;
  auto* census_cmd = app.add_subcommand("census", "space sizes and machines without a halt transition");
  census_cmd->add_option("-n,--states", n, "number of states")->required();
  census_cmd->add_option("-o,--out", out, "output file (default stdout)");
  census_cmd->callback([&] { action = [&] { return run_census(n, out); }; });

  std::string bb_cutoff;
  bool allow_lower_bound = false, list = false;
  auto* bb = app.add_subcommand("bb", "maximum runtime and number of 1s by exhaustive search");
  bb->add_option("-n,--states", n, "number of states")->required();
  bb->add_option("--cutoff", bb_cutoff, "step cutoff (default: known S(n,2))");
  bb->add_flag("--allow-lower-bound", allow_lower_bound, "accept a cutoff that may be too small");
  bb->add_flag("--machines", list, "list the machines attaining the maxima");
  bb->add_option("-o,--out", out, "output file (default stdout)");
  bb->callback([&] { action = [&] { return run_bb(n, bb_cutoff, allow_lower_bound, list, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action();
  } catch (const QuietFailure& q) {
    return q.code;
  } catch (const UsageError& e) {
    std::cerr << "ctm: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ctm: " << e.what() << '\n';
    return 1;
  }
}
