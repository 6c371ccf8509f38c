#include "ctm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "ctm/campaign.hpp"
#include "ctm/enumerator.hpp"
#include "ctm/simulator.hpp"

namespace ctm {
namespace {

class RuntimeSink : public LeafSink {
 public:
  explicit RuntimeSink(RuntimeHistogram& h) : h_(h) {}
  void on_halt(const Execution& ex, Count weight, const DigitMasks&) override {
    h_.add(ex.steps, weight);
    h_.sample_size += weight;
  }
  void on_nonhalt(OutcomeKind, std::uint64_t, Count weight) override { h_.sample_size += weight; }

 private:
  RuntimeHistogram& h_;
};

double rss_of(const std::vector<std::pair<double, double>>& pts, double a, double l) {
  double total = 0;
  for (const auto& [x, y] : pts) {
    const double r = y - a * std::exp(-l * x);
    total += r * r;
  }
  return total;
}

// Pearson correlation in extended precision.
long double correlation(const std::vector<long double>& x, const std::vector<long double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0) || !(syy > 0)) throw MetricError("degenerate variance");
  return sxy / std::sqrt(sxx * syy);
}

ProbeStat stat_of(const std::vector<double>& values, std::size_t absent) {
  ProbeStat st;
  st.present = values.size();
  st.absent = absent;
  if (values.empty()) return st;
  st.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return st;
}

std::string binary_of(std::uint64_t value, int length) {
  std::string s(static_cast<std::size_t>(length), '0');
  for (int i = length - 1; i >= 0; --i, value >>= 1) s[static_cast<std::size_t>(i)] = (value & 1) ? '1' : '0';
  return s;
}

}  // namespace

void RuntimeHistogram::add(std::uint64_t steps, Count weight) {
  if (steps == 0) throw std::domain_error("a halting run takes at least one step");
  counts[steps] += weight;
  cutoff = std::max(cutoff, steps);
}

Count RuntimeHistogram::halting() const {
  Count total = 0;
  for (const auto& [k, c] : counts) total += c;
  return total;
}

std::vector<std::pair<double, double>> RuntimeHistogram::conditional() const {
  const Count h = halting();
  std::vector<std::pair<double, double>> out;
  if (h == 0) return out;
  for (std::uint64_t k = 1; k <= cutoff; ++k) {
    const auto it = counts.find(k);
    const Count c = it == counts.end() ? 0 : it->second;
    out.emplace_back(static_cast<double>(k), static_cast<double>(c) / static_cast<double>(h));
  }
  return out;
}

RuntimeHistogram sample_runtimes(int n_states, Mode mode, std::uint64_t samples,
                                 std::uint64_t seed, std::uint64_t cutoff) {
  const Count size = space_size(n_states, mode);
  Simulator sim(cutoff);
  RuntimeHistogram h;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const MachineSpec m = decode(n_states, mode, sample_index(seed, i, 0, size));
    std::uint64_t steps = 0;
    if (sim.classify(m, 0, &steps) == OutcomeKind::kHalted) h.add(steps);
    ++h.sample_size;
  }
  return h;
}

RuntimeHistogram exhaustive_runtimes(int n_states, Mode mode, std::uint64_t cutoff) {
  RuntimeHistogram h;
  RuntimeSink sink(h);
  EnumerationRequest req;
  req.n_states = n_states;
  req.mode = mode;
  req.lo = 0;
  req.hi = space_size(n_states, mode);
  req.cutoff = cutoff;
  enumerate_tree(req, sink);
  return h;
}

ExpFit fit_exponential(const std::vector<std::pair<double, double>>& points,
                       std::pair<double, double> start) {
  if (points.size() < 2) throw FitError("need at least two points", {});
  ExpFit fit{start.first, start.second, rss_of(points, start.first, start.second), 0};
  if (!(fit.alpha > 0) || !(fit.lambda > 0)) throw FitError("start must be positive", fit);
  while (fit.iterations < kFitIterationCap) {
    ++fit.iterations;
    double jaa = 0, jal = 0, jll = 0, ga = 0, gl = 0;
    for (const auto& [x, y] : points) {
      const double e = std::exp(-fit.lambda * x);
      const double da = e;
      const double dl = -fit.alpha * x * e;
      const double r = y - fit.alpha * e;
      jaa += da * da;
      jal += da * dl;
      jll += dl * dl;
      ga += da * r;
      gl += dl * r;
    }
    const double det = jaa * jll - jal * jal;
    if (!(std::fabs(det) > 0)) throw FitError("singular normal equations", fit);
    const double step_a = (jll * ga - jal * gl) / det;
    const double step_l = (jaa * gl - jal * ga) / det;
    const double relative = std::max(std::fabs(step_a) / fit.alpha, std::fabs(step_l) / fit.lambda);

    double t = 1;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings, t /= 2) {
      const double a = fit.alpha + t * step_a;
      const double l = fit.lambda + t * step_l;
      if (!(a > 0) || !(l > 0)) continue;
      const double rss = rss_of(points, a, l);
      if (rss <= fit.rss || relative < 1e-10) {
        fit.alpha = a;
        fit.lambda = l;
        fit.rss = rss;
        accepted = true;
        break;
      }
    }
    if (!std::isfinite(fit.rss)) throw FitError("residuals are not finite", fit);
    if (relative < 1e-10 || (accepted && t * relative < 1e-10)) return fit;
    if (!accepted) throw FitError("no descent step from the current estimate", fit);
  }
  throw FitError("no convergence after " + std::to_string(kFitIterationCap) + " iterations", fit);
}

ExpFit fit_runtime_tail(const RuntimeHistogram& h, std::pair<double, double> start) {
  return fit_exponential(h.conditional(), start);
}

double missed_mass_log10(const ExpFit& fit, std::uint64_t cutoff) {
  return -static_cast<double>(cutoff) * fit.lambda / std::log(10.0);
}

Agreement agreement(const Distribution& a, const Distribution& b) {
  std::vector<std::string> names;
  std::vector<long double> x, y;
  for (const auto& [s, p] : a.probabilities()) {
    if (const auto q = b.probability(s)) {
      names.push_back(s);
      x.push_back(p);
      y.push_back(*q);
    }
  }
  Agreement out;
  out.shared = names.size();
  if (names.size() < 3) throw MetricError("fewer than three shared strings");
  const long double r = correlation(x, y);
  out.pearson_r2 = static_cast<double>(r * r);

  std::vector<Real> xa(x.begin(), x.end()), yb(y.begin(), y.end());
  const std::vector<double> ra = average_ranks_descending(xa);
  const std::vector<double> rb = average_ranks_descending(yb);
  out.spearman_rho = static_cast<double>(correlation(std::vector<long double>(ra.begin(), ra.end()),
                                                     std::vector<long double>(rb.begin(), rb.end())));

  // Regression y = c0 + c1 x and externally studentized residuals.
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const long double slope = sxy / sxx;
  const long double intercept = my - slope * mx;
  std::vector<long double> e(n), h(n);
  long double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = y[i] - intercept - slope * x[i];
    h[i] = 1.0L / n + (x[i] - mx) * (x[i] - mx) / sxx;
    sse += e[i] * e[i];
  }
  // A perfect fit up to rounding has no outliers.
  if (sse <= 1e-24L * syy || n < 4) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const long double leave_out = (sse - e[i] * e[i] / (1 - h[i])) / static_cast<long double>(n - 3);
    if (!(leave_out > 0)) continue;
    const double t = static_cast<double>(e[i] / std::sqrt(leave_out * (1 - h[i])));
    const double at = std::fabs(t);
    if (at > 20) out.above_20.push_back({names[i], t});
    else if (at > 5) out.from_5_to_20.push_back({names[i], t});
    else if (at > 2) out.from_2_to_5.push_back({names[i], t});
  }
  auto by_size = [](const Outlier& p, const Outlier& q) {
    if (std::fabs(p.t) != std::fabs(q.t)) return std::fabs(p.t) > std::fabs(q.t);
    return p.string < q.string;
  };
  std::sort(out.above_20.begin(), out.above_20.end(), by_size);
  std::sort(out.from_5_to_20.begin(), out.from_5_to_20.end(), by_size);
  std::sort(out.from_2_to_5.begin(), out.from_2_to_5.end(), by_size);
  return out;
}

Real bayes_random_posterior(const Distribution& d, std::string_view s) {
  if (!is_binary_string(s)) throw std::domain_error("not a binary string: '" + std::string(s) + "'");
  const auto p = d.probability(s);
  if (!p || !(*p > 0)) return 1;
  const Real exponent = 2.0L * static_cast<Real>(s.size()) + std::log2(*p);
  return 1 / (std::exp2(exponent) + 1);
}

std::vector<std::string> climbers(const ComplexityTable& table, std::size_t limit) {
  std::vector<const ComplexityEntry*> order;
  for (const ComplexityEntry& e : table.entries()) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const ComplexityEntry* a, const ComplexityEntry* b) {
    if (a->probability != b->probability) return a->probability > b->probability;
    return a->string > b->string;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    if (order[i]->string.size() > order[i + 1]->string.size()) {
      out.push_back(order[i]->string);
      if (limit && out.size() == limit) break;
    }
  }
  return out;
}

Probes probes(const Distribution& d, std::string_view s) {
  if (!is_binary_string(s)) throw std::domain_error("not a binary string: '" + std::string(s) + "'");
  const std::string base(s);
  Probes p;
  p.repetition = d.probability(base + base);
  p.symmetrization = d.probability(base + reverse_string(base));
  p.completion = d.probability(base + std::string(base.size(), '0'));
  return p;
}

std::vector<ProbeSummary> probe_summary(const Distribution& d, int min_length, int max_length) {
  std::vector<ProbeSummary> rows;
  for (int l = min_length; l <= max_length; ++l) {
    std::vector<double> rep, sym, comp, all;
    std::size_t rep_absent = 0, sym_absent = 0, comp_absent = 0, all_absent = 0;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << l); ++v) {
      const Probes p = probes(d, binary_of(v, l));
      if (p.repetition) rep.push_back(static_cast<double>(*p.repetition)); else ++rep_absent;
      if (p.symmetrization) sym.push_back(static_cast<double>(*p.symmetrization)); else ++sym_absent;
      if (p.completion) comp.push_back(static_cast<double>(*p.completion)); else ++comp_absent;
    }
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << (2 * l)); ++v) {
      if (const auto q = d.probability(binary_of(v, 2 * l))) all.push_back(static_cast<double>(*q));
      else ++all_absent;
    }
    rows.push_back({l, stat_of(rep, rep_absent), stat_of(sym, sym_absent),
                    stat_of(comp, comp_absent), stat_of(all, all_absent)});
  }
  return rows;
}

std::vector<LengthRow> length_laws(const Distribution& d) {
  std::map<int, std::vector<std::pair<int, Real>>> by_length;  // zeros, P
  for (const auto& [s, p] : d.probabilities())
    by_length[static_cast<int>(s.size())].emplace_back(
        static_cast<int>(std::count(s.begin(), s.end(), '0')), p);
  std::vector<LengthRow> rows;
  if (by_length.empty()) return rows;
  const int longest = by_length.rbegin()->first;
  for (int l = 1; l <= longest; ++l) {
    LengthRow row;
    row.length = l;
    row.reference = std::exp2(-static_cast<Real>(l));
    row.binomial_sd = std::sqrt(static_cast<double>(l)) / 2;
    const auto it = by_length.find(l);
    if (it != by_length.end()) {
      row.present = it->second.size();
      Real mean = 0;
      for (const auto& [z, p] : it->second) {
        row.mass += p;
        mean += p * z;
      }
      mean /= row.mass;
      Real var = 0;
      for (const auto& [z, p] : it->second) var += p * (z - mean) * (z - mean);
      row.zeros_sd = static_cast<double>(std::sqrt(var / row.mass));
    }
    row.coverage = static_cast<double>(row.present) / std::exp2(static_cast<double>(l));
    rows.push_back(row);
  }
  return rows;
}

std::string format_number(double x, int significant) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, x);
  return buf;
}

std::string runtime_tsv(const RuntimeHistogram& h, const std::optional<ExpFit>& fit) {
  std::ostringstream out;
  out << "steps\tmachines\tconditional_probability";
  if (fit) out << "\tfitted";
  out << '\n';
  const Count total = h.halting();
  for (const auto& [k, c] : h.counts) {
    out << k << '\t' << c << '\t'
        << format_number(static_cast<double>(c) / static_cast<double>(total));
    if (fit) out << '\t' << format_number(fit->alpha * std::exp(-fit->lambda * static_cast<double>(k)));
    out << '\n';
  }
  return out.str();
}

std::string length_laws_tsv(const std::vector<LengthRow>& rows) {
  std::ostringstream out;
  out << "length\tpresent\tcoverage\tmass\treference\tzeros_sd\tbinomial_sd\n";
  for (const LengthRow& r : rows)
    out << r.length << '\t' << r.present << '\t' << format_number(r.coverage) << '\t'
        << format_number(static_cast<double>(r.mass)) << '\t'
        << format_number(static_cast<double>(r.reference)) << '\t' << format_number(r.zeros_sd)
        << '\t' << format_number(r.binomial_sd) << '\n';
  return out.str();
}

std::string probe_summary_tsv(const std::vector<ProbeSummary>& rows) {
  std::ostringstream out;
  out << "length\tprobe\tmean\tsd\tpresent\tabsent\n";
  for (const ProbeSummary& r : rows) {
    const std::pair<const char*, const ProbeStat*> cols[] = {
        {"rep", &r.repetition}, {"sym", &r.symmetrization}, {"comp", &r.completion}, {"all", &r.all_doubled}};
    for (const auto& [name, st] : cols)
      out << r.length << '\t' << name << '\t' << format_number(st->mean) << '\t'
          << format_number(st->sd) << '\t' << st->present << '\t' << st->absent << '\n';
  }
  return out.str();
}

}  // namespace ctm
