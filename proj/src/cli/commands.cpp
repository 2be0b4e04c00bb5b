#include "lcl/cli.hpp"

#include "lcl/errors.hpp"
#include "lcl/exact_distribution.hpp"
#include "lcl/io.hpp"
#include "lcl/parallel.hpp"
#include "lcl/resistance_net.hpp"
#include "lcl/rng.hpp"
#include "lcl/sampler.hpp"
#include "lcl/statistics.hpp"
#include "lcl/verifier.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace lcl::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* tool_version = "0.1.0";

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Context {
  const RunConfig& config;
  std::ostream& out;
  std::ostream& err;
  fs::path dir;
};

Json envelope(const Context& ctx, Json results) {
  Json j = {{"config", config_json(ctx.config)}, {"results", std::move(results)}};
  if (!ctx.config.compare)
    j["metadata"] = {{"tool", "lcl"}, {"version", tool_version},
                     {"timestamp", utc_timestamp()}};
  return j;
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  body(out);
}

void write_json(const Context& ctx, const std::string& name, const Json& j) {
  if (ctx.config.wants("json")) write_json_file(ctx.dir / name, j);
}

void write_csv(const Context& ctx, const std::string& name,
               const std::function<void(std::ostream&)>& body) {
  if (ctx.config.wants("csv")) write_text(ctx.dir / name, body);
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

GrowthFunction make_fn(const RunConfig& c) {
  return make_function(c.fn_id, c.params);
}

Json series_json(const std::vector<SeriesPoint>& points) {
  Json j = Json::array();
  for (const auto& p : points) j.push_back({{"n", p.n}, {"value", p.value}, {"se", p.se}});
  return j;
}

void write_series_csv(const Context& ctx, const std::string& name,
                      const std::string& column, const std::vector<SeriesPoint>& pts) {
  write_csv(ctx, name, [&](std::ostream& o) {
    o << "n," << column << ",se\n" << std::setprecision(17);
    for (const auto& p : pts) o << p.n << ',' << p.value << ',' << p.se << '\n';
  });
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(Context& ctx) {
  const RunConfig& c = ctx.config;
  const GrowthFunction fn = make_fn(c);
  GrowthTrace trace;
  trace.fn_id = fn.id();
  Json ks = Json::array();
  Json range = nullptr;
  const std::set<int> ks_at(c.ks_at.begin(), c.ks_at.end());

  auto measure_ks = [&](int n, std::span<const double> values) {
    if (!ks_at.count(n)) return;
    const std::size_t keep = std::min(c.ks_retain, values.size());
    const auto z = self_standardize(values.first(keep));
    ks.push_back({{"n", n}, {"retained", keep}, {"ks", normal_ks_distance(z)}});
  };

  if (c.method == "exact") {
    const auto laws =
        exact_sequence(fn, c.n_hi, DeltaPolicy{c.exact_through, c.delta0});
    for (int n = c.n_lo; n <= c.n_hi; ++n) trace.push(record_from_distribution(laws[n]));
  } else if (c.method == "pool") {
    SamplePool pool = exact_x0_pool(c.pool_size, fn.id());
    for (int n = 0; n <= c.n_hi; ++n) {
      if (n >= c.n_lo) {
        trace.push(record_from_samples(n, pool.values, TraceSource::pool));
        measure_ks(n, pool.values);
      }
      if (n < c.n_hi) pool = evolve_pool(fn, pool, c.pool_size, *c.seed, c.threads);
    }
    range = to_json(range_check(pool, fn.cx(), fn.cy()));
  } else {
    for (int n = c.n_lo; n <= c.n_hi; ++n) {
      const auto values = sample_tree_batch(fn, n, generation_key(*c.seed, n),
                                            c.samples, c.max_tree_depth, c.threads);
      trace.push(record_from_samples(n, values, TraceSource::tree));
      measure_ks(n, values);
    }
  }

  std::vector<SeriesPoint> ratios;
  std::optional<double> log_base;
  try {
    ratios = variance_growth_ratios(trace);
    log_base = log_variance_growth_base(trace);
  } catch (const std::invalid_argument&) {
    // Single generation or a degenerate law: no growth statistics.
  }
  const MeanGrowth growth = mean_growth(trace, fn.cx(), fn.cy(), fn.curvature());

  ctx.out << "n      mean              variance          var ratio   E/base^n\n";
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    ctx.out << std::left << std::setw(7) << r.n << std::setw(18) << fmt(r.mean, 10)
            << std::setw(18) << fmt(r.variance, 10) << std::setw(12)
            << (i < ratios.size() ? fmt(ratios[i].value) : std::string("-"))
            << fmt(growth.points[i].value, 8) << '\n';
  }
  for (const auto& k : ks)
    ctx.out << "KS(n=" << k["n"].get<int>() << ") = " << fmt(k["ks"].get<double>()) << '\n';

  write_csv(ctx, "trace.csv", [&](std::ostream& o) { write_trace_csv(o, trace); });
  write_json(ctx, "trace.json", to_json(trace));
  write_series_csv(ctx, "ratios.csv", "ratio", ratios);
  write_series_csv(ctx, "mean_growth.csv", "normalized_mean", growth.points);
  if (!ks.empty())
    write_csv(ctx, "ks.csv", [&](std::ostream& o) {
      o << "n,retained,ks\n" << std::setprecision(17);
      for (const auto& k : ks)
        o << k["n"].get<int>() << ',' << k["retained"].get<std::size_t>() << ','
          << k["ks"].get<double>() << '\n';
    });
  if (c.plot_data) {
    write_text(ctx.dir / "plot_log_variance.csv", [&](std::ostream& o) {
      o << "n,log_variance\n" << std::setprecision(17);
      for (const auto& r : trace.records)
        if (r.variance > 0.0) o << r.n << ',' << std::log(r.variance) << '\n';
    });
    write_text(ctx.dir / "plot_normalized_mean.csv", [&](std::ostream& o) {
      o << "n,normalized_mean\n" << std::setprecision(17);
      for (const auto& p : growth.points) o << p.n << ',' << p.value << '\n';
    });
  }

  Json results = {{"fn", fn.id()},
                  {"cx", fn.cx()},
                  {"cy", fn.cy()},
                  {"variance_base", 2.0 + fn.cx() * fn.cx() + fn.cy() * fn.cy()},
                  {"trace", to_json(trace)},
                  {"variance_ratios", series_json(ratios)},
                  {"log_variance_base", log_base ? Json(*log_base) : Json(nullptr)},
                  {"mean_growth", series_json(growth.points)},
                  {"mean_monotonicity_violated", growth.monotonicity_violated},
                  {"ks", ks},
                  {"range_check", range}};
  write_json(ctx, "simulate.json", envelope(ctx, results));
  if (!range.is_null() && range["verdict"] == "fail") {
    ctx.err << "range invariant violated at n = " << c.n_hi << '\n';
    return exit_check_failed;
  }
  return exit_ok;
}

// ------------------------------------------------------------------- exact

int cmd_exact(Context& ctx) {
  const RunConfig& c = ctx.config;
  const GrowthFunction fn = make_fn(c);
  const auto laws = exact_sequence(fn, c.n_hi, DeltaPolicy{c.exact_through, c.delta0});

  Json summary = Json::array();
  ctx.out << "n      atoms     mean              variance          quant bound\n";
  for (int n = c.n_lo; n <= c.n_hi; ++n) {
    const auto& d = laws[n];
    double total = 0.0;
    for (double p : d.probs) total += p;
    summary.push_back({{"n", n},
                       {"atoms", d.size()},
                       {"mean", d.mean()},
                       {"variance", d.variance()},
                       {"total_probability", total},
                       {"exact", d.exact},
                       {"quant_error_bound", d.quant_error_bound}});
    ctx.out << std::left << std::setw(7) << n << std::setw(10) << d.size()
            << std::setw(18) << fmt(d.mean(), 12) << std::setw(18)
            << fmt(d.variance(), 12) << fmt(d.quant_error_bound, 3) << '\n';
    const std::string stem = "dist_n" + std::to_string(n);
    write_json(ctx, stem + ".json", to_json(d));
    write_csv(ctx, stem + ".csv", [&](std::ostream& o) { write_distribution_csv(o, d); });
  }

  Json reports = Json::array();
  bool failed = false;
  if (c.check_identity) {
    bool any = false;
    for (int n = 0; n + 1 <= c.n_hi; ++n) {
      if (!laws[n].exact || !laws[n + 1].exact) continue;
      any = true;
      const auto r = check_variance_identity(fn, laws[n], laws[n + 1]);
      failed = failed || r.failed();
      reports.push_back(to_json(r));
      ctx.out << "identity " << n << "->" << n + 1 << ": " << to_string(r.verdict)
              << " (relative difference "
              << fmt(r.measurements["relative_difference"].get<double>(), 3) << ")\n";
    }
    if (!any) ctx.err << "no unquantized pair of generations to check the identity on\n";
  }
  if (laws.size() >= 3) {
    const auto r = fourth_moment_diagnostic(laws);
    failed = failed || r.failed();
    reports.push_back(to_json(r));
    ctx.out << "fourth-moment diagnostic: " << to_string(r.verdict) << '\n';
  }
  write_json(ctx, "exact.json", envelope(ctx, {{"distributions", summary}, {"reports", reports}}));
  return failed ? exit_check_failed : exit_ok;
}

// -------------------------------------------------------------- resistance

int cmd_resistance(Context& ctx) {
  const RunConfig& c = ctx.config;
  const int n = c.n_hi;
  const GrowthFunction fn = harmonic();
  Json results = {{"n", n}, {"edges", lcl_edge_count(n)}, {"nodes", lcl_node_count(n)}};
  bool failed = false;

  if (c.exhaustive) {
    const std::size_t edges = lcl_edge_count(n);
    const std::size_t count = std::size_t{1} << edges;
    std::vector<double> values(count);
    std::vector<double> res(edges);
    for (std::size_t mask = 0; mask < count; ++mask) {
      for (std::size_t k = 0; k < edges; ++k) res[k] = 1.0 + ((mask >> k) & 1u);
      values[mask] = series_parallel_resistance(n, res);
    }
    std::sort(values.begin(), values.end());
    DiscreteDistribution law;
    const double w = 1.0 / static_cast<double>(count);
    for (double v : values) {
      if (!law.support.empty() && v - law.support.back() <= 1e-12 * v)
        law.probs.back() += w;
      else {
        law.support.push_back(v);
        law.probs.push_back(w);
      }
    }
    const auto exact = exact_sequence(fn, n, DeltaPolicy{n, c.delta0})[n];
    double support_diff = 0.0, prob_diff = 0.0;
    const bool same_size = exact.size() == law.size();
    if (same_size)
      for (std::size_t i = 0; i < law.size(); ++i) {
        support_diff = std::max(support_diff, std::abs(law.support[i] - exact.support[i]));
        prob_diff = std::max(prob_diff, std::abs(law.probs[i] - exact.probs[i]));
      }
    const bool agree = same_size && support_diff <= 1e-12 * exact.support.back() &&
                       prob_diff <= 1e-15;
    failed = !agree;
    Json atoms = Json::array();
    for (std::size_t i = 0; i < law.size(); ++i) atoms.push_back({law.support[i], law.probs[i]});
    results["exhaustive"] = {{"assignments", count},
                             {"atoms", atoms},
                             {"matches_exact_law", agree},
                             {"max_support_difference", support_diff},
                             {"max_probability_difference", prob_diff}};
    ctx.out << count << " assignments -> " << law.size() << " atoms; "
            << (agree ? "matches" : "DOES NOT match") << " the exact law of X_" << n << '\n';
  } else {
    std::vector<double> r(c.samples);
    parallel_for(r.size(), c.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        r[i] = series_parallel_resistance(n, tree_draw_seed(*c.seed, i));
    });
    GrowthTrace trace;
    trace.fn_id = fn.id();
    trace.push(record_from_samples(n, r, TraceSource::tree));
    const auto& rec = trace.records.front();
    const double scale = std::pow(fn.mean_base(), n);
    results["mean"] = rec.mean;
    results["variance"] = rec.variance;
    results["se_mean"] = rec.se_mean;
    results["normalized_mean"] = rec.mean / scale;
    results["normalized_se"] = rec.se_mean / scale;
    ctx.out << "R(G_" << n << "): mean " << fmt(rec.mean, 10) << " (s.e. "
            << fmt(rec.se_mean, 3) << "), variance " << fmt(rec.variance, 8)
            << ", mean/2.5^n " << fmt(rec.mean / scale, 8) << '\n';
    const auto bounds = expectation_bounds_check(fn, trace);
    results["expectation_bounds"] = to_json(bounds);
    failed = bounds.failed();
    ctx.out << "expectation sandwich: " << to_string(bounds.verdict) << '\n';
    write_csv(ctx, "resistances.csv", [&](std::ostream& o) { write_resistance_csv(o, r); });

    if (c.check_laplacian) {
      std::vector<std::uint64_t> seeds(c.samples);
      for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = tree_draw_seed(*c.seed, i);
      const auto eq = equivalence_check(n, seeds);
      results["laplacian_check"] = to_json(eq);
      failed = failed || eq.failed();
      ctx.out << "Laplacian cross-check over " << seeds.size() << " seeds: "
              << to_string(eq.verdict) << " (max relative difference "
              << fmt(eq.measurements["max_relative_difference"].get<double>(), 3) << ")\n";
    }
  }
  write_json(ctx, "resistance.json", envelope(ctx, results));
  return failed ? exit_check_failed : exit_ok;
}

// ------------------------------------------------------------------ verify

VerificationReport run_condition2(const GrowthFunction& fn, const RunConfig& c,
                                  double a, double b) {
  std::vector<VerificationReport> per_n;
  for (int n = c.n_lo; n <= c.n_hi; ++n)
    per_n.push_back(verify_condition2(fn, n, *c.trials, a, b, *c.seed));
  VerificationReport merged = merge_reports(per_n);
  // "For n large enough": pass iff every n from some reported n0 on passes.
  Json verdicts = Json::array();
  int n0 = -1;
  for (std::size_t i = 0; i < per_n.size(); ++i) {
    verdicts.push_back({{"n", c.n_lo + static_cast<int>(i)},
                        {"verdict", to_string(per_n[i].verdict)}});
    if (per_n[i].failed()) n0 = -1;
    else if (n0 < 0) n0 = c.n_lo + static_cast<int>(i);
  }
  merged.params["n"] = c.n_text;
  merged.measurements["per_n"] = verdicts;
  merged.measurements["n0"] = n0 >= 0 ? Json(n0) : Json(nullptr);
  const bool margin = a + b < fn.cx() + fn.cy();
  merged.verdict = n0 >= 0 && margin ? Verdict::pass : Verdict::fail;
  return merged;
}

int cmd_verify(Context& ctx) {
  const RunConfig& c = ctx.config;
  const GrowthFunction fn = make_fn(c);
  const double half = 0.5 * (fn.cx() + fn.cy());
  const double a = c.a.value_or(half * 0.999);
  const double b = c.b.value_or(half * 0.999);
  std::vector<int> ns;
  for (int n = c.n_lo; n <= c.n_hi; ++n) ns.push_back(n);

  Json reports = Json::array();
  bool failed = false;
  for (const auto& check : c.checks) {
    VerificationReport r;
    bool counts = fn.theorem_compliant();
    if (check == "cond1") {
      const std::vector<double> ts = {10.0, 1e3, 1e6};
      r = verify_condition1(fn, ts);
    } else if (check == "cond2") {
      r = run_condition2(fn, c, a, b);
    } else if (check == "cond3") {
      if (ns.size() < 3) throw UsageError("cond3 needs an n range of at least three values");
      r = verify_condition3(fn, ns);
    } else if (check == "remark4") {
      const int n = c.n_lo == c.n_hi ? c.n_hi : 5;
      // Pointwise constants default to the measured symmetric sup.
      const auto probe = verify_condition2(fn, n, *c.trials, 0.0, 0.0, *c.seed);
      const double a_hat = probe.measurements["a_hat"].get<double>();
      const double ra = c.a.value_or(a_hat);
      const double rb = c.b.value_or(a_hat);
      if (c.method == "exact") {
        const auto laws = exact_sequence(fn, n, DeltaPolicy{c.exact_through, c.delta0});
        r = verify_remark4(fn, laws[n], ra, rb);
      } else {
        const SamplePool pool = evolve_pool_to(fn, exact_x0_pool(c.pool_size, fn.id()),
                                               n, *c.seed, c.threads);
        r = verify_remark4(fn, pool, *c.trials, *c.seed, ra, rb);
      }
    } else if (check == "lemma1" || check == "lemma2") {
      r = check_lemma_bound(check == "lemma1" ? Lemma::lemma1 : Lemma::lemma2,
                            *c.trials, *c.seed);
      counts = true;
    } else if (check == "tightness") {
      const std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4};
      r = lemma2_tightness(eps);
      counts = true;
    } else if (check == "monotone") {
      std::vector<VerificationReport> parts;
      for (int n : ns) parts.push_back(check_monotone(fn, n, *c.trials, *c.seed));
      r = merge_reports(parts);
    }
    if (r.failed() && counts) failed = true;

    ctx.out << std::left << std::setw(11) << check << std::setw(9) << to_string(r.verdict);
    for (const char* key : {"a_hat", "two_a_hat", "a1_plus_b1", "max_ratio", "violations"})
      if (r.measurements.contains(key) && r.measurements[key].is_number())
        ctx.out << key << '=' << fmt(r.measurements[key].get<double>(), 8) << ' ';
    if (r.measurements.contains("q"))
      ctx.out << "q_last=" << fmt(r.measurements["q"].back().get<double>(), 6) << ' ';
    if (!r.counterexamples.empty())
      ctx.out << "(" << r.counterexamples.size() << " counterexample"
              << (r.counterexamples.size() == 1 ? "" : "s") << ")";
    ctx.out << '\n';
    const Json j = to_json(r);
    write_json(ctx, "verify_" + check + ".json", j);
    reports.push_back(j);
  }
  write_json(ctx, "verify.json",
             envelope(ctx, {{"fn", fn.id()},
                            {"theorem_compliant", fn.theorem_compliant()},
                            {"reports", reports}}));
  return failed ? exit_check_failed : exit_ok;
}

// ------------------------------------------------------------ report-merge

void collect_reports(const Json& j, std::vector<VerificationReport>& out) {
  if (j.is_array()) {
    for (const auto& item : j) collect_reports(item, out);
  } else if (j.is_object() && j.contains("check")) {
    out.push_back(report_from_json(j));
  } else if (j.is_object()) {
    for (const char* key : {"results", "reports"})
      if (j.contains(key)) collect_reports(j[key], out);
    for (const char* key : {"expectation_bounds", "laplacian_check"})
      if (j.contains(key)) collect_reports(j[key], out);
  }
}

int cmd_report_merge(Context& ctx) {
  std::vector<VerificationReport> all;
  for (const auto& path : ctx.config.inputs) collect_reports(read_json_file(path), all);
  if (all.empty()) throw UsageError("no reports found in the given files");
  std::map<std::pair<std::string, std::string>, std::vector<VerificationReport>> groups;
  for (auto& r : all) groups[{r.check, r.fn}].push_back(std::move(r));
  Json merged = Json::array();
  for (const auto& [key, group] : groups) {
    const auto r = merge_reports(group);
    ctx.out << key.first << '/' << key.second << ": " << group.size() << " report"
            << (group.size() == 1 ? "" : "s") << " -> " << to_string(r.verdict) << '\n';
    merged.push_back(to_json(r));
  }
  write_json(ctx, "merged.json", envelope(ctx, {{"reports", merged}}));
  return exit_ok;
}

int dispatch(Context& ctx) {
  const std::string& cmd = ctx.config.command;
  if (cmd == "simulate") return cmd_simulate(ctx);
  if (cmd == "exact") return cmd_exact(ctx);
  if (cmd == "resistance") return cmd_resistance(ctx);
  if (cmd == "verify" || cmd == "lemmas") return cmd_verify(ctx);
  return cmd_report_merge(ctx);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::vector<std::string> param_items;
  std::vector<std::string> check_items;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double a = 0.0, b = 0.0;

  CLI::App app{"Simulation and verification toolkit for the recursion "
               "X_{n+1} = X_n + X'_n + f(X''_n, X'''_n)", "lcl"};
  app.set_config("--config", "", "File of 'key = value' lines; flags override it");
  app.set_version_flag("--version", tool_version);
  app.require_subcommand(1, 1);
  app.option_defaults()->always_capture_default();

  app.add_option("--f", config.fn_id, "Growth function id");
  app.add_option("--param", param_items, "Function parameter key=value (repeatable)");
  app.add_option("--n", config.n_text, "Generation or inclusive range a..b");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (required when stochastic)");
  app.add_option("--threads", config.threads, "Worker threads");
  app.add_option("--out", config.out_dir, "Output directory");
  app.add_option("--format", config.formats, "Output formats: json, csv")->delimiter(',');
  app.add_option("--method", config.method, "exact, tree or pool");
  app.add_option("--pool", config.pool_size, "Pool size M");
  app.add_option("--delta0", config.delta0, "Relative quantization width for exact mode");
  app.add_option("--exact-through", config.exact_through,
                 "Generations computed without quantization");
  auto* trials_opt = app.add_option("--trials", trials, "Random trials per check");
  app.add_option("--checks", check_items, "Checks to run")->delimiter(',');
  auto* a_opt = app.add_option("--A", a, "Condition-2 constant A");
  auto* b_opt = app.add_option("--B", b, "Condition-2 constant B");
  app.add_option("--samples", config.samples, "Samples for tree/resistance sampling");
  app.add_option("--max-depth", config.max_tree_depth, "Tree sampling depth limit");
  app.add_flag("--exhaustive", config.exhaustive, "Enumerate all resistance assignments");
  app.add_flag("--check-laplacian", config.check_laplacian,
               "Cross-check every sample with a Laplacian solve");
  app.add_flag("--check-identity", config.check_identity,
               "Check the variance recursion identity on exact laws");
  app.add_option("--ks-at", config.ks_at, "Generations at which to report KS distance")
      ->delimiter(',');
  app.add_option("--ks-retain", config.ks_retain, "Values kept for the KS statistic");
  app.add_flag("--plot-data", config.plot_data, "Emit plot series CSVs");
  app.add_flag("--compare", config.compare, "Omit the timestamped metadata block");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "Evolve X_n and report moment growth"},
      {"exact", "Exact (or quantized) laws of X_n"},
      {"resistance", "Effective resistance of random line-circle-line graphs"},
      {"verify", "Check the theorem's conditions and lemmas"},
      {"lemmas", "Shorthand for verify --checks lemma1,lemma2,tightness"},
      {"report-merge", "Merge JSON reports of the same check"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    if (name == "report-merge") sub->add_option("inputs", config.inputs, "Report files");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << tool_version << '\n';
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    config.params = parse_params(param_items);
    config.checks = check_items;
    if (seed_opt->count()) config.seed = seed;
    if (trials_opt->count()) config.trials = trials;
    if (a_opt->count()) config.a = a;
    if (b_opt->count()) config.b = b;
    resolve(config);
    if (config.command != "report-merge") make_function(config.fn_id, config.params);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  Context ctx{config, out, err, fs::path(config.out_dir)};
  try {
    return dispatch(ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const CapExceededError& e) {
    err << "error (" << config.command << "): " << e.what() << '\n';
    return exit_runtime;
  } catch (const std::invalid_argument& e) {
    err << "error (" << config.command << "): " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error (" << config.command << "): " << e.what() << '\n';
    return exit_runtime;
  }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace lcl::cli
