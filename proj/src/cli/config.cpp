#include "lcl/cli.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace lcl::cli {

namespace {

int parse_int(const std::string& text, const std::string& what) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw UsageError("bad " + what + " '" + text + "'");
  return value;
}

const std::set<std::string>& known_checks() {
  static const std::set<std::string> checks = {
      "cond1", "cond2", "cond3", "remark4", "lemma1", "lemma2", "tightness", "monotone"};
  return checks;
}

bool stochastic_check(const std::string& c) {
  return c == "cond2" || c == "remark4" || c == "lemma1" || c == "lemma2" ||
         c == "monotone";
}

}  // namespace

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

std::pair<int, int> parse_n_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int n = parse_int(text, "generation");
    return {n, n};
  }
  const int lo = parse_int(text.substr(0, dots), "range start");
  const int hi = parse_int(text.substr(dots + 2), "range end");
  return {lo, hi};
}

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap params;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("--param expects key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      params[key] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw UsageError("--param " + key + " needs a number, got '" + value + "'");
    }
  }
  return params;
}

void resolve(RunConfig& c) {
  static const std::set<std::string> commands = {
      "simulate", "exact", "resistance", "verify", "lemmas", "report-merge"};
  if (!commands.count(c.command))
    throw UsageError("unknown command '" + c.command + "'");

  if (c.command == "lemmas") {
    if (c.checks.empty()) c.checks = {"lemma1", "lemma2", "tightness"};
  } else if (c.command == "verify" && c.checks.empty()) {
    c.checks = {"cond1", "cond2", "cond3"};
  }
  for (const auto& check : c.checks)
    if (!known_checks().count(check))
      throw UsageError("unknown check '" + check + "' (known: cond1, cond2, cond3, "
                       "remark4, lemma1, lemma2, tightness, monotone)");

  if (c.n_text.empty()) {
    if (c.command == "simulate") c.n_text = "0..10";
    else if (c.command == "exact") c.n_text = "0..2";
    else if (c.command == "resistance") c.n_text = "4";
    else c.n_text = "3..10";
  }
  std::tie(c.n_lo, c.n_hi) = parse_n_range(c.n_text);
  if (c.n_lo < 0 || c.n_hi < c.n_lo)
    throw UsageError("n range '" + c.n_text + "' is empty or negative");

  if (c.method != "exact" && c.method != "tree" && c.method != "pool")
    throw UsageError("method must be exact, tree or pool");
  if (c.pool_size < 4) throw UsageError("pool size must be >= 4");
  if (!(c.delta0 > 0.0)) throw UsageError("delta0 must be > 0");
  if (c.threads < 1) throw UsageError("threads must be >= 1");
  for (const auto& f : c.formats)
    if (f != "json" && f != "csv") throw UsageError("format must be json or csv");
  if (!c.trials) c.trials = 1'000'000;
  if (*c.trials == 0) throw UsageError("trials must be >= 1");
  if ((c.a && *c.a < 0.0) || (c.b && *c.b < 0.0))
    throw UsageError("A and B must be >= 0");

  bool stochastic = false;
  if (c.command == "simulate") stochastic = c.method != "exact";
  if (c.command == "resistance") stochastic = !c.exhaustive;
  if (c.command == "verify" || c.command == "lemmas")
    stochastic = std::any_of(c.checks.begin(), c.checks.end(), stochastic_check);
  if (stochastic && !c.seed)
    throw UsageError("'" + c.command + "' is stochastic here; pass --seed");

  if (c.command == "resistance" && c.exhaustive && c.n_hi > 2)
    throw UsageError("--exhaustive enumerates 2^(4^n) assignments; use n <= 2");
  if (c.command == "report-merge" && c.inputs.empty())
    throw UsageError("report-merge needs at least one report file");
}

Json config_json(const RunConfig& c) {
  Json params = Json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  Json j = {{"command", c.command},
            {"fn", c.fn_id},
            {"params", params},
            {"n", c.n_text},
            {"method", c.method},
            {"pool_size", c.pool_size},
            {"delta0", c.delta0},
            {"exact_through", c.exact_through},
            {"trials", c.trials.value_or(0)},
            {"seed", c.seed ? Json(*c.seed) : Json(nullptr)},
            {"threads", c.threads},
            {"out", c.out_dir},
            {"format", c.formats},
            {"checks", c.checks},
            {"A", c.a ? Json(*c.a) : Json(nullptr)},
            {"B", c.b ? Json(*c.b) : Json(nullptr)},
            {"samples", c.samples},
            {"max_tree_depth", c.max_tree_depth},
            {"exhaustive", c.exhaustive},
            {"check_laplacian", c.check_laplacian},
            {"check_identity", c.check_identity},
            {"ks_at", c.ks_at},
            {"ks_retain", c.ks_retain},
            {"plot_data", c.plot_data}};
  if (!c.inputs.empty()) j["inputs"] = c.inputs;
  return j;
}

}  // namespace lcl::cli
