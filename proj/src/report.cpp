#include "lcl/report.hpp"

#include <stdexcept>

namespace lcl {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::measured: return "measured";
  }
  return "measured";
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "measured") return Verdict::measured;
  throw std::invalid_argument("unknown verdict '" + std::string(s) + "'");
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::published: return "published";
    case Provenance::calibrated: return "calibrated";
    case Provenance::tool_default: return "default";
    case Provenance::analytic: return "analytic";
  }
  return "default";
}

Json to_json(const VerificationReport& r) {
  Json ces = Json::array();
  for (const auto& ce : r.counterexamples) {
    ces.push_back({{"inputs", ce.inputs},
                   {"seed", ce.seed},
                   {"trial", ce.trial},
                   {"lhs", ce.lhs},
                   {"rhs", ce.rhs},
                   {"note", ce.note}});
  }
  Json prov = Json::object();
  for (const auto& [k, v] : r.threshold_provenance) prov[k] = v;
  return {{"check", r.check},
          {"fn", r.fn},
          {"params", r.params},
          {"verdict", to_string(r.verdict)},
          {"measurements", r.measurements},
          {"counterexamples", ces},
          {"threshold_provenance", prov}};
}

VerificationReport report_from_json(const Json& j) {
  VerificationReport r;
  r.check = j.at("check").get<std::string>();
  r.fn = j.at("fn").get<std::string>();
  r.params = j.value("params", Json::object());
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.measurements = j.value("measurements", Json::object());
  for (const auto& c : j.value("counterexamples", Json::array())) {
    Counterexample ce;
    ce.inputs = c.at("inputs").get<std::vector<double>>();
    ce.seed = c.value("seed", std::uint64_t{0});
    ce.trial = c.value("trial", std::uint64_t{0});
    ce.lhs = c.value("lhs", 0.0);
    ce.rhs = c.value("rhs", 0.0);
    ce.note = c.value("note", std::string{});
    r.counterexamples.push_back(std::move(ce));
  }
  const Json provenance = j.value("threshold_provenance", Json::object());
  for (const auto& [k, v] : provenance.items())
    r.threshold_provenance[k] = v.get<std::string>();
  return r;
}

VerificationReport merge_reports(const std::vector<VerificationReport>& reports) {
  if (reports.empty())
    throw std::invalid_argument("merge_reports needs at least one report");
  VerificationReport out = reports.front();
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const auto& r = reports[i];
    if (r.check != out.check || r.fn != out.fn)
      throw std::invalid_argument("cannot merge reports of '" + out.check +
                                  "/" + out.fn + "' and '" + r.check + "/" +
                                  r.fn + "'");
    if (r.verdict == Verdict::fail || out.verdict == Verdict::fail)
      out.verdict = Verdict::fail;
    else if (r.verdict == Verdict::measured)
      out.verdict = Verdict::measured;
    for (const auto& [key, value] : r.measurements.items()) {
      if (!out.measurements.contains(key)) {
        out.measurements[key] = value;
      } else if (value.is_number() && out.measurements[key].is_number()) {
        out.measurements[key] =
            std::max(out.measurements[key].get<double>(), value.get<double>());
      }
    }
    out.counterexamples.insert(out.counterexamples.end(),
                               r.counterexamples.begin(),
                               r.counterexamples.end());
    for (const auto& [k, v] : r.threshold_provenance)
      out.threshold_provenance.emplace(k, v);
  }
  out.params["merged_reports"] = reports.size();
  return out;
}

}  // namespace lcl
