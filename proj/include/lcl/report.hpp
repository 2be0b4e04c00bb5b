#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lcl {

using Json = nlohmann::ordered_json;

enum class Verdict { pass, fail, measured };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

/// Inputs that break a checked inequality, with what is needed to replay it.
struct Counterexample {
  std::vector<double> inputs;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note;
};

/// Where a threshold came from.
enum class Provenance { published, calibrated, tool_default, analytic };

std::string_view to_string(Provenance p);

/// Structured outcome of a condition, lemma, bound, or invariant check.
///
/// `params` records everything the check was run with; `measurements`
/// holds scalars or arrays. A fail verdict must carry at least one
/// counterexample.
struct VerificationReport {
  std::string check;
  std::string fn;
  Json params = Json::object();
  Verdict verdict = Verdict::measured;
  Json measurements = Json::object();
  std::vector<Counterexample> counterexamples;
  std::map<std::string, std::string> threshold_provenance;

  bool passed() const { return verdict == Verdict::pass; }
  bool failed() const { return verdict == Verdict::fail; }
  void set_threshold(const std::string& name, Provenance p) {
    threshold_provenance[name] = std::string(to_string(p));
  }
};

Json to_json(const VerificationReport& r);
VerificationReport report_from_json(const Json& j);

/// Combines reports of the same check: fail if any failed, numeric
/// measurements take the max, counterexamples are concatenated.
VerificationReport merge_reports(const std::vector<VerificationReport>& reports);

}  // namespace lcl
