#pragma once

#include "lcl/growth_function.hpp"
#include "lcl/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lcl::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_usage = 2,
  exit_runtime = 3,
};

/// Bad flags or an inconsistent configuration.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fully resolved settings for one invocation. Empty optionals mean
/// "use the command's default" until resolve() fills them in.
struct RunConfig {
  std::string command;
  std::string fn_id = "harmonic";
  ParamMap params;
  std::string n_text;
  int n_lo = 0;
  int n_hi = 0;
  std::string method = "pool";
  std::size_t pool_size = 1'000'000;
  double delta0 = 1e-4;
  int exact_through = 2;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out_dir = "out";
  std::vector<std::string> formats = {"json", "csv"};
  std::vector<std::string> checks;
  std::optional<double> a;
  std::optional<double> b;
  std::size_t samples = 100'000;
  int max_tree_depth = 12;
  bool exhaustive = false;
  bool check_laplacian = false;
  bool check_identity = false;
  std::vector<int> ks_at;
  std::size_t ks_retain = 100'000;
  bool plot_data = false;
  /// Omit the metadata block so identical configs give identical files.
  bool compare = false;
  std::vector<std::string> inputs;

  bool wants(const std::string& format) const;
};

/// "a..b" inclusive or a single integer.
std::pair<int, int> parse_n_range(const std::string& text);
/// "key=value" items into a parameter map.
ParamMap parse_params(const std::vector<std::string>& items);

/// Applies command defaults and checks invariants; throws UsageError.
void resolve(RunConfig& config);

/// Every field, including defaults, for embedding in reports.
Json config_json(const RunConfig& config);

/// Parses argv and runs the command. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace lcl::cli
