#include <doctest.h>

#include "lcl/errors.hpp"
#include "lcl/io.hpp"
#include "lcl/verifier.hpp"

#include <cstring>
#include <fstream>
#include <filesystem>
#include <sstream>

using namespace lcl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "lcl_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("pool round trip") {
  const auto f = harmonic();
  const auto pool = evolve_pool_to(f, exact_x0_pool(1000, f.id()), 3, 42);
  const auto path = scratch("pool.lclp");
  save_pool(path, pool);
  CHECK(fs::file_size(path) == 4 + 4 + 4 + pool.fn_id.size() + 4 + 8 + 8 + 1 + 8 * 1000);
  const auto back = load_pool(path);
  CHECK(back.n == 3);
  CHECK(back.fn_id == "harmonic");
  CHECK(back.master_seed == 42);
  CHECK(back.lineage.method == SampleMethod::pool);
  CHECK(same_bits(back.values, pool.values));

  const auto header = pool_header_json(pool);
  CHECK(header["format"] == "LCLP");
  CHECK(header["M"] == 1000);
  CHECK(header["generation_keys"].size() == 4);
}

TEST_CASE("malformed pool files") {
  std::istringstream bad_magic(std::string("XXXX\x01\0\0\0", 8));
  CHECK_THROWS_AS(read_pool(bad_magic), FormatError);

  std::ostringstream full;
  SamplePool p;
  p.fn_id = "harmonic";
  p.values = {1.0, 2.0, 1.5, 2.5};
  write_pool(full, p);
  const std::string bytes = full.str();
  for (std::size_t cut : {std::size_t{5}, std::size_t{14}, bytes.size() - 3}) {
    std::istringstream truncated(bytes.substr(0, cut));
    CHECK_THROWS_AS(read_pool(truncated), FormatError);
  }
  CHECK_THROWS_AS(load_pool(scratch("does_not_exist.lclp")), FormatError);
}

TEST_CASE("distribution JSON round trip is bit-identical") {
  const auto laws = exact_sequence(harmonic(), 3, {2, 1e-4});
  for (const auto& d : laws) {
    const auto path = scratch("dist.json");
    write_json_file(path, to_json(d));
    const auto back = distribution_from_json(read_json_file(path));
    CHECK(same_bits(back.support, d.support));
    CHECK(same_bits(back.probs, d.probs));
    CHECK(back.n == d.n);
    CHECK(back.exact == d.exact);
    CHECK(back.delta_policy == d.delta_policy);
    CHECK(back.quant_error_bound == d.quant_error_bound);
  }
  CHECK_THROWS_AS(distribution_from_json(Json{{"n", 1}}), FormatError);
}

TEST_CASE("distribution CSV") {
  std::ostringstream out;
  write_distribution_csv(out, x0_distribution());
  CHECK(out.str() == "value,prob\n1,0.5\n2,0.5\n");
}

TEST_CASE("trace CSV round trip") {
  GrowthTrace t;
  t.fn_id = "harmonic";
  for (const auto& d : exact_sequence(harmonic(), 2)) t.push(record_from_distribution(d));
  t.push({.n = 3, .mean = 0.1 + 0.2, .variance = 1.0 / 3, .m4 = 7.0,
          .source = TraceSource::pool, .size = 1000, .se_mean = 1e-3, .se_var = 2e-3});
  std::stringstream io;
  write_trace_csv(io, t);
  const auto back = read_trace_csv(io, "harmonic");
  REQUIRE(back.records.size() == t.records.size());
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& a = t.records[i];
    const auto& b = back.records[i];
    CHECK(a.n == b.n);
    CHECK(a.mean == b.mean);
    CHECK(a.variance == b.variance);
    CHECK(a.m4 == b.m4);
    CHECK(a.source == b.source);
    CHECK(a.size == b.size);
    CHECK(a.se_mean == b.se_mean);
    CHECK(a.se_var == b.se_var);
  }
  std::istringstream wrong_header("n,mean\n");
  CHECK_THROWS_AS(read_trace_csv(wrong_header), FormatError);
  std::istringstream bad_row(std::string(trace_csv_header) + "\n0,1,2\n");
  CHECK_THROWS_AS(read_trace_csv(bad_row), FormatError);
  std::istringstream bad_source(std::string(trace_csv_header) + "\n0,1,2,3,moon,4,5,6\n");
  CHECK_THROWS_AS(read_trace_csv(bad_source), FormatError);
}

TEST_CASE("edge list round trip") {
  const auto net = build_lcl(2, std::uint64_t{9});
  std::stringstream io;
  write_edge_list(io, net, 9);
  const std::string text = io.str();
  CHECK(text.rfind("lcl n=2 seed=9 source=0 sink=1 nodes=12\n", 0) == 0);
  const auto back = read_edge_list(io);
  CHECK(back.depth == 2);
  CHECK(back.node_count == 12);
  REQUIRE(back.edges.size() == net.edges.size());
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    CHECK(back.edges[i].u == net.edges[i].u);
    CHECK(back.edges[i].v == net.edges[i].v);
    CHECK(back.edges[i].resistance == net.edges[i].resistance);
  }
  CHECK(laplacian_resistance(back) == laplacian_resistance(net));

  std::istringstream no_nodes("lcl n=1\n0 1 1\n");
  CHECK_THROWS_AS(read_edge_list(no_nodes), FormatError);
  std::istringstream out_of_range("lcl nodes=2\n0 5 1\n");
  CHECK_THROWS_AS(read_edge_list(out_of_range), FormatError);
}

TEST_CASE("resistance CSV round trip") {
  const std::vector<double> r = {2.5, 11.0 / 3, 1e-300, 5.0};
  std::stringstream io;
  write_resistance_csv(io, r);
  CHECK(same_bits(read_resistance_csv(io), r));
  std::istringstream bad("resistance\nabc\n");
  CHECK_THROWS_AS(read_resistance_csv(bad), FormatError);
}

TEST_CASE("report JSON round trip and merge") {
  const auto g = geometric();
  const auto r = verify_condition2(g, 4, 2000, 0.49, 0.49, 3);
  REQUIRE(r.failed());
  const auto back = report_from_json(to_json(r));
  CHECK(back.check == r.check);
  CHECK(back.verdict == r.verdict);
  CHECK(to_json(back) == to_json(r));
  for (const auto& ce : back.counterexamples) CHECK(replay_counterexample(g, back, ce));

  const auto ok = verify_condition2(harmonic(), 4, 2000, 0.22, 0.22, 3);
  const auto ok2 = verify_condition2(harmonic(), 5, 2000, 0.22, 0.22, 4);
  const auto merged = merge_reports({ok, ok2});
  CHECK(merged.passed());
  CHECK(merged.measurements["a_hat"].get<double>() ==
        std::max(ok.measurements["a_hat"].get<double>(),
                 ok2.measurements["a_hat"].get<double>()));
  const auto g_ok = verify_condition2(g, 4, 2000, 0.7, 0.7, 3);
  const auto mixed = merge_reports({r, g_ok});
  CHECK(mixed.failed());
  CHECK(mixed.counterexamples.size() ==
        r.counterexamples.size() + g_ok.counterexamples.size());
  CHECK_THROWS_AS(merge_reports({ok, r}), std::invalid_argument);
  CHECK_THROWS_AS(merge_reports({}), std::invalid_argument);
}

TEST_CASE("JSON files") {
  const auto path = scratch("nested/dir/report.json");
  fs::remove_all(path.parent_path());
  write_json_file(path, Json{{"a", 1}});
  CHECK(read_json_file(path)["a"] == 1);
  std::ofstream(scratch("broken.json")) << "{not json";
  CHECK_THROWS_AS(read_json_file(scratch("broken.json")), FormatError);
}

}  // TEST_SUITE
