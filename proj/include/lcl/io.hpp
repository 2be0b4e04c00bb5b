#pragma once

#include "lcl/exact_distribution.hpp"
#include "lcl/report.hpp"
#include "lcl/resistance_net.hpp"
#include "lcl/sampler.hpp"
#include "lcl/statistics.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lcl {

// Pool container, little-endian:
//   char[4]  magic "LCLP"
//   u32      version (1)
//   u32      fn_id length, then fn_id bytes
//   i32      n
//   u64      M
//   u64      master_seed
//   u8       method (0 tree, 1 pool)
//   M x f64  values
inline constexpr std::uint32_t pool_format_version = 1;

void write_pool(std::ostream& out, const SamplePool& pool);
SamplePool read_pool(std::istream& in);
void save_pool(const std::filesystem::path& path, const SamplePool& pool);
SamplePool load_pool(const std::filesystem::path& path);
/// Header fields plus lineage, for the JSON sidecar.
Json pool_header_json(const SamplePool& pool);

Json to_json(const DiscreteDistribution& dist);
DiscreteDistribution distribution_from_json(const Json& j);
/// "value,prob" rows.
void write_distribution_csv(std::ostream& out, const DiscreteDistribution& dist);

inline constexpr const char* trace_csv_header =
    "n,mean,variance,m4,source,size,se_mean,se_var";
void write_trace_csv(std::ostream& out, const GrowthTrace& trace);
GrowthTrace read_trace_csv(std::istream& in, const std::string& fn_id = "");
Json to_json(const GrowthTrace& trace);

/// Header "lcl n=<n> seed=<seed> source=<s> sink=<t> nodes=<N>", then
/// "u v resistance" per edge.
void write_edge_list(std::ostream& out, const ResistorNetwork& net,
                     std::uint64_t seed);
ResistorNetwork read_edge_list(std::istream& in);

void write_resistance_csv(std::ostream& out, const std::vector<double>& r);
std::vector<double> read_resistance_csv(std::istream& in);

/// Writes JSON with a trailing newline, creating parent directories.
void write_json_file(const std::filesystem::path& path, const Json& j);
Json read_json_file(const std::filesystem::path& path);

}  // namespace lcl
