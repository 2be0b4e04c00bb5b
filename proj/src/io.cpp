#include "lcl/io.hpp"

#include "lcl/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace lcl {

namespace {

static_assert(std::endian::native == std::endian::little,
              "pool files are written in native little-endian order");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T)))
    throw FormatError(std::string("truncated pool file while reading ") + what);
  return value;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return in;
}

/// Shortest text that parses back to the same double.
std::string exact(double v) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line_no) + ": bad number '" + text + "'");
  }
}

}  // namespace

void write_pool(std::ostream& out, const SamplePool& pool) {
  out.write("LCLP", 4);
  put<std::uint32_t>(out, pool_format_version);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(pool.fn_id.size()));
  out.write(pool.fn_id.data(), static_cast<std::streamsize>(pool.fn_id.size()));
  put<std::int32_t>(out, pool.n);
  put<std::uint64_t>(out, pool.values.size());
  put<std::uint64_t>(out, pool.master_seed);
  put<std::uint8_t>(out, pool.lineage.method == SampleMethod::tree ? 0 : 1);
  out.write(reinterpret_cast<const char*>(pool.values.data()),
            static_cast<std::streamsize>(pool.values.size() * sizeof(double)));
  if (!out) throw FormatError("failed writing pool");
}

SamplePool read_pool(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "LCLP", 4) != 0)
    throw FormatError("not a pool file (bad magic)");
  const auto version = get<std::uint32_t>(in, "version");
  if (version != pool_format_version)
    throw FormatError("unsupported pool format version " + std::to_string(version));
  const auto id_len = get<std::uint32_t>(in, "fn_id length");
  if (id_len > 4096) throw FormatError("implausible fn_id length");
  SamplePool pool;
  pool.fn_id.resize(id_len);
  if (!in.read(pool.fn_id.data(), id_len)) throw FormatError("truncated fn_id");
  pool.n = get<std::int32_t>(in, "n");
  const auto m = get<std::uint64_t>(in, "M");
  pool.master_seed = get<std::uint64_t>(in, "seed");
  const auto method = get<std::uint8_t>(in, "method");
  if (method > 1) throw FormatError("unknown sampling method code");
  pool.lineage.method = method == 0 ? SampleMethod::tree : SampleMethod::pool;
  pool.lineage.pool_size = m;
  pool.values.resize(m);
  if (!in.read(reinterpret_cast<char*>(pool.values.data()),
               static_cast<std::streamsize>(m * sizeof(double))))
    throw FormatError("truncated pool values");
  return pool;
}

void save_pool(const std::filesystem::path& path, const SamplePool& pool) {
  auto out = open_out(path, true);
  write_pool(out, pool);
}

SamplePool load_pool(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  return read_pool(in);
}

Json pool_header_json(const SamplePool& pool) {
  return {{"format", "LCLP"},
          {"version", pool_format_version},
          {"fn_id", pool.fn_id},
          {"n", pool.n},
          {"M", pool.values.size()},
          {"master_seed", pool.master_seed},
          {"method", to_string(pool.lineage.method)},
          {"generation_keys", pool.lineage.generation_keys}};
}

Json to_json(const DiscreteDistribution& dist) {
  Json atoms = Json::array();
  for (std::size_t i = 0; i < dist.size(); ++i)
    atoms.push_back({dist.support[i], dist.probs[i]});
  return {{"fn_id", dist.fn_id},
          {"n", dist.n},
          {"exact", dist.exact},
          {"delta_policy", dist.delta_policy},
          {"quant_error_bound", dist.quant_error_bound},
          {"atoms", atoms}};
}

DiscreteDistribution distribution_from_json(const Json& j) {
  DiscreteDistribution d;
  try {
    d.fn_id = j.at("fn_id").get<std::string>();
    d.n = j.at("n").get<int>();
    d.exact = j.value("exact", true);
    d.delta_policy = j.value("delta_policy", std::string("exact"));
    d.quant_error_bound = j.at("quant_error_bound").get<double>();
    for (const auto& atom : j.at("atoms")) {
      d.support.push_back(atom.at(0).get<double>());
      d.probs.push_back(atom.at(1).get<double>());
    }
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad distribution JSON: ") + e.what());
  }
  return d;
}

void write_distribution_csv(std::ostream& out, const DiscreteDistribution& dist) {
  out << "value,prob\n";
  for (std::size_t i = 0; i < dist.size(); ++i)
    out << exact(dist.support[i]) << ',' << exact(dist.probs[i]) << '\n';
}

void write_trace_csv(std::ostream& out, const GrowthTrace& trace) {
  out << trace_csv_header << '\n';
  for (const auto& r : trace.records)
    out << r.n << ',' << exact(r.mean) << ',' << exact(r.variance) << ','
        << exact(r.m4) << ',' << to_string(r.source) << ',' << r.size << ','
        << exact(r.se_mean) << ',' << exact(r.se_var) << '\n';
}

GrowthTrace read_trace_csv(std::istream& in, const std::string& fn_id) {
  GrowthTrace trace;
  trace.fn_id = fn_id;
  std::string line;
  if (!std::getline(in, line) || line != trace_csv_header)
    throw FormatError("trace CSV must start with '" + std::string(trace_csv_header) + "'");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8)
      throw FormatError("line " + std::to_string(line_no) + ": expected 8 fields");
    GenerationRecord r;
    r.n = static_cast<int>(parse_double(f[0], line_no));
    r.mean = parse_double(f[1], line_no);
    r.variance = parse_double(f[2], line_no);
    r.m4 = parse_double(f[3], line_no);
    try {
      r.source = trace_source_from_string(f[4]);
    } catch (const std::invalid_argument& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
    r.size = static_cast<std::size_t>(parse_double(f[5], line_no));
    r.se_mean = parse_double(f[6], line_no);
    r.se_var = parse_double(f[7], line_no);
    trace.push(r);
  }
  return trace;
}

Json to_json(const GrowthTrace& trace) {
  Json records = Json::array();
  for (const auto& r : trace.records)
    records.push_back({{"n", r.n},
                       {"mean", r.mean},
                       {"variance", r.variance},
                       {"m4", r.m4},
                       {"source", to_string(r.source)},
                       {"size", r.size},
                       {"se_mean", r.se_mean},
                       {"se_var", r.se_var}});
  return {{"fn_id", trace.fn_id}, {"records", records}};
}

void write_edge_list(std::ostream& out, const ResistorNetwork& net,
                     std::uint64_t seed) {
  out << "lcl n=" << net.depth << " seed=" << seed << " source=" << net.source
      << " sink=" << net.sink << " nodes=" << net.node_count << '\n';
  for (const auto& e : net.edges)
    out << e.u << ' ' << e.v << ' ' << exact(e.resistance) << '\n';
}

ResistorNetwork read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty edge list");
  std::istringstream header(line);
  std::string tag;
  header >> tag;
  if (tag != "lcl") throw FormatError("edge list header must start with 'lcl'");
  ResistorNetwork net;
  bool have_nodes = false;
  std::string kv;
  while (header >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw FormatError("bad header field '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    try {
      if (key == "n") net.depth = std::stoi(value);
      else if (key == "source") net.source = std::stoi(value);
      else if (key == "sink") net.sink = std::stoi(value);
      else if (key == "nodes") { net.node_count = std::stoi(value); have_nodes = true; }
    } catch (const std::exception&) {
      throw FormatError("bad header value '" + kv + "'");
    }
  }
  if (!have_nodes) throw FormatError("edge list header lacks nodes=");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    Edge e;
    std::string r;
    if (!(row >> e.u >> e.v >> r))
      throw FormatError("line " + std::to_string(line_no) + ": expected 'u v resistance'");
    e.resistance = parse_double(r, line_no);
    if (e.u < 0 || e.v < 0 || e.u >= net.node_count || e.v >= net.node_count)
      throw FormatError("line " + std::to_string(line_no) + ": node out of range");
    net.edges.push_back(e);
  }
  return net;
}

void write_resistance_csv(std::ostream& out, const std::vector<double>& r) {
  out << "resistance\n";
  for (double v : r) out << exact(v) << '\n';
}

std::vector<double> read_resistance_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "resistance")
    throw FormatError("resistance CSV must start with 'resistance'");
  std::vector<double> r;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty()) r.push_back(parse_double(line, line_no));
  }
  return r;
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

Json read_json_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError("'" + path.string() + "': " + e.what());
  }
}

}  // namespace lcl
