#include "waves/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "waves/error.hpp"

namespace waves::io {
namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    raise(ErrorCode::kSchemaViolation, "not a number: '" + s + "'");
  }
}

int integer_root(std::size_t count, int dim) {
  const int n = dim == 1 ? static_cast<int>(count) : static_cast<int>(std::lround(std::sqrt(double(count))));
  if (static_cast<std::size_t>(dim == 1 ? n : n * n) != count)
    raise(ErrorCode::kSchemaViolation, "row count is not n^d");
  return n;
}

}  // namespace

FieldFormat parse_format(const std::string& name) {
  if (name == "csv") return FieldFormat::kCsv;
  if (name == "json") return FieldFormat::kJson;
  raise(ErrorCode::kInvalidArgument, "unknown field format '" + name + "'");
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::kIoError, "cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) raise(ErrorCode::kIoError, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) raise(ErrorCode::kIoError, "rename failed: " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) raise(ErrorCode::kMissingFile, "no such file: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string field_to_string(const SurfaceField& f, FieldFormat format) {
  const PeriodicGrid& grid = f.grid();
  if (format == FieldFormat::kCsv) {
    std::string out = grid.dim() == 1 ? "x,value\n" : "x,y,value\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const int i0 = static_cast<int>(i % grid.n());
      const int i1 = static_cast<int>(i / grid.n());
      out += format_number(grid.coordinate(i0));
      if (grid.dim() == 2) out += "," + format_number(grid.coordinate(i1));
      out += "," + format_number(f.value(i)) + "\n";
    }
    return out;
  }
  json coeffs = json::object();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex c = f.coeff(i);
    if (c == Complex(0.0, 0.0)) continue;
    const Wavevector k = grid.wavevector(i);
    const std::string key = grid.dim() == 1 ? std::to_string(k[0]) : std::to_string(k[0]) + "," + std::to_string(k[1]);
    coeffs[key] = json::array({json::parse(format_number(c.real())), json::parse(format_number(c.imag()))});
  }
  json doc = {{"dim", grid.dim()}, {"n", grid.n()}, {"coefficients", coeffs}};
  return doc.dump(2) + "\n";
}

SurfaceField field_from_string(const std::string& text, FieldFormat format) {
  if (format == FieldFormat::kCsv) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) raise(ErrorCode::kSchemaViolation, "empty CSV");
    int dim = 0;
    if (line == "x,value") dim = 1;
    else if (line == "x,y,value") dim = 2;
    else raise(ErrorCode::kSchemaViolation, "unexpected CSV header '" + line + "'");
    std::vector<double> values;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split(line, ',');
      if (static_cast<int>(cells.size()) != dim + 1) raise(ErrorCode::kSchemaViolation, "bad CSV row '" + line + "'");
      values.push_back(parse_double(cells.back()));
    }
    const PeriodicGrid grid(dim, integer_root(values.size(), dim));
    return SurfaceField::from_values(grid, std::move(values));
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::kSchemaViolation, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("n") || !doc.contains("coefficients"))
    raise(ErrorCode::kSchemaViolation, "field JSON needs dim, n, coefficients");
  const PeriodicGrid grid(doc["dim"].get<int>(), doc["n"].get<int>());
  std::vector<Complex> coeffs(grid.size());
  for (const auto& [key, val] : doc["coefficients"].items()) {
    const auto parts = split(key, ',');
    if (static_cast<int>(parts.size()) != grid.dim() || !val.is_array() || val.size() != 2)
      raise(ErrorCode::kSchemaViolation, "bad coefficient entry '" + key + "'");
    int idx[2] = {0, 0};
    for (int j = 0; j < grid.dim(); ++j) {
      const int k = std::stoi(parts[j]);
      if (k < -grid.n() / 2 || k >= grid.n() / 2) raise(ErrorCode::kSchemaViolation, "wavenumber out of range: " + key);
      idx[j] = k < 0 ? k + grid.n() : k;
    }
    coeffs[idx[0] + static_cast<std::size_t>(grid.n()) * idx[1]] = Complex(val[0].get<double>(), val[1].get<double>());
  }
  return SurfaceField::from_coefficients(grid, std::move(coeffs));
}

void export_field(const SurfaceField& f, const std::filesystem::path& path, FieldFormat format) {
  write_file_atomic(path, field_to_string(f, format));
}

SurfaceField import_field(const std::filesystem::path& path, FieldFormat format) {
  return field_from_string(read_file(path), format);
}

std::string trajectory_to_csv(const evo::Trajectory& traj) {
  std::string out = "t,l2,hs,hhalf_dot,mean\n";
  for (const auto& r : traj.records) {
    out += format_number(r.t) + "," + format_number(r.l2) + "," + format_number(r.hs) + "," +
           format_number(r.hhalf_dot) + "," + format_number(r.mean) + "\n";
  }
  return out;
}

}  // namespace waves::io
