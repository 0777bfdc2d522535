#include "pim/pointcloud.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace pim {
namespace {

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line_no,
                       const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& field, const std::filesystem::path& path,
                    std::size_t line_no) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    fail(path, line_no, "malformed number '" + field + "'");
  }
  while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) ++used;
  if (used != field.size()) fail(path, line_no, "trailing characters in '" + field + "'");
  if (!std::isfinite(value)) fail(path, line_no, "non-finite value '" + field + "'");
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void PointCloud::validate() const {
  const std::size_t n = size();
  const std::size_t m = boundary_size();
  if (n < 1) throw std::invalid_argument("PointCloud: needs at least one point");
  if (ambient_dim < 1) throw std::invalid_argument("PointCloud: ambient dimension must be >= 1");
  if (intrinsic_dim < 1 || intrinsic_dim > ambient_dim)
    throw std::invalid_argument("PointCloud: intrinsic dimension out of range");
  if (coords.size() != n * static_cast<std::size_t>(ambient_dim))
    throw std::invalid_argument("PointCloud: coordinate count does not match n * d");
  for (std::size_t i = 0; i < n; ++i)
    if (!(volume_weights[i] > 0.0))
      throw std::invalid_argument("PointCloud: volume weight " + std::to_string(i) +
                                  " is not positive");
  if (area_weights.size() != m)
    throw std::invalid_argument("PointCloud: area weight count does not match m");
  std::unordered_set<std::size_t> seen;
  for (std::size_t j = 0; j < m; ++j) {
    if (boundary_indices[j] >= n)
      throw std::invalid_argument("PointCloud: boundary index " + std::to_string(j) +
                                  " out of range");
    if (!seen.insert(boundary_indices[j]).second)
      throw std::invalid_argument("PointCloud: duplicate boundary index");
    if (!(area_weights[j] > 0.0))
      throw std::invalid_argument("PointCloud: area weight " + std::to_string(j) +
                                  " is not positive");
  }
}

PointCloud load_cloud(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_cloud: cannot open " + path.string());

  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) fail(path, line_no, "missing header");

  long long d = 0, k = 0, n = 0, m = 0;
  if (std::sscanf(line.c_str(), "# d=%lld k=%lld n=%lld m=%lld", &d, &k, &n, &m) != 4)
    fail(path, line_no, "header must be '# d=<d> k=<k> n=<n> m=<m>'");
  if (d < 1 || k < 1 || k > d || n < 1 || m < 0 || m > n)
    fail(path, line_no, "header values out of range");

  PointCloud cloud;
  cloud.ambient_dim = static_cast<int>(d);
  cloud.intrinsic_dim = static_cast<int>(k);
  cloud.coords.reserve(static_cast<std::size_t>(n * d));
  cloud.volume_weights.reserve(static_cast<std::size_t>(n));

  for (long long i = 0; i < n; ++i) {
    ++line_no;
    if (!std::getline(in, line)) fail(path, line_no, "unexpected end of file in point block");
    const auto fields = split_csv(line);
    if (fields.size() != static_cast<std::size_t>(d + 1))
      fail(path, line_no, "expected " + std::to_string(d + 1) + " fields, got " +
                              std::to_string(fields.size()));
    for (long long a = 0; a < d; ++a)
      cloud.coords.push_back(parse_double(fields[static_cast<std::size_t>(a)], path, line_no));
    const double v = parse_double(fields[static_cast<std::size_t>(d)], path, line_no);
    if (!(v > 0.0)) fail(path, line_no, "volume weight must be positive");
    cloud.volume_weights.push_back(v);
  }

  for (long long j = 0; j < m; ++j) {
    ++line_no;
    if (!std::getline(in, line)) fail(path, line_no, "unexpected end of file in boundary block");
    const auto fields = split_csv(line);
    if (fields.size() != 2) fail(path, line_no, "expected 2 fields in boundary row");
    long long index = -1;
    if (std::sscanf(fields[0].c_str(), "%lld", &index) != 1 || index < 0 || index >= n)
      fail(path, line_no, "bad boundary index '" + fields[0] + "'");
    const double a = parse_double(fields[1], path, line_no);
    if (!(a > 0.0)) fail(path, line_no, "area weight must be positive");
    cloud.boundary_indices.push_back(static_cast<std::size_t>(index));
    cloud.area_weights.push_back(a);
  }

  cloud.validate();
  return cloud;
}

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  cloud.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_cloud: cannot open " + path.string());
  out << "# d=" << cloud.ambient_dim << " k=" << cloud.intrinsic_dim << " n=" << cloud.size()
      << " m=" << cloud.boundary_size() << "\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (double c : p) out << format_double(c) << ',';
    out << format_double(cloud.volume_weights[i]) << "\n";
  }
  for (std::size_t j = 0; j < cloud.boundary_size(); ++j)
    out << cloud.boundary_indices[j] << ',' << format_double(cloud.area_weights[j]) << "\n";
  if (!out) throw std::runtime_error("save_cloud: write failed for " + path.string());
}

}  // namespace pim
