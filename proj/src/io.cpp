#include "hebbswarm/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace hebbswarm {

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string fmt(long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

std::string u64_to_string(std::uint64_t v) { return std::to_string(v); }

std::uint64_t u64_from_string(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("not an unsigned integer: " + s);
  return v;
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path.string());

  CsvTable table;
  std::string line;
  long row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (row == 1) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size())
      throw CsvError(path.string() + ": row " + std::to_string(row) + " has " +
                     std::to_string(cells.size()) + " cells, expected " +
                     std::to_string(table.header.size()));
    std::vector<double> values(cells.size());
    for (size_t i = 0; i < cells.size(); ++i) {
      const auto& c = cells[i];
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), values[i]);
      if (ec != std::errc{} || ptr != c.data() + c.size())
        throw CsvError(path.string() + ": row " + std::to_string(row) +
                       ": not a number: '" + c + "'");
    }
    table.rows.push_back(std::move(values));
  }
  if (table.header.empty())
    throw CsvError(path.string() + ": missing header row");
  return table;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return j;
}

void write_genotype(const std::filesystem::path& path, const GenotypeFile& g) {
  nlohmann::json j;
  j["condition"] = g.condition;
  j["architecture"] = g.architecture;
  nlohmann::json geno = nlohmann::json::array();
  for (Eigen::Index i = 0; i < g.genotype.size(); ++i) geno.push_back(g.genotype[i]);
  j["genotype"] = std::move(geno);
  j["fitness"] = g.fitness;
  j["seed"] = u64_to_string(g.seed);
  write_json(path, j);
}

GenotypeFile read_genotype(const std::filesystem::path& path) {
  const nlohmann::json j = read_json(path);
  GenotypeFile g;
  g.condition = j.at("condition").get<std::string>();
  g.architecture = j.at("architecture").get<std::vector<int>>();
  const auto& geno = j.at("genotype");
  g.genotype.resize(geno.size());
  for (size_t i = 0; i < geno.size(); ++i) g.genotype[i] = geno[i].get<double>();
  g.fitness = j.value("fitness", 0.0);
  if (j.contains("seed")) g.seed = u64_from_string(j["seed"].get<std::string>());
  return g;
}

void write_field_raster(const ScalarField& field,
                        const std::filesystem::path& csv_path, int resolution,
                        double t_seconds) {
  if (resolution < 2) throw std::invalid_argument("raster resolution must be >= 2");
  std::vector<std::string> header(resolution);
  for (int i = 0; i < resolution; ++i) header[i] = "x" + std::to_string(i);
  std::vector<std::vector<std::string>> rows(resolution,
                                             std::vector<std::string>(resolution));
  const double s = field.arena_size() / (resolution - 1);
  for (int yi = 0; yi < resolution; ++yi)
    for (int xi = 0; xi < resolution; ++xi)
      rows[yi][xi] = fmt(field.sample(xi * s, yi * s, t_seconds));
  write_csv(csv_path, header, rows);

  nlohmann::json j;
  j["kind"] = to_string(field.kind());
  j["arena_size"] = field.arena_size();
  j["resolution"] = resolution;
  j["t_seconds"] = t_seconds;
  j["falloff_radius"] = field.params().falloff_radius;
  j["switch_seconds"] = field.params().switch_seconds;
  std::filesystem::path json_path = csv_path;
  json_path.replace_extension(".json");
  write_json(json_path, j);
}

}  // namespace hebbswarm
