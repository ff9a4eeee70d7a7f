#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hebbswarm/field.hpp"
#include "json.hpp"

namespace hebbswarm {

// Shortest round-trip decimal form, so identical doubles always produce
// identical bytes.
std::string fmt(double v);
std::string fmt(long v);
std::string fmt(int v);

std::string u64_to_string(std::uint64_t v);
std::uint64_t u64_from_string(const std::string& s);

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric table: one header line, then rows of doubles.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

// Throws CsvError naming the file and 1-based row on malformed input.
CsvTable read_csv(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

struct GenotypeFile {
  std::string condition;
  std::vector<int> architecture;
  Eigen::VectorXd genotype;
  double fitness = 0.0;
  std::uint64_t seed = 0;
};

void write_genotype(const std::filesystem::path& path, const GenotypeFile& g);
GenotypeFile read_genotype(const std::filesystem::path& path);

// Samples the field on a resolution x resolution grid (row y, column x) and
// writes <stem>.csv plus a <stem>.json header describing it.
void write_field_raster(const ScalarField& field,
                        const std::filesystem::path& csv_path, int resolution,
                        double t_seconds = 0.0);

}  // namespace hebbswarm
