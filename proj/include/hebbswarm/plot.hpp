#pragma once

#include <filesystem>

namespace hebbswarm {

// Renders one of the toolkit's CSV outputs as a standalone SVG. The figure
// kind (learning curve, trajectory, series, histogram, field raster) is
// inferred from the header row; an empty table produces bare axes. Malformed
// input raises CsvError naming the file and row.
void plot_csv(const std::filesystem::path& csv_path,
              const std::filesystem::path& svg_path);

}  // namespace hebbswarm
