#include "hebbswarm/plot.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "hebbswarm/io.hpp"

namespace fs = std::filesystem;

namespace hebbswarm {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                   "#d62728", "#9467bd", "#8c564b"};

std::string px(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                               std::chars_format::fixed, 2);
  return std::string(buf, p);
}

std::string tick_label(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                               std::chars_format::general, 5);
  return std::string(buf, p);
}

struct Frame {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  double left = 64, right = kWidth - 24, top = 24, bottom = kHeight - 44;

  double X(double x) const { return left + (x - x0) / (x1 - x0) * (right - left); }
  double Y(double y) const { return bottom - (y - y0) / (y1 - y0) * (bottom - top); }
};

void pad(double& lo, double& hi) {
  if (lo > hi) std::swap(lo, hi);
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  } else {
    const double p = 0.05 * (hi - lo);
    lo -= p;
    hi += p;
  }
}

std::ofstream open_svg(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out;
}

void draw_axes(std::ofstream& out, const Frame& f, const std::string& x_label,
               const std::string& y_label) {
  out << "<g stroke=\"#333\" stroke-width=\"1\" fill=\"none\">\n"
      << "<path d=\"M" << px(f.left) << ' ' << px(f.top) << " V" << px(f.bottom)
      << " H" << px(f.right) << "\"/>\n</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + i * (f.x1 - f.x0) / 4;
    const double yv = f.y0 + i * (f.y1 - f.y0) / 4;
    const double xp = f.X(xv);
    const double yp = f.Y(yv);
    out << "<line x1=\"" << px(xp) << "\" y1=\"" << px(f.bottom) << "\" x2=\""
        << px(xp) << "\" y2=\"" << px(f.bottom + 4)
        << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << px(xp) << "\" y=\"" << px(f.bottom + 16)
        << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    out << "<line x1=\"" << px(f.left - 4) << "\" y1=\"" << px(yp) << "\" x2=\""
        << px(f.left) << "\" y2=\"" << px(yp) << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << px(f.left - 7) << "\" y=\"" << px(yp + 4)
        << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
  }
  out << "<text x=\"" << px((f.left + f.right) / 2) << "\" y=\""
      << px(kHeight - 8) << "\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << px((f.top + f.bottom) / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << px((f.top + f.bottom) / 2) << ")\">" << y_label << "</text>\n";
  out << "</g>\n";
}

void draw_polyline(std::ofstream& out, const Frame& f,
                   const std::vector<double>& xs, const std::vector<double>& ys,
                   const char* color) {
  if (xs.empty()) return;
  // Cap the vertex count so giant logs stay plottable.
  const size_t stride = std::max<size_t>(1, xs.size() / 4000);
  out << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.2\" points=\"";
  for (size_t i = 0; i < xs.size(); i += stride)
    out << px(f.X(xs[i])) << ',' << px(f.Y(ys[i])) << ' ';
  if ((xs.size() - 1) % stride != 0)
    out << px(f.X(xs.back())) << ',' << px(f.Y(ys.back()));
  out << "\"/>\n";
}

void legend(std::ofstream& out, const Frame& f,
            const std::vector<std::string>& names) {
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (size_t i = 0; i < names.size(); ++i) {
    const double y = f.top + 14 + 16 * static_cast<double>(i);
    out << "<line x1=\"" << px(f.left + 10) << "\" y1=\"" << px(y) << "\" x2=\""
        << px(f.left + 34) << "\" y2=\"" << px(y) << "\" stroke=\""
        << kColors[i % 6] << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << px(f.left + 40) << "\" y=\"" << px(y + 4)
        << "\" fill=\"#333\">" << names[i] << "</text>\n";
  }
  out << "</g>\n";
}

// Multi-series line chart: column 0 on the x axis, the rest as series.
void plot_lines(const CsvTable& table, const fs::path& svg_path) {
  const size_t series = table.header.size() - 1;
  Frame f;
  if (!table.rows.empty()) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    for (const auto& r : table.rows) {
      x0 = std::min(x0, r[0]);
      x1 = std::max(x1, r[0]);
      for (size_t s = 1; s < table.header.size(); ++s) {
        y0 = std::min(y0, r[s]);
        y1 = std::max(y1, r[s]);
      }
    }
    pad(x0, x1);
    pad(y0, y1);
    f = Frame{x0, x1, y0, y1};
  }
  auto out = open_svg(svg_path);
  draw_axes(out, f, table.header[0], series == 1 ? table.header[1] : "");
  for (size_t s = 1; s <= series; ++s) {
    std::vector<double> xs, ys;
    xs.reserve(table.rows.size());
    ys.reserve(table.rows.size());
    for (const auto& r : table.rows) {
      xs.push_back(r[0]);
      ys.push_back(r[s]);
    }
    draw_polyline(out, f, xs, ys, kColors[(s - 1) % 6]);
  }
  if (series > 1)
    legend(out, f, {table.header.begin() + 1, table.header.end()});
  out << "</svg>\n";
}

void plot_trajectory(const CsvTable& table, const fs::path& svg_path) {
  const int cx = table.column("x");
  const int cy = table.column("y");
  const int cid = table.column("robot_id");

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!table.rows.empty()) {
    x0 = y0 = std::numeric_limits<double>::infinity();
    x1 = y1 = -x0;
    for (const auto& r : table.rows) {
      x0 = std::min(x0, r[cx]);
      x1 = std::max(x1, r[cx]);
      y0 = std::min(y0, r[cy]);
      y1 = std::max(y1, r[cy]);
    }
    // Keep the arena square on screen.
    const double span = std::max(x1 - x0, y1 - y0);
    x1 = x0 + span;
    y1 = y0 + span;
    pad(x0, x1);
    pad(y0, y1);
  }
  Frame f{x0, x1, y0, y1};
  f.right = f.left + (f.bottom - f.top);  // square plot area

  auto out = open_svg(svg_path);
  draw_axes(out, f, "x", "y");

  std::map<long, std::pair<std::vector<double>, std::vector<double>>> tracks;
  for (const auto& r : table.rows) {
    auto& [xs, ys] = tracks[std::lround(r[cid])];
    xs.push_back(r[cx]);
    ys.push_back(r[cy]);
  }
  int idx = 0;
  for (const auto& [id, track] : tracks) {
    const char* color = kColors[idx++ % 6];
    draw_polyline(out, f, track.first, track.second, color);
    // Start dot, end cross.
    out << "<circle cx=\"" << px(f.X(track.first.front())) << "\" cy=\""
        << px(f.Y(track.second.front())) << "\" r=\"3\" fill=\"" << color
        << "\"/>\n";
    const double ex = f.X(track.first.back());
    const double ey = f.Y(track.second.back());
    out << "<path d=\"M" << px(ex - 3) << ' ' << px(ey - 3) << " L" << px(ex + 3)
        << ' ' << px(ey + 3) << " M" << px(ex - 3) << ' ' << px(ey + 3) << " L"
        << px(ex + 3) << ' ' << px(ey - 3) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
  }
  out << "</svg>\n";
}

void plot_histogram(const CsvTable& table, const fs::path& svg_path) {
  const int cl = table.column("bin_left");
  const int cr = table.column("bin_right");
  const int cc = table.column("count");

  Frame f;
  if (!table.rows.empty()) {
    double x0 = table.rows.front()[cl];
    double x1 = table.rows.back()[cr];
    double y1 = 0;
    for (const auto& r : table.rows) y1 = std::max(y1, r[cc]);
    double y0 = 0;
    pad(x0, x1);
    if (y1 == 0) y1 = 1;
    y1 *= 1.05;
    f = Frame{x0, x1, y0, y1};
  }
  auto out = open_svg(svg_path);
  draw_axes(out, f, "weight", "count");
  for (const auto& r : table.rows) {
    if (r[cc] <= 0) continue;
    const double left = f.X(r[cl]);
    const double right = f.X(r[cr]);
    const double top = f.Y(r[cc]);
    out << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\""
        << px(std::max(0.5, right - left)) << "\" height=\""
        << px(f.Y(0) - top) << "\" fill=\"" << kColors[0]
        << "\" fill-opacity=\"0.8\"/>\n";
  }
  out << "</svg>\n";
}

void plot_raster(const CsvTable& table, const fs::path& svg_path) {
  const size_t n = table.header.size();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& r : table.rows)
    for (double v : r) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(lo < hi)) hi = lo + 1;

  auto out = open_svg(svg_path);
  const double side = kHeight - 68.0;
  const double cell = side / static_cast<double>(n);
  const double ox = (kWidth - side) / 2.0, oy = 24.0;
  for (size_t y = 0; y < table.rows.size(); ++y)
    for (size_t x = 0; x < table.rows[y].size(); ++x) {
      const int g = static_cast<int>(
          std::lround(255.0 * (table.rows[y][x] - lo) / (hi - lo)));
      out << "<rect x=\"" << px(ox + x * cell) << "\" y=\"" << px(oy + y * cell)
          << "\" width=\"" << px(cell + 0.5) << "\" height=\"" << px(cell + 0.5)
          << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
    }
  out << "<rect x=\"" << px(ox) << "\" y=\"" << px(oy) << "\" width=\""
      << px(side) << "\" height=\"" << px(side)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "</svg>\n";
}

}  // namespace

void plot_csv(const fs::path& csv_path, const fs::path& svg_path) {
  const CsvTable table = read_csv(csv_path);
  if (table.header.size() < 2)
    throw CsvError(csv_path.string() + ": need at least two columns to plot");

  if (table.column("robot_id") >= 0 && table.column("x") >= 0 &&
      table.column("y") >= 0) {
    plot_trajectory(table, svg_path);
    return;
  }
  if (table.column("bin_left") >= 0 && table.column("bin_right") >= 0 &&
      table.column("count") >= 0) {
    plot_histogram(table, svg_path);
    return;
  }
  bool raster = table.header.size() >= 4;
  for (const auto& h : table.header)
    raster = raster && h.size() >= 2 && h[0] == 'x' &&
             std::isdigit(static_cast<unsigned char>(h[1]));
  if (raster) {
    plot_raster(table, svg_path);
    return;
  }
  plot_lines(table, svg_path);
}

}  // namespace hebbswarm
