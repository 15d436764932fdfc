#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "merobif/errors.hpp"
#include "merobif/family.hpp"
#include "merobif/locator.hpp"
#include "merobif/orbit.hpp"
#include "merobif/report_json.hpp"

namespace merobif {

enum class PixelLabel { attracting, prepole, escaping, undetermined };

inline std::string_view to_string(PixelLabel l) {
  switch (l) {
    case PixelLabel::attracting: return "attracting";
    case PixelLabel::prepole: return "prepole";
    case PixelLabel::escaping: return "escaping";
    case PixelLabel::undetermined: return "undetermined";
  }
  return "?";
}

/// Merged classification of one parameter.
struct ParamClassification {
  std::vector<OrbitFate> fates;
  PixelLabel label = PixelLabel::undetermined;
  /// Period for attracting, order for prepole, first escape iteration for escaping.
  int period_or_order = 0;
  /// Singular value responsible for the label, -1 if none.
  int sv_index = -1;
};

/// Classifies every singular orbit and merges with precedence
/// attracting > prepole > escaping > undetermined (smallest period/order wins).
inline ParamClassification classify_parameter(const FamilySpec& family, Complex lambda, const OrbitConfig& cfg = {}) {
  ParamClassification pc;
  pc.fates.reserve(family.singular_values.size());
  for (std::size_t s = 0; s < family.singular_values.size(); ++s) {
    pc.fates.push_back(classify_singular_orbit(family, lambda, s, cfg));
  }
  auto rank = [](const OrbitFate& f) {
    if (std::holds_alternative<AttractedToCycle>(f)) return 0;
    if (std::holds_alternative<HitsPole>(f)) return 1;
    if (std::holds_alternative<Escapes>(f)) return 2;
    return 3;
  };
  auto key = [](const OrbitFate& f) {
    if (auto* a = std::get_if<AttractedToCycle>(&f)) return a->period;
    if (auto* h = std::get_if<HitsPole>(&f)) return h->order;
    if (auto* e = std::get_if<Escapes>(&f)) return e->at_iter;
    return 0;
  };
  int best_rank = 4;
  for (std::size_t s = 0; s < pc.fates.size(); ++s) {
    const int r = rank(pc.fates[s]);
    const int k = key(pc.fates[s]);
    if (r < best_rank || (r == best_rank && k < pc.period_or_order)) {
      best_rank = r;
      pc.period_or_order = k;
      pc.sv_index = r == 3 ? -1 : static_cast<int>(s);
    }
  }
  pc.label = static_cast<PixelLabel>(std::min(best_rank, 3));
  return pc;
}

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Palette {
  Rgb attracting{255, 255, 255};
  Rgb prepole{230, 150, 150};
  Rgb escaping_near{200, 200, 200};  // escapes immediately
  Rgb escaping_far{60, 60, 60};      // escapes late
  Rgb undetermined{110, 110, 110};
  Rgb cross{220, 0, 0};   // truncated (virtual-cycle) parameters
  Rgb square{0, 0, 0};    // centers, Misiurewicz and other overlays
};

struct Window {
  double re_min = -6.0, re_max = 6.0, im_min = -4.0, im_max = 4.0;

  static Window centered(Complex center, double width, double height) {
    return {center.real() - width / 2, center.real() + width / 2, center.imag() - height / 2,
            center.imag() + height / 2};
  }
  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  Complex center() const { return {(re_min + re_max) / 2, (im_min + im_max) / 2}; }
};

struct RenderConfig {
  Window window;
  int width = 480;
  int height = 320;
  OrbitConfig orbit;
  Palette palette;
  std::vector<ParamSolveReport> overlays;
  /// 0 means default_worker_count().
  int workers = 0;

  void validate() const {
    if (width < 16 || height < 16) throw PreconditionError("RenderConfig: resolution must be at least 16x16");
    if (!(window.width() > 0) || !(window.height() > 0))
      throw PreconditionError("RenderConfig: window must have positive width and height");
  }

  /// Parameter at the center of pixel (i, j); row 0 is the top edge.
  Complex lambda_at(int i, int j) const {
    const double dx = window.width() / width;
    const double dy = window.height() / height;
    return {window.re_min + (i + 0.5) * dx, window.im_max - (j + 0.5) * dy};
  }
};

/// Worker count from MEROBIF_THREADS, else the hardware concurrency.
inline int default_worker_count() {
  if (const char* env = std::getenv("MEROBIF_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct Grid {
  int width = 0;
  int height = 0;
  std::vector<ParamClassification> cells;  // row-major, top row first

  const ParamClassification& at(int i, int j) const {
    return cells[static_cast<std::size_t>(j) * static_cast<std::size_t>(width) + static_cast<std::size_t>(i)];
  }

  std::map<std::string, std::size_t> label_histogram() const {
    std::map<std::string, std::size_t> h;
    for (const auto& c : cells) ++h[std::string(to_string(c.label))];
    return h;
  }
};

/// Classifies every pixel. Rows are handed out to workers through an atomic
/// counter and each cell is written by index, so the result does not depend on
/// the number of workers.
inline Grid render_grid(const FamilySpec& family, const RenderConfig& config) {
  config.validate();
  Grid grid;
  grid.width = config.width;
  grid.height = config.height;
  grid.cells.resize(static_cast<std::size_t>(config.width) * static_cast<std::size_t>(config.height));
  std::atomic<int> next_row{0};
  auto work = [&] {
    for (int j = next_row++; j < config.height; j = next_row++) {
      for (int i = 0; i < config.width; ++i) {
        ParamClassification pc;
        try {
          pc = classify_parameter(family, config.lambda_at(i, j), config.orbit);
        } catch (const Error&) {
          pc = ParamClassification{};
        }
        grid.cells[static_cast<std::size_t>(j) * static_cast<std::size_t>(config.width) +
                   static_cast<std::size_t>(i)] = std::move(pc);
      }
    }
  };
  const int workers = std::clamp(config.workers > 0 ? config.workers : default_worker_count(), 1, config.height);
  std::vector<std::jthread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  return grid;
}

/// RGB raster (row-major, top-left origin) with overlays drawn on top.
inline std::vector<std::uint8_t> rasterize(const Grid& grid, const RenderConfig& config) {
  const Palette& pal = config.palette;
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(grid.width) * static_cast<std::size_t>(grid.height) * 3);
  auto put = [&](int i, int j, Rgb c) {
    if (i < 0 || j < 0 || i >= grid.width || j >= grid.height) return;
    const std::size_t o =
        3 * (static_cast<std::size_t>(j) * static_cast<std::size_t>(grid.width) + static_cast<std::size_t>(i));
    rgb[o] = c.r;
    rgb[o + 1] = c.g;
    rgb[o + 2] = c.b;
  };
  const int max_iter = std::max(1, config.orbit.max_iter);
  for (int j = 0; j < grid.height; ++j) {
    for (int i = 0; i < grid.width; ++i) {
      const auto& cell = grid.at(i, j);
      Rgb c = pal.undetermined;
      switch (cell.label) {
        case PixelLabel::attracting: c = pal.attracting; break;
        case PixelLabel::prepole: c = pal.prepole; break;
        case PixelLabel::escaping: {
          const double s = std::clamp(std::log1p(cell.period_or_order) / std::log1p(max_iter), 0.0, 1.0);
          auto mix = [s](std::uint8_t a, std::uint8_t b) {
            return static_cast<std::uint8_t>(std::lround(a + s * (static_cast<double>(b) - a)));
          };
          c = {mix(pal.escaping_near.r, pal.escaping_far.r), mix(pal.escaping_near.g, pal.escaping_far.g),
               mix(pal.escaping_near.b, pal.escaping_far.b)};
          break;
        }
        case PixelLabel::undetermined: break;
      }
      put(i, j, c);
    }
  }
  const double dx = config.window.width() / grid.width;
  const double dy = config.window.height() / grid.height;
  for (const auto& ov : config.overlays) {
    const int ci = static_cast<int>(std::floor((ov.lambda.real() - config.window.re_min) / dx));
    const int cj = static_cast<int>(std::floor((config.window.im_max - ov.lambda.imag()) / dy));
    if (ov.kind == SolveKind::truncated) {
      for (int d = -2; d <= 2; ++d) {
        put(ci + d, cj, pal.cross);
        put(ci, cj + d, pal.cross);
      }
    } else {
      for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) put(ci + a, cj + b, pal.square);
    }
  }
  return rgb;
}

/// Binary P6 image: "P6\n<w> <h>\n255\n" followed by the raster.
inline std::string ppm_bytes(const Grid& grid, const RenderConfig& config) {
  const auto rgb = rasterize(grid, config);
  std::string out = "P6\n" + std::to_string(grid.width) + " " + std::to_string(grid.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
  return out;
}

inline std::string csv_text(const Grid& grid, const RenderConfig& config) {
  std::ostringstream os;
  os.precision(17);
  os << "i,j,re_lambda,im_lambda,label,period_or_order,sv_fates\n";
  for (int j = 0; j < grid.height; ++j) {
    for (int i = 0; i < grid.width; ++i) {
      const auto& c = grid.at(i, j);
      const Complex l = config.lambda_at(i, j);
      os << i << ',' << j << ',' << l.real() << ',' << l.imag() << ',' << to_string(c.label) << ','
         << c.period_or_order << ',';
      for (std::size_t s = 0; s < c.fates.size(); ++s) os << (s ? "|" : "") << describe(c.fates[s]);
      os << '\n';
    }
  }
  return os.str();
}

inline nlohmann::json render_metadata(const FamilySpec& family, const Grid& grid, const RenderConfig& config) {
  nlohmann::json j;
  j["family"] = family.name;
  j["window"] = {{"re_min", config.window.re_min},
                 {"re_max", config.window.re_max},
                 {"im_min", config.window.im_min},
                 {"im_max", config.window.im_max}};
  j["resolution"] = {{"width", grid.width}, {"height", grid.height}};
  j["max_iter"] = config.orbit.max_iter;
  j["label_counts"] = grid.label_histogram();
  nlohmann::json overlays = nlohmann::json::array();
  for (const auto& ov : config.overlays) overlays.push_back(to_json(ov));
  j["overlays"] = std::move(overlays);
  return j;
}

enum class ExportFormat { ppm, csv, json };

inline void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("failed writing '" + path + "'");
}

inline void export_grid(const FamilySpec& family, const Grid& grid, const RenderConfig& config, ExportFormat format,
                        const std::string& path) {
  switch (format) {
    case ExportFormat::ppm: write_file(path, ppm_bytes(grid, config)); break;
    case ExportFormat::csv: write_file(path, csv_text(grid, config)); break;
    case ExportFormat::json: write_file(path, render_metadata(family, grid, config).dump(2) + "\n"); break;
  }
}

}  // namespace merobif
