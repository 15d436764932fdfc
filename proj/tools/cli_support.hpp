#pragma once

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <utility>
#include <string>
#include <string_view>
#include <vector>

#include "merobif/errors.hpp"
#include "merobif/render.hpp"
#include "merobif/sphere.hpp"

namespace merobif::cli {

inline double parse_real(std::string_view s, std::string_view what) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || p != end)
    throw UsageError("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

/// Parses "a", "bi", "a+bi", "a-bi" (also with j); "i" and "-i" are allowed.
inline Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) throw UsageError("empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, "complex number"), 0.0};
  s.pop_back();
  // Split at the last sign that is not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  if (im.front() == '+') im.erase(0, 1);
  return {re.empty() ? 0.0 : parse_real(re, "real part"), parse_real(im, "imaginary part")};
}

inline std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = s.find(',', start);
    out.push_back(parse_real(s.substr(start, comma - start), "list entry"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// "re_min,re_max,im_min,im_max".
inline Window parse_window(std::string_view s) {
  const auto v = parse_list(s);
  if (v.size() != 4) throw UsageError("window needs four values re_min,re_max,im_min,im_max");
  const Window w{v[0], v[1], v[2], v[3]};
  if (!(w.width() > 0) || !(w.height() > 0)) throw UsageError("window must have re_min < re_max and im_min < im_max");
  return w;
}

/// "WxH".
inline std::pair<int, int> parse_resolution(std::string_view s) {
  const std::size_t x = s.find_first_of("xX");
  if (x == std::string_view::npos) throw UsageError("resolution must look like WxH");
  const double w = parse_real(s.substr(0, x), "width");
  const double h = parse_real(s.substr(x + 1), "height");
  if (w != static_cast<int>(w) || h != static_cast<int>(h)) throw UsageError("resolution must be integral");
  return {static_cast<int>(w), static_cast<int>(h)};
}

/// Requested worker count capped by MEROBIF_THREADS; 0 requests the default.
inline int capped_workers(int requested) {
  if (requested <= 0) return default_worker_count();
  if (const char* env = std::getenv("MEROBIF_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0 && requested > cap) return cap;
  }
  return requested;
}

inline ExportFormat format_for(const std::string& path, const std::string& explicit_format) {
  std::string f = explicit_format;
  if (f.empty()) {
    const std::size_t dot = path.rfind('.');
    f = dot == std::string::npos ? "ppm" : path.substr(dot + 1);
  }
  if (f == "ppm") return ExportFormat::ppm;
  if (f == "csv") return ExportFormat::csv;
  if (f == "json") return ExportFormat::json;
  throw UsageError("unknown output format '" + f + "' (ppm, csv, json)");
}

inline std::string trim(std::string_view s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

/// Reads "key = value" lines; '#' starts a comment. Underscores in keys become hyphens.
inline std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in, const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    if (const std::size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError(origin + ":" + std::to_string(no) + ": expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (key.empty()) throw UsageError(origin + ":" + std::to_string(no) + ": empty key");
    for (char& c : key)
      if (c == '_') c = '-';
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

/// Removes "--config PATH" (or "--config=PATH") from args and appends
/// "--key value" for every config entry whose flag is not already present.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw UsageError("--config needs a path");
      path = args[k + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k), args.begin() + static_cast<std::ptrdiff_t>(k) + 2);
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  auto given = [&args](const std::string& flag) {
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  for (auto& [key, value] : parse_config(in, path)) {
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    args.push_back(flag);
    args.push_back(value);
  }
  return args;
}

}  // namespace merobif::cli
