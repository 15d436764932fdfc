#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "cli_support.hpp"

using namespace merobif;
using namespace merobif::cli;

TEST_CASE("complex number forms") {
  CHECK(parse_complex("2") == Complex{2, 0});
  CHECK(parse_complex("-1.5") == Complex{-1.5, 0});
  CHECK(parse_complex("3i") == Complex{0, 3});
  CHECK(parse_complex("i") == Complex{0, 1});
  CHECK(parse_complex("-i") == Complex{0, -1});
  CHECK(parse_complex("1+2i") == Complex{1, 2});
  CHECK(parse_complex("1-2j") == Complex{1, -2});
  CHECK(parse_complex("0.5 - i") == Complex{0.5, -1});
  CHECK(parse_complex("1e-3+2e+1i") == Complex{1e-3, 20});
  CHECK(parse_complex("-2e-2i") == Complex{0, -2e-2});
  CHECK_THROWS_AS(parse_complex(""), UsageError);
  CHECK_THROWS_AS(parse_complex("abc"), UsageError);
  CHECK_THROWS_AS(parse_complex("1+xi"), UsageError);
}

TEST_CASE("window and resolution") {
  const Window w = parse_window("-6,6,-4,4");
  CHECK(w.re_min == -6);
  CHECK(w.im_max == 4);
  CHECK_THROWS_AS(parse_window("1,2,3"), UsageError);
  CHECK_THROWS_AS(parse_window("2,1,0,1"), UsageError);
  CHECK(parse_resolution("480x320") == std::pair{480, 320});
  CHECK_THROWS_AS(parse_resolution("480"), UsageError);
  CHECK_THROWS_AS(parse_resolution("4.5x3"), UsageError);
}

TEST_CASE("output format") {
  CHECK(format_for("a.csv", "") == ExportFormat::csv);
  CHECK(format_for("a.json", "") == ExportFormat::json);
  CHECK(format_for("a", "") == ExportFormat::ppm);
  CHECK(format_for("a.csv", "ppm") == ExportFormat::ppm);
  CHECK_THROWS_AS(format_for("a.png", ""), UsageError);
}

TEST_CASE("config parsing") {
  std::istringstream in("# comment\nfamily = tansq\n\nmax_iter=300  # trailing\nlambda = \"1+2i\"\n");
  const auto kv = parse_config(in, "t.cfg");
  REQUIRE(kv.size() == 3);
  CHECK(kv[0] == std::pair<std::string, std::string>{"family", "tansq"});
  CHECK(kv[1] == std::pair<std::string, std::string>{"max-iter", "300"});
  CHECK(kv[2].second == "1+2i");
  std::istringstream bad("family tansq\n");
  CHECK_THROWS_AS(parse_config(bad, "t.cfg"), UsageError);
}

TEST_CASE("flags win over the config file") {
  const auto path = std::filesystem::temp_directory_path() / "merobif_cli_test.cfg";
  {
    std::ofstream f(path);
    f << "family = exponential\nlambda = 5\nmax-iter = 200\n";
  }
  const auto out = merge_config({"orbit", "--lambda", "0.2", "--config", path.string()});
  const std::vector<std::string> expected = {"orbit", "--lambda", "0.2", "--family", "exponential", "--max-iter", "200"};
  CHECK(out == expected);
  const auto eq = merge_config({"orbit", "--lambda=0.3", "--config=" + path.string()});
  CHECK(std::count(eq.begin(), eq.end(), "--lambda") == 0);
  CHECK(std::count(eq.begin(), eq.end(), "--family") == 1);
  CHECK_THROWS_AS(merge_config({"orbit", "--config"}), UsageError);
  CHECK_THROWS_AS(merge_config({"orbit", "--config", "/nonexistent/x.cfg"}), UsageError);
  std::filesystem::remove(path);
}

TEST_CASE("MEROBIF_THREADS caps the worker count") {
  ::setenv("MEROBIF_THREADS", "2", 1);
  CHECK(capped_workers(8) == 2);
  CHECK(capped_workers(1) == 1);
  CHECK(capped_workers(0) == 2);
  CHECK(default_worker_count() == 2);
  ::unsetenv("MEROBIF_THREADS");
  CHECK(capped_workers(8) == 8);
  CHECK(default_worker_count() >= 1);
}
