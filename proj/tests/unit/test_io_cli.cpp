#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "kscars/cli.hpp"
#include "kscars/io.hpp"
#include "kscars/plot.hpp"
#include "support.hpp"

using namespace kscars;
using kscars::testing::kind_of;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = execute(args, out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kscars_unit_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "-0");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("CSV round trip") {
  CsvTable t;
  t.add_column("t", {0.0, 0.5, 1.0});
  t.add_column("value", {1.0 / 3.0, std::nan(""), -2e-300});
  const auto text = t.to_string();
  CHECK(text.rfind("t,value\n", 0) == 0);
  const auto back = CsvTable::parse(text);
  CHECK(back.names() == t.names());
  REQUIRE(back.rows() == 3);
  CHECK(back.column("value")[0] == 1.0 / 3.0);
  CHECK(std::isnan(back.column("value")[1]));
  CHECK(back.column("value")[2] == -2e-300);
  CHECK(back.to_string() == text);
  CHECK(kind_of([&] { back.column("nope"); }) == ErrorKind::Configuration);
  CHECK(kind_of([&] { t.add_column("short", {1.0}); }) == ErrorKind::Configuration);
  CHECK(kind_of([] { CsvTable::parse("a,b\n1,2\n3\n"); }) == ErrorKind::Io);
  CHECK(kind_of([] { CsvTable::parse("a\nx\n"); }) == ErrorKind::Io);
}

TEST_CASE("atomic write") {
  const auto dir = scratch("io");
  const auto file = dir / "nested" / "x.txt";
  write_text_atomic(file, "first");
  write_text_atomic(file, "second");
  CHECK(read_text(file) == "second");
  std::size_t entries = 0;
  for (const auto& e : fs::directory_iterator(file.parent_path())) entries += e.is_regular_file();
  CHECK(entries == 1);
  CHECK(kind_of([&] { read_text(dir / "missing.txt"); }) == ErrorKind::Io);
  fs::remove_all(dir);
}

TEST_CASE("SVG rendering") {
  CsvTable t;
  t.add_column("x", {0.0, 1.0, 2.0, 3.0});
  t.add_column("y", {0.0, 1.0, std::nan(""), 9.0});
  t.add_column("z", {1.0, 1.0, 1.0, 1.0});
  const PlotSpec spec{"a <title>", "x", {"y"}, {"z"}, "", "", 720, 440};
  const auto svg = render_svg(t, spec);
  CHECK(svg == render_svg(t, spec));
  CHECK(svg.find("a &lt;title&gt;") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  // NaN splits the line into two pieces
  std::size_t lines = 0;
  for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++lines;
  CHECK(lines == 2);

  const auto empty = render_svg(CsvTable{}, PlotSpec{});
  CHECK(empty.find("<svg") != std::string::npos);
  CHECK(empty.find("<polyline") == std::string::npos);
  CHECK(kind_of([&] { render_svg(t, PlotSpec{"", "x", {"w"}}); }) == ErrorKind::Configuration);
}

TEST_CASE("cli: basics and error reporting") {
  auto r = run({"basis", "--n", "16", "--constraint", "pxp"});
  CHECK(r.status == 0);
  CHECK(r.out == "2207\n");

  r = run({"basis", "--n", "4", "--constraint", "pxp", "--list"});
  CHECK(r.out == "7\n0000\n1000\n0100\n0010\n1010\n0001\n0101\n");

  r = run({"basis", "--bogus"});
  CHECK(r.status == kExitUsage);
  auto j = nlohmann::json::parse(r.err);
  CHECK(j["error"] == "usage");
  CHECK(j["exit_status"] == 2);

  CHECK(run({"frobnicate"}).status == kExitUsage);
  CHECK(run({"basis", "--n", "40"}).status == kExitSize);
  CHECK(run({"lanczos", "--model", "pxp", "--n", "8", "--state", "1100", "--out-dir",
             scratch("cli_err").string()})
            .status == kExitInvalidState);
  CHECK(run({"lanczos", "--model", "nope", "--n", "8"}).status == kExitConfiguration);
  CHECK(run({"analytic", "--what", "bn-suq2", "--j", "2", "--q", "1.5", "--out-dir",
             scratch("cli_err").string()})
            .status == kExitDomain);
  CHECK(run({"algebra", "--n", "7", "--family", "pxp", "--out-dir", scratch("cli_err").string()}).status ==
        kExitPrecondition);

  const auto blocked = scratch("cli_blocked");
  write_text_atomic(blocked, "not a directory");
  r = run({"basis", "--n", "4"});
  CHECK(r.status == 0);
  r = run({"lanczos", "--model", "pxp", "--n", "8", "--out-dir", (blocked / "sub").string()});
  CHECK(r.status == kExitIo);
  CHECK(nlohmann::json::parse(r.err)["error"] == "io");
  fs::remove_all(blocked);
  fs::remove_all(scratch("cli_err"));

  CHECK(exit_status(ErrorKind::Convergence) == 8);
  CHECK(exit_status(ErrorKind::Io) == 9);
}

TEST_CASE("cli: lanczos artifacts") {
  const auto dir = scratch("cli_lanczos");
  const auto r = run({"lanczos", "--model", "param", "--n", "8", "--out-dir", dir.string()});
  REQUIRE(r.status == 0);
  const auto csv = CsvTable::parse(read_text(dir / "lanczos_param_N8_Z2.csv"));
  const auto& b = csv.column("b_n");
  REQUIRE(csv.rows() == 9);
  CHECK(b[0] == 0.0);
  CHECK(b[3] == doctest::Approx(std::sqrt(18.0)).epsilon(1e-13));
  const auto meta = nlohmann::json::parse(read_text(dir / "lanczos_param_N8_Z2.json"));
  CHECK(meta["K"] == 9);
  CHECK(meta["terminated_naturally"] == true);
  fs::remove_all(dir);
}

TEST_CASE("cli: reproduce is deterministic") {
  const auto dir = scratch("cli_fig2");
  REQUIRE(run({"reproduce", "--figure", "2", "--out-dir", dir.string()}).status == 0);
  const auto a = CsvTable::parse(read_text(dir / "fig2a.csv"));
  for (std::size_t k = 0; k < a.rows(); ++k)
    CHECK(a.column("b_n")[k] == doctest::Approx(a.column("b_n_exact")[k]).epsilon(1e-9));
  const auto b = CsvTable::parse(read_text(dir / "fig2b.csv"));
  for (std::size_t k = 0; k < b.rows(); ++k)
    CHECK(std::abs(b.column("complexity")[k] - b.column("complexity_exact")[k]) < 1e-8);

  const auto first_csv = read_text(dir / "fig2b.csv");
  const auto first_svg = read_text(dir / "fig2b.svg");
  REQUIRE(run({"reproduce", "--figure", "2", "--out-dir", dir.string()}).status == 0);
  CHECK(read_text(dir / "fig2b.csv") == first_csv);
  CHECK(read_text(dir / "fig2b.svg") == first_svg);
  fs::remove_all(dir);
}
