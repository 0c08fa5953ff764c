#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "subharmonic/config.hpp"
#include "subharmonic/csv.hpp"
#include "subharmonic/errors.hpp"

using namespace subharmonic;

namespace {

std::string error_text(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.what();
  }
  return "";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config lookups") {
  const ConfigNode root = parse_config(R"({
    "model": {"beta": 0.5, "q_tilde": "inf", "dim": 40},
    "scan": {"nu_d": {"min": 3.0, "max": 3.4, "steps": 5}},
    "seeds": [[1, 2], [3, -4]]
  })");
  const ConfigNode model = root.child("model");
  CHECK(model.number("beta") == 0.5);
  CHECK(std::isinf(model.extended_number_or("q_tilde", 1.0)));
  CHECK(model.number_or("lambda", 0.2) == 0.2);
  CHECK(model.integer("dim") == 40);
  const std::vector<double> nus = root.child("scan").range("nu_d").values();
  REQUIRE(nus.size() == 5);
  CHECK(nus.front() == 3.0);
  CHECK(nus.back() == 3.4);
  CHECK(nus[2] == doctest::Approx(3.2));
  CHECK(root.pair_list("seeds")[1] == std::pair{3.0, -4.0});
  CHECK_FALSE(root.find("missing").has_value());
}

TEST_CASE("config errors name the offending key") {
  const ConfigNode root = parse_config(R"({"model": {"beta": "big", "lambda": 0.2, "extra": 1}})");
  CHECK(error_text([&] { root.child("model").number("nu_d"); }) == "missing key 'model.nu_d'");
  CHECK(error_text([&] { root.child("model").number("beta"); }).find("'model.beta'") != std::string::npos);
  CHECK(error_text([&] { root.child("model").expect_keys({"beta", "lambda"}); }).find("model.extra") !=
        std::string::npos);
  CHECK(error_text([&] { root.child("model").integer("lambda"); }).find("model.lambda") != std::string::npos);
  const std::string syntax = error_text([] { parse_config("{\n  \"model\": {,}\n}"); });
  CHECK(syntax.find("line 2") != std::string::npos);
  CHECK(syntax.find("column") != std::string::npos);
  CHECK(error_text([] { parse_config(R"({"r": {"min": 2, "max": 1}})").range("r"); }).find("'r'") !=
        std::string::npos);
}

TEST_CASE("missing config file") {
  try {
    load_config("/nonexistent/config.json");
    CHECK(false);
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::IoError));
  }
}

TEST_CASE("CSV round trip is exact and deterministic") {
  const auto dir = std::filesystem::temp_directory_path() / "subharmonic_csv_test";
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name) {
    CsvWriter w((dir / name).string(), "demo/1", {"a", "b", "label"});
    w.row({0.1, 7LL, std::string("Node")});
    w.row({1.0 / 3.0, -2LL, std::string("Saddle")});
    w.row({std::nan(""), 0LL, std::string("x")});
    w.close();
  };
  write("one.csv");
  write("two.csv");
  CHECK(slurp(dir / "one.csv") == slurp(dir / "two.csv"));
  const CsvTable t = read_csv((dir / "one.csv").string());
  CHECK(t.schema == "demo/1");
  CHECK(t.columns == std::vector<std::string>{"a", "b", "label"});
  REQUIRE(t.rows.size() == 3);
  CHECK(std::stod(t.rows[1][0]) == 1.0 / 3.0);
  CHECK(t.rows[1][2] == "Saddle");
  CHECK(std::isnan(std::stod(t.rows[2][0])));
  CsvWriter w((dir / "bad.csv").string(), "demo/1", {"a", "b"});
  CHECK_THROWS_AS(w.row({1.0}), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(std::stod(format_number(0.1)) == 0.1);
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}
