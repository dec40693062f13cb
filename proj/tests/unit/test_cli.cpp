#include "dhwalk/cli.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

using dhwalk::cli::run;

namespace {
struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string f(const std::string& name) { return oracle::data_file("scenarios/" + name); }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("dhwalk_test_" + name)).string();
}
}  // namespace

TEST(Cli, WalkCsvFigureTwo) {
  const auto r = call({"walk", f("y3_234.json"), "--trace", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 8);
}

TEST(Cli, WalkTextAndStrict) {
  EXPECT_EQ(call({"walk", f("y3_234.json")}).code, 0);
  EXPECT_EQ(call({"walk", f("y3_234.json"), "--strict"}).code, 0);
  EXPECT_EQ(call({"walk", f("s2xs2_trivial.json")}).code, 0);
  EXPECT_EQ(call({"walk", f("s2xs2_trivial.json"), "--strict"}).code, 3);
}

TEST(Cli, WalkRefusals) {
  EXPECT_EQ(call({"walk", f("y3_234_max8.json")}).code, 2);
  const auto r = call({"walk", f("y3_234_corrupt_euler.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("euler-inconsistency"), std::string::npos) << r.err;
}

TEST(Cli, Validate) {
  EXPECT_EQ(call({"validate", f("y3_234.json")}).code, 0);
  const auto r = call({"validate", f("bad_values.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("isolated value check: fail"), std::string::npos) << r.out;
}

TEST(Cli, Classify) {
  const auto r = call({"classify", f("y3_234.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Y3(2,3,4)"), std::string::npos);
  EXPECT_EQ(call({"classify", f("bad_values.json")}).code, 2);
  EXPECT_EQ(call({"classify", f("y3_234_max8.json")}).code, 2);
  EXPECT_EQ(call({"classify", f("y3_234_full.json"), "--against", f("y3_234_full.json")}).code, 0);
  const auto w = call({"classify", f("y3_234_full.json"), "--against", f("y3_234_corrupt_euler.json")});
  EXPECT_EQ(w.code, 2);
  EXPECT_NE(w.out.find("distinct data"), std::string::npos);
}

TEST(Cli, ProfileFormats) {
  const auto csv = call({"dh-profile", f("y3_234.json"), "--samples", "10", "--emit", "csv"});
  EXPECT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, 11), "t,volume,k\n");
  EXPECT_EQ(call({"dh-profile", f("y3_234.json"), "--emit", "text"}).code, 0);
  const auto path = temp_path("profile.svg");
  EXPECT_EQ(call({"dh-profile", f("y3_234.json"), "--emit", "svg", "-o", path}).code, 0);
  EXPECT_TRUE(std::filesystem::exists(path));
  std::filesystem::remove(path);
  EXPECT_EQ(call({"dh-profile", f("y3_234.json"), "--samples", "1"}).code, 1);
  EXPECT_EQ(call({"dh-profile", f("y3_234.json"), "--emit", "png"}).code, 1);
}

TEST(Cli, LatticeAndFacts) {
  const auto r = call({"lattice", "exc", "-k", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("CP2#2: 3"), std::string::npos) << r.out;
  EXPECT_EQ(call({"lattice", "exc", "-k", "9"}).code, 1);
  EXPECT_EQ(call({"lattice"}).code, 1);
  EXPECT_EQ(call({"facts"}).code, 0);
}

TEST(Cli, Bootstrap) {
  const auto path = temp_path("full.json");
  EXPECT_EQ(call({"bootstrap", f("y3_234.json"), "-o", path}).code, 0);
  const auto d = dhwalk::load_scenario(path);
  EXPECT_EQ(d.mode(), dhwalk::DataMode::full);
  std::filesystem::remove(path);
  EXPECT_EQ(call({"bootstrap", f("y3_234_max8.json")}).code, 2);
}

TEST(Cli, ParseFailures) {
  EXPECT_EQ(call({}).code, 1);
  EXPECT_EQ(call({"frobnicate"}).code, 1);
  EXPECT_EQ(call({"walk"}).code, 1);
  EXPECT_EQ(call({"walk", "/nonexistent.json"}).code, 1);
  const auto path = temp_path("broken.json");
  {
    std::ofstream o(path);
    o << "{\"dim\": 6,\n \"mode\": \"small\", \"levels\": [ }";
  }
  const auto r = call({"walk", path});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  std::filesystem::remove(path);
}

TEST(Cli, HelpIsOk) { EXPECT_EQ(call({"--help"}).code, 0); }
