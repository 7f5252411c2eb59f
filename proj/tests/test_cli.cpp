#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nc2/cli.hpp"
#include "support/corpus.hpp"

using namespace nc2;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome nc2_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return fixtures::fixture_path(name); }

Json json_of(const Outcome& o) { return Json::parse(o.out); }

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(Cli, CutsTable) {
  const Outcome o = nc2_run({"cuts", fixture("butterfly.txt"), "--format", "table"});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "k11 k22 k12 k21 k121 k122 k112 k212 k1212\n1 1 2 2 2 2 2 2 3\n");
}

TEST(Cli, CutsJsonForRelay) {
  const Json j = json_of(nc2_run({"cuts", fixture("relay.txt")}));
  EXPECT_EQ(j["cuts"]["k121"], 3);
  EXPECT_EQ(j["cuts"]["k1212"], 4);
  EXPECT_EQ(j["meta"]["tool"], "nc2");
  EXPECT_TRUE(j["meta"]["q"].is_null());
}

TEST(Cli, InputErrorsExitTwo) {
  const auto empty = temp_file("nc2_empty.txt");
  std::ofstream(empty).close();
  EXPECT_EQ(nc2_run({"cuts", empty.string()}).code, 2);
  EXPECT_EQ(nc2_run({"cuts", "/nonexistent/graph.txt"}).code, 2);
  EXPECT_EQ(nc2_run({"frobnicate", fixture("relay.txt")}).code, 2);
  EXPECT_EQ(nc2_run({"region", fixture("relay.txt"), "--q", "256"}).code, 2);
  EXPECT_EQ(nc2_run({"region", fixture("relay.txt"), "--format", "xml"}).code, 2);
  EXPECT_EQ(nc2_run({"region", "--cuts-only", "1,2,3"}).code, 2);
  EXPECT_EQ(nc2_run({"region", "--cuts-only", "3,1,0,0,2,1,3,1,3"}).code, 2);
  EXPECT_EQ(nc2_run({"code", "--cuts-only", "1,1,2,2,2,2,2,2,3"}).code, 2);
  const Outcome o = nc2_run({"cuts", empty.string()});
  EXPECT_NE(o.err.find("missing source1"), std::string::npos) << o.err;
}

TEST(Cli, RegionButterfly) {
  const Json j = json_of(nc2_run({"region", fixture("butterfly.txt")}));
  const Json& r = j["region"];
  EXPECT_EQ(r["classification"], "High");
  EXPECT_EQ(r["hull"], Json::parse(R"([["0","0"],["1","0"],["1","1"],["0","1"]])"));
  EXPECT_EQ(j["meta"]["q"], 257);
  EXPECT_EQ(j["meta"]["seed"], 0);
  EXPECT_EQ(r["rank_terms"]["achieved"], Json::parse("[2,2]"));
  EXPECT_EQ(r["flags"].size(), 3u);
}

TEST(Cli, RegionRelayIsTwoByTwo) {
  const Json j = json_of(nc2_run({"region", fixture("relay.txt")}));
  EXPECT_EQ(j["region"]["hull"], Json::parse(R"([["0","0"],["2","0"],["2","2"],["0","2"]])"));
  EXPECT_EQ(j["region"]["vertices"][2]["plan"]["construction"], "region1");
  EXPECT_EQ(j["region"]["vertices"][2]["plan"]["t1"], "own-stream-only");
}

TEST(Cli, CutsOnlyRegion) {
  const Outcome o = nc2_run({"region", "--cuts-only", "3,3,1,3,4,3,3,3,5"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json j = json_of(o);
  EXPECT_TRUE(j["region"]["rank_terms"]["achieved"].is_null());
  EXPECT_TRUE(j["region"]["regions"].contains("region2"));
}

TEST(Cli, CodeSingleEdge) {
  const Json j = json_of(nc2_run({"code", fixture("single_edge.txt")}));
  ASSERT_EQ(j["code"]["edges"].size(), 1u);
  EXPECT_EQ(j["code"]["local"]["0"]["coefficients"].size(), 1u);
  EXPECT_EQ(j["code"]["q"], 257);
}

TEST(Cli, VerifyButterflyPasses) {
  const Outcome o = nc2_run({"verify", fixture("butterfly.txt"), "--timeshare", "2"});
  EXPECT_EQ(o.code, 0) << o.err;
  const Json j = json_of(o);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["reports"].size(), 8u);
  for (const auto& r : j["reports"]) {
    EXPECT_EQ(r["result"], "PASS");
    EXPECT_FALSE(r.contains("elapsed_ms"));
  }
}

TEST(Cli, VerifyExplicitPointAndTiming) {
  const Json j = json_of(nc2_run({"verify", fixture("relay.txt"), "--point", "1/2,3/2", "--timing", "--trials", "5"}));
  const Json& last = j["reports"].back();
  EXPECT_EQ(last["point"], Json::parse(R"(["1/2","3/2"])"));
  EXPECT_EQ(last["method"], "timeshare");
  EXPECT_TRUE(last.contains("elapsed_ms"));
}

TEST(Cli, VerifyUnreachablePointIsInputError) {
  EXPECT_EQ(nc2_run({"verify", fixture("butterfly.txt"), "--point", "2,2"}).code, 2);
  EXPECT_EQ(nc2_run({"verify", fixture("butterfly.txt"), "--timeshare", "9"}).code, 2);
}

TEST(Cli, CompareEf09) {
  const Json j = json_of(nc2_run({"compare", "--cuts-only", "4,1,0,0,4,1,4,1,5"}));
  bool seen = false;
  for (const auto& p : j["points"])
    if (p["point"] == Json::parse(R"(["2","1"])")) {
      seen = true;
      EXPECT_TRUE(p["in_ef09"].get<bool>());
      EXPECT_TRUE(p["in_ours"].get<bool>());
    }
  EXPECT_TRUE(seen);
  EXPECT_EQ(j["comparison"]["only_ours"], Json::parse(R"([["4","1"]])"));
}

TEST(Cli, ButterflyCornerOutsideEf09) {
  const Json j = json_of(nc2_run({"compare", fixture("butterfly.txt")}));
  for (const auto& p : j["points"])
    if (p["point"] == Json::parse(R"(["1","1"])")) {
      EXPECT_FALSE(p["in_ef09"].get<bool>());
    }
}

TEST(Cli, OutputsAreByteIdentical) {
  for (const char* cmd : {"cuts", "region", "code", "verify", "compare"}) {
    const Outcome a = nc2_run({cmd, fixture("relay.txt"), "--seed", "7"});
    const Outcome b = nc2_run({cmd, fixture("relay.txt"), "--seed", "7"});
    EXPECT_EQ(a.out, b.out) << cmd;
    EXPECT_EQ(a.code, 0) << cmd << ": " << a.err;
  }
}

TEST(Cli, MetadataTracksSeedAndField) {
  const Json j = json_of(nc2_run({"region", fixture("butterfly.txt"), "--seed", "3", "--q", "5"}));
  EXPECT_EQ(j["meta"]["seed"], 3);
  EXPECT_EQ(j["meta"]["q"], 5);
  EXPECT_EQ(j["meta"]["input_hash"].get<std::string>().rfind("fnv1a64:", 0), 0u);
}

TEST(Cli, WritesJsonAndSvgFiles) {
  const auto json = temp_file("nc2_region.json"), svg = temp_file("nc2_region.svg");
  const Outcome o = nc2_run({"region", fixture("butterfly.txt"), "--json", json.string(), "--svg", svg.string()});
  ASSERT_EQ(o.code, 0);
  std::ifstream js(json), sv(svg);
  std::stringstream a, b;
  a << js.rdbuf();
  b << sv.rdbuf();
  EXPECT_EQ(a.str(), o.out);
  EXPECT_EQ(b.str().rfind("<svg", 0), 0u);
  EXPECT_NE(b.str().find("(1, 1)"), std::string::npos);
  EXPECT_NE(b.str().find("C_t1"), std::string::npos);
}
