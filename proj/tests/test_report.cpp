#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "benchmarks.hpp"
#include "msdelay/report.hpp"

using namespace msdelay;

namespace {

const std::filesystem::path kData = MSDELAY_DATA_DIR;

RunReport sample_report() {
  RunReport r = make_report(SolverOptions{}, "ex1");
  r.metadata["note"] = "a b,c";
  r.records.push_back({1, {1}, 57, true, 3.0401234567890123e-06, 41, 16, 0.0123});
  r.records.push_back({2, {2, 1}, 58, false, -2.1e-9, 63, 30, 1.0 / 3.0});
  r.records.push_back({1, {5, 4, 3, 2, 1}, 1, true, 0.1, 7, 183, std::nextafter(1.0, 2.0)});
  return r;
}

}  // namespace

TEST(SystemFile, FixturesMatchBenchmarks) {
  const struct {
    const char* file;
    SystemModel expected;
    std::pair<int, int> scan;
  } cases[] = {{"ex1.json", bench::ex1(7), {1, 70}},
               {"ex2.json", bench::ex2(7), {1, 180}},
               {"ex3.json", bench::ex3(7), {1, 70}}};
  for (const auto& c : cases) {
    const SystemFile f = load_system(kData / c.file);
    const SystemModel m = f.model(7);
    EXPECT_EQ(m.A, c.expected.A) << c.file;
    EXPECT_EQ(m.Ad, c.expected.Ad) << c.file;
    EXPECT_EQ(m.tau, 7);
    ASSERT_TRUE(f.scan);
    EXPECT_EQ(*f.scan, c.scan);
  }
}

TEST(SystemFile, RoundTripThroughJson) {
  SystemFile f = load_system(kData / "ex3.json");
  f.tau = 12;
  const SystemFile back = parse_system(to_json(f).dump());
  EXPECT_EQ(back.name, f.name);
  EXPECT_EQ(back.nx, f.nx);
  EXPECT_EQ(back.A, f.A);
  EXPECT_EQ(back.Ad, f.Ad);
  EXPECT_EQ(back.tau, f.tau);
  EXPECT_EQ(back.scan, f.scan);
}

TEST(SystemFile, RejectsMalformedInput) {
  const char* bad[] = {
      "not json",
      "[1, 2]",
      R"({"n_x": 1, "A": [1]})",
      R"({"n_x": 0, "A": [], "A_d": []})",
      R"({"n_x": 2, "A": [1, 2, 3], "A_d": [1, 2, 3, 4]})",
      R"({"n_x": 1, "A": ["x"], "A_d": [1]})",
      R"({"n_x": 1.5, "A": [1], "A_d": [1]})",
      R"({"n_x": 1, "A": [1], "A_d": [1], "tau": 0})",
      R"({"n_x": 1, "A": [1], "A_d": [1], "scan": [5, 2]})",
      R"({"n_x": 1, "A": [1], "A_d": [1], "scan": [1]})",
  };
  for (const char* text : bad) EXPECT_THROW(parse_system(text), SystemFileError) << text;
  EXPECT_NO_THROW(parse_system(R"({"n_x": 1, "A": [0.5], "A_d": [0.1]})"));
  EXPECT_THROW(load_system(kData / "does_not_exist.json"), SystemFileError);
}

TEST(SystemFile, ValidateCatchesNonFinite) {
  SystemFile f = parse_system(R"({"n_x": 1, "A": [0.5], "A_d": [0.1]})");
  f.A[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(f.validate(), SystemFileError);
}

TEST(Report, MetadataHasVersionAndOptions) {
  const RunReport r = make_report(SolverOptions{}, "ex2");
  EXPECT_EQ(r.metadata.at("version"), kVersion);
  EXPECT_EQ(r.metadata.at("system"), "ex2");
  EXPECT_TRUE(r.metadata.count("feas_tol"));
  EXPECT_TRUE(r.metadata.count("max_iterations"));
}

TEST(Report, CsvRoundTripIsExact) {
  const RunReport r = sample_report();
  const std::string csv = to_csv(r);
  EXPECT_NE(csv.find("m,nus,tau,feasible,margin,iterations,nodv,wall_time"), std::string::npos);
  EXPECT_EQ(parse_csv(csv), r);
  EXPECT_EQ(to_csv(parse_csv(csv)), csv);
}

TEST(Report, MarkdownRoundTripIsExact) {
  const RunReport r = sample_report();
  const std::string md = to_markdown(r);
  EXPECT_EQ(parse_markdown(md), r);
}

TEST(Report, RejectsCorruptCsv) {
  std::string csv = to_csv(sample_report());
  EXPECT_THROW(parse_csv(csv + "1,1,5,2,0.1,1,1,0.1\n"), std::invalid_argument);
  EXPECT_THROW(parse_csv(csv + "1,1,5\n"), std::invalid_argument);
  EXPECT_THROW(parse_csv("a,b\n"), std::invalid_argument);
}

TEST(Report, JsonCarriesRecords) {
  const nlohmann::json j = to_json(sample_report());
  ASSERT_EQ(j.at("records").size(), 3u);
  EXPECT_EQ(j.at("records")[1].at("nus"), nlohmann::json::array({2, 1}));
  EXPECT_EQ(j.at("records")[0].at("margin").get<double>(), 3.0401234567890123e-06);
  EXPECT_EQ(j.at("metadata").at("version"), kVersion);
}

TEST(Report, RecordFromDelayPoint) {
  DelayPoint p;
  p.tau = 57;
  p.result.feasible = true;
  p.result.margin = 1e-5;
  p.result.iterations = 12;
  p.seconds = 0.5;
  const RunRecord r = make_record(LmiSpec::hierarchy(2, 2), 2, p);
  EXPECT_EQ(r.m, 2);
  EXPECT_EQ(r.nus, (std::vector<int>{2, 1}));
  EXPECT_EQ(r.nodv, 30);
  EXPECT_EQ(r.tau, 57);
  EXPECT_TRUE(r.feasible);
}

TEST(Report, HierarchyOutputs) {
  HierarchyTable t;
  t.lmax = 2;
  t.numax = 1;
  DelayRange a, b, c;
  a.tau_max_feasible = 42;
  a.tau_min_feasible = 1;
  b.tau_max_feasible = 57;
  b.tau_min_feasible = 1;
  t.cells[{1, 0}] = a;
  t.cells[{1, 1}] = b;
  t.cells[{2, 1}] = c;
  const std::string md = hierarchy_markdown(t);
  EXPECT_NE(md.find("42"), std::string::npos);
  EXPECT_NE(md.find("57"), std::string::npos);
  EXPECT_NE(md.find("none"), std::string::npos);
  const std::string csv = hierarchy_csv(t, 2);
  EXPECT_NE(csv.find("l,nu1,tau_max,tau_min,nodv"), std::string::npos);
  EXPECT_NE(csv.find("1,0,42,1,9"), std::string::npos);
  EXPECT_NE(csv.find("1,1,57,1,16"), std::string::npos);
  EXPECT_NE(csv.find("2,1,none,none,19"), std::string::npos);
}
