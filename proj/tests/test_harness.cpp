#include <gtest/gtest.h>

#include <sstream>

#include "conesq/suites.hpp"

using namespace conesq;

namespace {

json base() {
  return json::parse(R"({"E": {"kind": "segment", "a": [0, 0], "b": [1, 0]}, "mu": {"atoms": 64}})");
}

std::string error_of(const json& j) {
  try {
    Scenario::from_json(j);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Harness, SegmentScenarioDerivedQuantities) {
  const Scenario sc = Scenario::from_json(base());
  EXPECT_EQ(sc.mu.size(), 64u);
  EXPECT_DOUBLE_EQ(sc.mu.total_mass(), 1.0);
  EXPECT_DOUBLE_EQ(sc.spacing(), 1.0 / 64.0);
  EXPECT_DOUBLE_EQ(sc.diameter(), 63.0 / 64.0);
  EXPECT_DOUBLE_EQ(sc.s_trunc(), 4.0 / 64.0);
  EXPECT_DOUBLE_EQ(sc.b(), 100.0);
  EXPECT_DOUBLE_EQ(sc.kappa(), 200.0);
  const BallSpec W = whole_ball(sc);
  for (const Point& p : sc.mu.points()) EXPECT_TRUE(W.contains(p));
}

TEST(Harness, MalformedScenariosGiveFieldDiagnostics) {
  json j = base();
  j["colour"] = "red";
  EXPECT_NE(error_of(j).find("colour"), std::string::npos);
  j = base();
  j["params"] = {{"alpha", "half"}};
  EXPECT_NE(error_of(j).find("params.alpha"), std::string::npos);
  j = base();
  j["params"] = {{"alpha", 1.5}};
  EXPECT_NE(error_of(j).find("alpha"), std::string::npos);
  j = base();
  j["params"] = {{"bogus", 1}};
  EXPECT_NE(error_of(j).find("params.bogus"), std::string::npos);
  j = base();
  j.erase("E");
  EXPECT_NE(error_of(j).find("E"), std::string::npos);
  j = base();
  j["kernel"] = {{"kind", "gaussian"}};
  EXPECT_NE(error_of(j).find("kernel.kind"), std::string::npos);
  j = base();
  j["mu"]["weights"] = {1.0, 2.0};
  EXPECT_NE(error_of(j).find("mu.weights"), std::string::npos);
}

TEST(Harness, ShapesParse) {
  for (const char* e : {R"({"kind": "circle", "dim": 2, "center": [0, 0], "radius": 0.5})",
                        R"({"kind": "cantor", "dim": 2, "level": 3})", R"({"kind": "hyperplane", "dim": 2, "half_width": 1})",
                        R"({"kind": "points", "points": [[0, 0], [1, 0], [0, 1]]})"}) {
    json j = base();
    j["E"] = json::parse(e);
    j["mu"] = json::object();
    EXPECT_NO_THROW(Scenario::from_json(j)) << e;
  }
}

TEST(Harness, RecordsSerialiseWithoutTiming) {
  Record r;
  r.check = "x";
  r.property = "p";
  r.measured = {{"v", 1}};
  r.runtime_ms = 5.0;
  r.seed = 3;
  EXPECT_FALSE(r.to_json(false).contains("runtime_ms"));
  EXPECT_TRUE(r.to_json(true).contains("runtime_ms"));
  Reporter rep;
  rep.add(r);
  EXPECT_TRUE(rep.all_pass());
  r.pass = false;
  rep.add(r);
  EXPECT_FALSE(rep.all_pass());
  std::ostringstream os;
  rep.write(os, false);
  std::istringstream is(os.str());
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    EXPECT_NO_THROW(json::parse(line));
    ++n;
  }
  EXPECT_EQ(n, 2);
}

TEST(Harness, ScenarioSuitesAreReproducible) {
  const Scenario sc = segment_scenario(128, 5);
  for (const std::string& name : {"measure", "lattice", "czd", "martingale"}) {
    Reporter a, b;
    ASSERT_TRUE(run_scenario_suite(name, sc, a));
    ASSERT_TRUE(run_scenario_suite(name, sc, b));
    std::ostringstream sa, sb;
    a.write(sa, false);
    b.write(sb, false);
    EXPECT_EQ(sa.str(), sb.str()) << name;
    EXPECT_TRUE(a.all_pass()) << sa.str();
  }
  Reporter r;
  EXPECT_FALSE(run_scenario_suite("no-such-suite", sc, r));
}

TEST(Harness, HypothesesHoldForMuItself) {
  const Scenario sc = segment_scenario(256, 1);
  const BallSpec W = whole_ball(sc);
  const ComplexAtomicMeasure nu = ComplexAtomicMeasure::density(sc.mu, std::vector<cplx>(sc.mu.size(), cplx(1.0, 0.0)));
  const TbHypotheses h = check_tb_hypotheses(sc, W, nu, {}, sc.quadrature(1));
  EXPECT_TRUE(h.support);
  EXPECT_TRUE(h.normalised);
  EXPECT_NEAR(h.C1_measured, 1.0, 1e-12);
  EXPECT_TRUE(h.continuity);
}

TEST(Harness, CriterionTable) {
  EXPECT_EQ(criterion_count(), 9);
  for (int i = 1; i <= criterion_count(); ++i) EXPECT_EQ(criterion_by_key(criterion_key(i)), i);
  EXPECT_EQ(criterion_by_key("nope"), 0);
}
