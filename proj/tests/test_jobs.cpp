#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>

#include "nilcut/corpus.hpp"
#include "nilcut/error.hpp"
#include "nilcut/jobs.hpp"
#include "oracles.hpp"

using namespace nilcut;
using jobs::Json;

namespace {

Json job(const std::string& task, const std::string& group, Json extra = Json::object()) {
  Json j{{"task", task}, {"group", group}};
  for (auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

const Json* find_check(const Json& report, const std::string& name) {
  for (const auto& c : report["checks"]) {
    if (c["name"] == name) return &c;
  }
  return nullptr;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Every element of ball(r) of H3 commuting with x and y, by matrices.
std::vector<oracle::Unitriangular> heisenberg_centre_oracle(int r) {
  std::vector<oracle::Unitriangular> out;
  const oracle::Unitriangular x{1, 0, 0}, y{0, 1, 0};
  for (const auto& g : corpus::heisenberg()->ball(r)) {
    auto m = oracle::to_matrix(g);
    if (m * x == x * m && m * y == y * m) out.push_back(m);
  }
  return out;
}

}  // namespace

TEST(Presentation, JsonRoundTrip) {
  for (const auto& name : {"H3", "ZxD4", "Q8", "H3mod5", "trivial", "ZxZ6"}) {
    auto g = corpus::by_name(name);
    auto j = json_io::presentation_to_json(*g);
    auto h = json_io::presentation_from_json(Json::parse(j.dump()));
    EXPECT_EQ(json_io::presentation_to_json(*h), j) << name;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
      auto a = oracle::random_word(*g, rng, 6), b = oracle::random_word(*g, rng, 6);
      EXPECT_EQ((a * b).exponents(), (h->element(a.exponents()) * h->element(b.exponents())).exponents()) << name;
    }
  }
}

TEST(Presentation, ContractShape) {
  auto g = json_io::presentation_from_json(Json::parse(R"({"relative_orders": [null, null, null],
      "powers": {}, "conjugations": {"0,1": [0, 1, -1]}})"));
  auto x = g->generator(0), y = g->generator(1);
  EXPECT_EQ((y * x).exponents(), (Exponents{1, 1, -1}));
  // Large exponents as strings.
  auto big = json_io::element_from_json(*g, Json::parse(R"(["100000000000000000000", 0, 1])"));
  EXPECT_EQ(big[0].to_string(), "100000000000000000000");
  EXPECT_EQ(json_io::exponents_to_json(big.exponents())[0], "100000000000000000000");
}

TEST(Presentation, SchemaErrors) {
  auto code = [](const char* text) {
    try {
      json_io::presentation_from_json(Json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  EXPECT_EQ(code(R"({"powers": {}})"), ErrorCode::kParse);
  EXPECT_EQ(code(R"({"relative_orders": [2], "powers": {"1": [0]}})"), ErrorCode::kParse);
  EXPECT_EQ(code(R"({"relative_orders": [2, 2], "conjugations": {"01": [0, 1]}})"), ErrorCode::kParse);
  EXPECT_EQ(code(R"({"relative_orders": [2], "extra": 1})"), ErrorCode::kParse);
  EXPECT_EQ(code(R"({"relative_orders": [2, null], "powers": {"0": [0]}})"), ErrorCode::kParse);
}

TEST(Analyze, Heisenberg) {
  auto r = jobs::run(job("analyze", "H3"));
  ASSERT_EQ(r["status"], "pass") << r.dump(2);
  EXPECT_EQ(r["lattice"]["center"], "⟨z⟩");
  EXPECT_EQ(r["lattice"]["fc"], "⟨z⟩");
  EXPECT_EQ(r["lattice"]["torsion"], "trivial");
  EXPECT_EQ(r["lattice"]["tower"], 2);
  EXPECT_EQ(r["center"]["certificate"]["radius"], 6);
  // The reported centre is exactly the ball elements commuting with x and y.
  auto g = corpus::heisenberg();
  auto want = heisenberg_centre_oracle(4);
  auto gens = r["center"]["generators"];
  ASSERT_EQ(gens.size(), 1u);
  auto zgen = json_io::element_from_json(*g, gens[0]);
  std::size_t members = 0;
  for (const auto& h : g->ball(4)) {
    auto m = oracle::to_matrix(h);
    bool in_oracle = std::find(want.begin(), want.end(), m) != want.end();
    bool in_report = m.a == 0 && m.b == 0 && m.c % oracle::to_matrix(zgen).c == 0;
    EXPECT_EQ(in_oracle, in_report) << h.to_string();
    members += in_report;
  }
  EXPECT_GT(members, 1u);
}

TEST(Analyze, ZTimesD4) {
  auto r = jobs::run(job("analyze", "ZxD4"));
  ASSERT_EQ(r["status"], "pass");
  EXPECT_EQ(r["lattice"]["fc"], "whole group");
  EXPECT_EQ(r["lattice"]["index_fc_over_center"], 4);
  EXPECT_EQ(r["lattice"]["tower"], 0);
}

TEST(Analyze, TrivialGroup) {
  auto r = jobs::run(job("analyze", "trivial"));
  ASSERT_EQ(r["status"], "pass");
  for (const char* k : {"center", "fc", "torsion"}) EXPECT_EQ(r["lattice"][k], "trivial");
}

TEST(Analyze, InconsistentPresentationIsStructuredError) {
  Json j{{"task", "analyze"},
         {"group", Json::parse(R"({"relative_orders": [3, 3], "conjugations": {"0,1": [0, 2]}})")}};
  auto r = jobs::run(j);
  EXPECT_EQ(r["status"], "error");
  EXPECT_EQ(r["error"]["code"], "inconsistent-presentation");
  EXPECT_EQ(r["error"]["stage"], "presentation");
  EXPECT_FALSE(jobs::passed(r));
}

TEST(Analyze, UnknownTaskAndGroup) {
  EXPECT_EQ(jobs::run(job("frobnicate", "H3"))["error"]["code"], "parse");
  EXPECT_EQ(jobs::run(job("analyze", "nosuch"))["error"]["code"], "invalid-argument");
  EXPECT_EQ(jobs::run(Json{{"task", "analyze"}})["error"]["code"], "parse");
}

TEST(Cocycle, HeisenbergPasses) {
  auto r = jobs::run(job("cocycle", "H3", Json{{"character", Json{{"free_angles", Json::array({"2/7"})}}}}));
  ASSERT_EQ(r["status"], "pass") << r.dump(2);
  EXPECT_EQ(find_check(r, "cocycle identity")->at("checked"), 200);
  EXPECT_TRUE(r["homotopy"]["applicable"]);
  EXPECT_EQ(r["sigma"]["provenance"]["character"]["free_angles"][0], "2/7");
}

TEST(Cocycle, InjectedPerturbationFailsWithWitness) {
  auto r = jobs::run(job("cocycle", "H3",
                         Json{{"character", Json{{"free_angles", Json::array({"1/3"})}}},
                              {"inject", Json{{"x", Json::array({1, 0})}, {"y", Json::array({0, 1})}, {"delta", "1/7"}}}}));
  EXPECT_EQ(r["status"], "fail");
  const Json* c = find_check(r, "cocycle identity");
  ASSERT_NE(c, nullptr);
  ASSERT_GT(c->at("failure_count").get<int>(), 0);
  EXPECT_NE(c->at("failures")[0].get<std::string>().find("([1,0], [0,1]"), std::string::npos);
}

TEST(Cocycle, TorsionDomainHasNoHomotopy) {
  auto r = jobs::run(job("cocycle", "H3mod3", Json{{"character", Json{{"torsion", Json::array({1})}}}}));
  ASSERT_EQ(r["status"], "pass");
  EXPECT_FALSE(r["homotopy"]["applicable"]);
}

TEST(Cocycle, FloatingAnglesNeedFloatMode) {
  Json c{{"character", Json{{"free_angles", Json::array({"0.4142135623730951"})}}}};
  EXPECT_EQ(jobs::run(job("cocycle", "H3", c))["error"]["code"], "precondition");
  c["options"] = Json{{"mode", "float"}};
  auto r = jobs::run(job("cocycle", "H3", c));
  EXPECT_EQ(r["status"], "pass");
  EXPECT_FALSE(find_check(r, "cocycle identity")->at("exact"));
}

TEST(Represent, HeisenbergWithClockShift) {
  auto r = jobs::run(job("represent", "H3",
                         Json{{"character", Json{{"free_angles", Json::array({"1/5"})}}},
                              {"tau", Json{{"clock_shift", Json{{"q", 5}, {"k", 1}}}}}}));
  ASSERT_EQ(r["status"], "pass") << r.dump(2);
  EXPECT_EQ(find_check(r, "intertwiner")->at("checked"), 500);
  EXPECT_EQ(r["tau"]["dimension"], 5);
  EXPECT_EQ(r["tau"]["generators"].size(), 3u);
}

TEST(Represent, FiniteGroupIncludesGns) {
  auto r = jobs::run(job("represent", "H3mod3", Json{{"character", Json{{"torsion", Json::array({1})}}}}));
  ASSERT_EQ(r["status"], "pass");
  EXPECT_EQ(r["gns"]["rank"], 9);
  EXPECT_EQ(r["gns"]["rep"]["dimension"], 9);
}

TEST(Represent, NonCentralDomainRejected) {
  auto r = jobs::run(job("represent", "H3", Json{{"character", Json{{"subgroup", Json::array({Json::array({1, 0, 0})})},
                                                                     {"free_angles", Json::array({"1/2"})}}}}));
  EXPECT_EQ(r["error"]["code"], "precondition");
  EXPECT_EQ(r["error"]["stage"], "character");
}

TEST(Cutdown, FaithfulIrrepOnHeisenbergMod3) {
  auto r = jobs::run(job("cutdown", "H3mod3", Json{{"character", Json{{"torsion", Json::array({1})}}}}));
  ASSERT_EQ(r["status"], "pass") << r.dump(2);
  const Json& c = r["certificates"][0];
  EXPECT_EQ(c["cutdown"]["trace_of_p"], "9/27");
  EXPECT_EQ(c["cutdown"]["block_size"], 3);
  int kept = 0;
  for (const auto& b : c["cutdown"]["blocks"]) {
    if (b["kept"]) {
      ++kept;
      EXPECT_EQ(b["dim"], 3);
    }
  }
  EXPECT_EQ(kept, 1);
  EXPECT_EQ(c["twisted_blocks"], Json::array({3}));
}

TEST(Cutdown, TrivialCharacterGivesUnit) {
  auto r = jobs::run(job("cutdown", "H3mod3", Json{{"character", Json{{"subgroup", "trivial"}}}}));
  ASSERT_EQ(r["status"], "pass");
  const Json& c = r["certificates"][0]["cutdown"];
  EXPECT_EQ(c["trace_of_p"], "27/27");
  ASSERT_EQ(c["p"].size(), 1u);
  EXPECT_EQ(c["p"][0]["coeff"], "1");
}

TEST(Cutdown, InfiniteHeisenbergHasTwoCertificates) {
  auto r = jobs::run(job("cutdown", "H3", Json{{"character", Json{{"free_angles", Json::array({"1/5"})}}}}));
  ASSERT_EQ(r["status"], "pass") << r.dump(2);
  ASSERT_EQ(r["certificates"].size(), 2u);
  EXPECT_EQ(r["certificates"][0]["name"], "windowed-evidence");
  EXPECT_EQ(r["certificates"][1]["name"], "finite-quotient-cutdown");
  EXPECT_EQ(r["certificates"][1]["cutdown"]["trace_of_p"], "25/125");
  EXPECT_EQ(r["certificates"][1]["cutdown"]["block_size"], 5);
  EXPECT_TRUE(r["certificates"][0]["homotopy"]["applicable"]);
  bool saw_intertwiner = false;
  for (const auto& c : r["certificates"][0]["checks"]) saw_intertwiner |= c["name"] == "intertwiner";
  EXPECT_TRUE(saw_intertwiner);
}

TEST(VerifyAll, EmptyListPassesWithZeroChecks) {
  auto r = jobs::run(Json{{"task", "verify-all"}, {"jobs", Json::array()}});
  EXPECT_EQ(r["status"], "pass");
  EXPECT_EQ(r["summary"]["checked"], 0);
  EXPECT_EQ(r["summary"]["jobs"], 0);
}

TEST(VerifyAll, InjectedCocycleFails) {
  Json list = jobs::corpus_jobs();
  list.push_back(job("cocycle", "H3",
                     Json{{"character", Json{{"free_angles", Json::array({"1/2"})}}},
                          {"inject", Json{{"x", Json::array({0, 1})}, {"y", Json::array({1, 1})}, {"delta", "1/3"}}}}));
  auto r = jobs::run(Json{{"task", "verify-all"}, {"jobs", list}});
  EXPECT_EQ(r["status"], "fail");
  EXPECT_EQ(r["summary"]["failed_jobs"], 1);
  const Json& bad = r["jobs"].back();
  EXPECT_NE(jobs::dump(bad).find("identity fails at ([0,1], [1,1]"), std::string::npos);
}

TEST(VerifyAll, DeterministicAndHonest) {
  Json j{{"task", "verify-all"}, {"options", Json{{"seed", 11}}}};
  const std::string a = jobs::dump(jobs::run(j)), b = jobs::dump(jobs::run(j));
  EXPECT_EQ(a, b);
  EXPECT_EQ(lower(a).find("theorem"), std::string::npos);
  auto r = Json::parse(a);
  EXPECT_EQ(r["status"], "pass");
  for (const auto& sub : r["jobs"]) {
    EXPECT_EQ(sub["options"]["seed"], 11);
    EXPECT_TRUE(sub["options"].contains("radius"));
    EXPECT_TRUE(sub["options"].contains("samples"));
    for (const auto& c : sub["checks"]) {
      EXPECT_TRUE(c.contains("checked"));
      EXPECT_TRUE(c.contains("failures"));
    }
  }
  Json k = j;
  k["options"]["seed"] = 12;
  EXPECT_NE(jobs::dump(jobs::run(k)), a);
}
