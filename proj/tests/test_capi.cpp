#include <gtest/gtest.h>

#include <json.hpp>

#include <random>
#include <string>

#include "nilcut/nilcut.h"

namespace {

struct Group {
  nilcut_group* g = nullptr;
  ~Group() { nilcut_group_free(g); }
};

std::string take(char* s) {
  std::string out(s);
  nilcut_string_free(s);
  return out;
}

// x^a y^b z^c in the Heisenberg group is the matrix with entries (a, b, c + ab).
struct Tri {
  long long a, b, c;
  Tri operator*(const Tri& o) const { return {a + o.a, b + o.b, c + o.c + a * o.b}; }
};
Tri matrix(const long long* e) { return {e[0], e[1], e[2] + e[0] * e[1]}; }

}  // namespace

TEST(CApi, MultiplyMatchesMatrices) {
  Group h;
  ASSERT_EQ(nilcut_group_from_name("H3", &h.g), NILCUT_OK);
  size_t n = 0;
  ASSERT_EQ(nilcut_group_rank(h.g, &n), NILCUT_OK);
  ASSERT_EQ(n, 3u);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long long> d(-20, 20);
  for (int i = 0; i < 200; ++i) {
    long long a[3] = {d(rng), d(rng), d(rng)}, b[3] = {d(rng), d(rng), d(rng)}, out[3], inv[3];
    ASSERT_EQ(nilcut_group_multiply(h.g, a, b, out), NILCUT_OK);
    Tri want = matrix(a) * matrix(b), got = matrix(out);
    EXPECT_EQ(got.a, want.a);
    EXPECT_EQ(got.b, want.b);
    EXPECT_EQ(got.c, want.c);
    ASSERT_EQ(nilcut_group_inverse(h.g, a, inv), NILCUT_OK);
    Tri e = matrix(a) * matrix(inv);
    EXPECT_EQ(e.a, 0);
    EXPECT_EQ(e.b, 0);
    EXPECT_EQ(e.c, 0);
  }
  char* order = nullptr;
  ASSERT_EQ(nilcut_group_order(h.g, &order), NILCUT_OK);
  EXPECT_EQ(take(order), "infinite");
}

TEST(CApi, JsonRoundTrip) {
  Group a, b;
  ASSERT_EQ(nilcut_group_from_name("H3mod3", &a.g), NILCUT_OK);
  char* text = nullptr;
  ASSERT_EQ(nilcut_group_to_json(a.g, &text), NILCUT_OK);
  std::string json = take(text);
  ASSERT_EQ(nilcut_group_from_json(json.c_str(), &b.g), NILCUT_OK);
  char* order = nullptr;
  ASSERT_EQ(nilcut_group_order(b.g, &order), NILCUT_OK);
  EXPECT_EQ(take(order), "27");
  long long x[3] = {0, 1, 0}, y[3] = {1, 0, 0}, out[3];
  ASSERT_EQ(nilcut_group_multiply(b.g, x, y, out), NILCUT_OK);
  EXPECT_EQ(out[0], 1);
  EXPECT_EQ(out[1], 1);
  EXPECT_EQ(out[2], 2);
}

TEST(CApi, Errors) {
  nilcut_group* g = nullptr;
  EXPECT_EQ(nilcut_group_from_json("{not json", &g), NILCUT_ERR_PARSE);
  EXPECT_STRNE(nilcut_last_error(), "");
  EXPECT_EQ(nilcut_group_from_name("NoSuchGroup", &g), NILCUT_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(nilcut_last_error()).find("NoSuchGroup"), std::string::npos);
  EXPECT_EQ(nilcut_group_from_name(nullptr, &g), NILCUT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(g, nullptr);
  EXPECT_STREQ(nilcut_status_name(NILCUT_ERR_INCONSISTENT), "inconsistent-presentation");
  EXPECT_STREQ(nilcut_status_name(NILCUT_OK), "ok");
  EXPECT_STREQ(nilcut_status_name(99), "unknown");

  Group h;
  ASSERT_EQ(nilcut_group_from_name("H3", &h.g), NILCUT_OK);
  long long a[3] = {1LL << 40, 0, 0}, b[3] = {0, 1LL << 40, 0}, out[3];
  EXPECT_EQ(nilcut_group_multiply(h.g, a, b, out), NILCUT_OK);
  long long c[3] = {0, 1LL << 40, 0}, d[3] = {1LL << 40, 0, 0};
  EXPECT_EQ(nilcut_group_multiply(h.g, c, d, out), NILCUT_ERR_OVERFLOW);
}

TEST(CApi, RunJob) {
  char* report = nullptr;
  int passed = -1;
  ASSERT_EQ(nilcut_run_job(R"({"group": "H3"})", "analyze", &report, &passed), NILCUT_OK);
  auto r = nlohmann::json::parse(take(report));
  EXPECT_EQ(passed, 1);
  EXPECT_EQ(r["lattice"]["center"], "⟨z⟩");

  // A bare presentation is accepted as the group.
  ASSERT_EQ(nilcut_run_job(R"({"relative_orders": [3, 3], "conjugations": {"0,1": [0, 2]}})", "analyze", &report,
                           &passed),
            NILCUT_OK);
  r = nlohmann::json::parse(take(report));
  EXPECT_EQ(passed, 0);
  EXPECT_EQ(r["error"]["code"], "inconsistent-presentation");

  EXPECT_EQ(nilcut_run_job("[1, 2]", nullptr, &report, &passed), NILCUT_ERR_PARSE);
  EXPECT_EQ(nilcut_run_job("{", nullptr, &report, &passed), NILCUT_ERR_PARSE);
}

TEST(CApi, RunJobDeterministic) {
  const char* job = R"({"task": "cutdown", "group": "H3", "character": {"free_angles": ["1/5"]}, "options": {"seed": 4}})";
  char *a = nullptr, *b = nullptr;
  int pa = 0, pb = 0;
  ASSERT_EQ(nilcut_run_job(job, nullptr, &a, &pa), NILCUT_OK);
  ASSERT_EQ(nilcut_run_job(job, nullptr, &b, &pb), NILCUT_OK);
  EXPECT_EQ(take(a), take(b));
  EXPECT_EQ(pa, 1);
  EXPECT_EQ(pb, 1);
}
