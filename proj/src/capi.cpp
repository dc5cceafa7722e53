#include "nilcut/nilcut.h"

#include <cstring>
#include <string>

#include "nilcut/corpus.hpp"
#include "nilcut/error.hpp"
#include "nilcut/jobs.hpp"

struct nilcut_group {
  nilcut::PresentationPtr pres;
};

namespace {

thread_local std::string last_error;

int fail(int code, const std::string& msg) {
  last_error = msg;
  return code;
}

template <class F>
int guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const nilcut::Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(NILCUT_ERR_PARSE, e.what());
  } catch (const std::overflow_error& e) {
    return fail(NILCUT_ERR_OVERFLOW, e.what());
  } catch (const std::exception& e) {
    return fail(NILCUT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NILCUT_ERR_INTERNAL, "unknown exception");
  }
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

nilcut::GroupElement element(const nilcut_group* g, const long long* v) {
  nilcut::Exponents e;
  for (std::size_t i = 0; i < g->pres->size(); ++i) e.emplace_back(v[i]);
  return g->pres->collect(e);
}

void write(const nilcut::GroupElement& x, long long* out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i].to_int64();
}

}  // namespace

extern "C" {

const char* nilcut_version(void) { return "0.1.0"; }

const char* nilcut_last_error(void) { return last_error.c_str(); }

const char* nilcut_status_name(int status) {
  switch (status) {
    case NILCUT_OK: return "ok";
    case NILCUT_ERR_OVERFLOW: return "overflow";
    default:
      if (status >= 1 && status <= 7) return nilcut::to_string(static_cast<nilcut::ErrorCode>(status));
      return "unknown";
  }
}

void nilcut_string_free(char* s) { std::free(s); }

int nilcut_group_from_json(const char* json, nilcut_group** out) {
  if (!json || !out) return fail(NILCUT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    auto pres = nilcut::json_io::presentation_from_json(nilcut::json_io::Json::parse(json));
    *out = new nilcut_group{std::move(pres)};
    return NILCUT_OK;
  });
}

int nilcut_group_from_name(const char* name, nilcut_group** out) {
  if (!name || !out) return fail(NILCUT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    *out = new nilcut_group{nilcut::corpus::by_name(name)};
    return NILCUT_OK;
  });
}

void nilcut_group_free(nilcut_group* g) { delete g; }

int nilcut_group_to_json(const nilcut_group* g, char** out) {
  if (!g || !out) return fail(NILCUT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    *out = copy_out(nilcut::json_io::presentation_to_json(*g->pres).dump());
    return NILCUT_OK;
  });
}

int nilcut_group_rank(const nilcut_group* g, size_t* out) {
  if (!g || !out) return fail(NILCUT_ERR_INVALID_ARGUMENT, "null argument");
  *out = g->pres->size();
  return NILCUT_OK;
}

int nilcut_group_order(const nilcut_group* g, char** out) {
  if (!g || !out) return fail(NILCUT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    *out = copy_out(g->pres->is_finite() ? g->pres->finite_order_product().to_string() : "infinite");
    return NILCUT_OK;
  });
}

int nilcut_group_multiply(const nilcut_group* g, const long long* a, const long long* b, long long* out) {
  if (!g || !a || !b || !out) return fail(NILCUT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    write(element(g, a) * element(g, b), out);
    return NILCUT_OK;
  });
}

int nilcut_group_inverse(const nilcut_group* g, const long long* a, long long* out) {
  if (!g || !a || !out) return fail(NILCUT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    write(element(g, a).inverse(), out);
    return NILCUT_OK;
  });
}

int nilcut_run_job(const char* job_json, const char* task, char** report, int* passed) {
  if (!job_json || !report) return fail(NILCUT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    auto job = nilcut::json_io::Json::parse(job_json);
    if (!job.is_object()) return fail(NILCUT_ERR_PARSE, "job must be a JSON object");
    if (job.contains("relative_orders")) job = nilcut::json_io::Json{{"group", job}};
    if (task) job["task"] = task;
    auto r = nilcut::jobs::run(job);
    *report = copy_out(nilcut::jobs::dump(r));
    if (passed) *passed = nilcut::jobs::passed(r) ? 1 : 0;
    return NILCUT_OK;
  });
}

}  // extern "C"
