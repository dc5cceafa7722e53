// nilcut: batch driver over the C interface.
//
//   nilcut analyze --group H3
//   nilcut cutdown --in job.json --seed 7 --out report.json
//   nilcut verify-all --corpus
//
// Exit status 0 when the report passes, 1 otherwise.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "nilcut/nilcut.h"

namespace {

using Json = nlohmann::ordered_json;

struct Flags {
  std::string in, out, group;
  std::optional<int> radius;
  std::optional<long long> samples;
  std::optional<unsigned long long> seed;
  bool exact = false, floating = false, corpus = false;
};

std::string read_all(std::istream& is) {
  return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

int run(const std::string& task, const Flags& f) {
  Json job;
  if (!f.group.empty()) {
    job = Json{{"group", f.group}};
  } else if (f.corpus) {
    job = Json::object();
  } else {
    std::string text;
    if (f.in.empty() || f.in == "-") {
      text = read_all(std::cin);
    } else {
      std::ifstream is(f.in);
      if (!is) {
        std::cerr << "nilcut: cannot open " << f.in << "\n";
        return 1;
      }
      text = read_all(is);
    }
    job = Json::parse(text, nullptr, false);
    if (job.is_discarded() || !job.is_object()) {
      std::cerr << "nilcut: input is not a JSON object\n";
      return 1;
    }
    if (job.contains("relative_orders")) job = Json{{"group", job}};
  }
  Json& opts = job["options"];
  if (!opts.is_object()) opts = Json::object();
  if (f.radius) opts["radius"] = *f.radius;
  if (f.samples) opts["samples"] = *f.samples;
  if (f.seed) opts["seed"] = *f.seed;
  if (f.exact) opts["mode"] = "exact";
  if (f.floating) opts["mode"] = "float";
  if (opts.empty()) job.erase("options");

  char* report = nullptr;
  int passed = 0;
  const int rc = nilcut_run_job(job.dump().c_str(), task.c_str(), &report, &passed);
  if (rc != NILCUT_OK) {
    std::cerr << "nilcut: " << nilcut_status_name(rc) << ": " << nilcut_last_error() << "\n";
    return 1;
  }
  if (f.out.empty() || f.out == "-") {
    std::fputs(report, stdout);
  } else {
    std::ofstream os(f.out, std::ios::binary);
    os << report;
    if (!os) {
      std::cerr << "nilcut: cannot write " << f.out << "\n";
      nilcut_string_free(report);
      return 1;
    }
  }
  nilcut_string_free(report);
  return passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nilpotent group analysis, twisted cocycles and central cutdowns"};
  app.require_subcommand(1);
  Flags f;
  std::string task;
  for (const char* name : {"analyze", "cocycle", "represent", "cutdown", "verify-all"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--in", f.in, "job or presentation JSON (default stdin)");
    sub->add_option("--out", f.out, "report path (default stdout)");
    sub->add_option("--group", f.group, "built-in group name instead of input");
    sub->add_option("--radius", f.radius, "ball radius for windowed checks");
    sub->add_option("--samples", f.samples, "random samples per check");
    sub->add_option("--seed", f.seed, "random seed");
    auto* ex = sub->add_flag("--exact", f.exact, "exact phases only (default)");
    auto* fl = sub->add_flag("--float", f.floating, "allow floating angles");
    ex->excludes(fl);
    if (std::string(name) == "verify-all") sub->add_flag("--corpus", f.corpus, "run the built-in job list");
    sub->callback([&task, name] { task = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return run(task, f);
}
