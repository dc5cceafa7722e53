#pragma once

// Batch jobs over JSON: analyze, cocycle, represent, cutdown, verify-all.
//
// Job:
//   {"task": "cutdown",
//    "group": "H3" | {presentation},
//    "character": {"subgroup": "center" | "trivial" | [[exponents], ...],
//                  "free_angles": ["1/5"], "torsion": [1],
//                  "section": "normal-form" | "matrix-model"},
//    "tau": {"clock_shift": {"q": 5, "k": 1}},
//    "inject": {"x": [...], "y": [...], "delta": "1/7"},
//    "options": {"radius": 3, "samples": 100, "seed": 1, "mode": "exact" | "float"},
//    "jobs": [...]}                                   verify-all only
//
// Reports are deterministic for a fixed job: no timings, no addresses.

#include <string>

#include "nilcut/json_io.hpp"

namespace nilcut::jobs {

using Json = json_io::Json;

/// Runs one job. Module errors become {"status": "error", "error": {...}}
/// with the stage that raised them; only non-object input throws.
Json run(const Json& job);

/// status == "pass".
bool passed(const Json& report);

/// Jobs run by verify-all when no "jobs" list is given.
Json corpus_jobs();

/// 2-space indented dump with a trailing newline.
std::string dump(const Json& report);

}  // namespace nilcut::jobs
