#ifndef NILCUT_NILCUT_H
#define NILCUT_NILCUT_H

/* C interface to libnilcut. Functions return a nilcut_status; on anything
 * other than NILCUT_OK the message is available from nilcut_last_error() on
 * the calling thread until the next call. Strings returned through out
 * parameters are owned by the caller and released with nilcut_string_free(). */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define NILCUT_API __declspec(dllexport)
#else
#define NILCUT_API __attribute__((visibility("default")))
#endif

typedef enum nilcut_status {
  NILCUT_OK = 0,
  NILCUT_ERR_INVALID_ARGUMENT = 1,
  NILCUT_ERR_PARSE = 2,
  NILCUT_ERR_INCONSISTENT = 3,
  NILCUT_ERR_PRECONDITION = 4,
  NILCUT_ERR_NOT_ADAPTABLE = 5,
  NILCUT_ERR_VERIFICATION = 6,
  NILCUT_ERR_INTERNAL = 7,
  NILCUT_ERR_OVERFLOW = 8
} nilcut_status;

typedef struct nilcut_group nilcut_group;

NILCUT_API const char* nilcut_version(void);
NILCUT_API const char* nilcut_last_error(void);
NILCUT_API const char* nilcut_status_name(int status);
NILCUT_API void nilcut_string_free(char* s);

/* Presentation from the JSON format, or from a built-in name such as "H3",
 * "H3mod3" or "ZxD4". */
NILCUT_API int nilcut_group_from_json(const char* json, nilcut_group** out);
NILCUT_API int nilcut_group_from_name(const char* name, nilcut_group** out);
NILCUT_API void nilcut_group_free(nilcut_group* g);
NILCUT_API int nilcut_group_to_json(const nilcut_group* g, char** out);

/* Number of pc generators. */
NILCUT_API int nilcut_group_rank(const nilcut_group* g, size_t* out);
/* Decimal order, or "infinite". */
NILCUT_API int nilcut_group_order(const nilcut_group* g, char** out);

/* Normal-form exponent vectors of length nilcut_group_rank. Returns
 * NILCUT_ERR_OVERFLOW when a result does not fit in 64 bits. */
NILCUT_API int nilcut_group_multiply(const nilcut_group* g, const long long* a, const long long* b, long long* out);
NILCUT_API int nilcut_group_inverse(const nilcut_group* g, const long long* a, long long* out);

/* Runs a job (see the README for the schema). `task` overrides the job's
 * "task" field when non-NULL. A bare presentation is accepted as
 * {"group": presentation}. The report is always produced for a
 * well-formed JSON object; *passed is 1 when its status is "pass". */
NILCUT_API int nilcut_run_job(const char* job_json, const char* task, char** report, int* passed);

#ifdef __cplusplus
}
#endif

#endif
