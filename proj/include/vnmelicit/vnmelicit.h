// Copyright 2026 The vnmelicit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef VNMELICIT_VNMELICIT_H_
#define VNMELICIT_VNMELICIT_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define VNM_API __declspec(dllexport)
#else
#define VNM_API __attribute__((visibility("default")))
#endif

typedef enum vnm_status {
  VNM_OK = 0,
  VNM_ERR_DOMAIN = 1,   /* invalid input or arguments */
  VNM_ERR_STATE = 2,    /* operation not valid in the current state */
  VNM_ERR_SOLVER = 3,   /* numerical failure */
  VNM_ERR_NOT_FOUND = 4,
  VNM_ERR_INTERNAL = 5
} vnm_status;

VNM_API const char* vnm_version(void);
VNM_API const char* vnm_status_string(vnm_status status);

/* Message of the last failing call on this thread ("" if none). */
VNM_API const char* vnm_last_error(void);

/* Frees strings returned through `char** out`. */
VNM_API void vnm_string_free(char* s);

/* JSON operations. On VNM_OK `*out` holds a JSON document owned by the
 * caller; on failure `*out` is NULL and vnm_last_error() describes why. */
VNM_API vnm_status vnm_simulate(const char* request_json, char** out);
VNM_API vnm_status vnm_elicit(const char* request_json, char** out);
VNM_API vnm_status vnm_bounds(const char* request_json, char** out);
VNM_API vnm_status vnm_design(const char* request_json, char** out);
VNM_API vnm_status vnm_portfolio(const char* request_json, char** out);
VNM_API vnm_status vnm_plot(const char* request_json, char** out);
VNM_API vnm_status vnm_replay(const char* events_jsonl, char** out);

/* Progress callback for vnm_bench; may be called from worker threads. */
typedef void (*vnm_progress_fn)(const char* message, void* user);
VNM_API vnm_status vnm_bench(const char* request_json, vnm_progress_fn progress,
                             void* user, char** out);

/* Fitted model handle. */
typedef struct vnm_solution vnm_solution;

VNM_API vnm_status vnm_solution_from_json(const char* solution_json,
                                          vnm_solution** out);
VNM_API void vnm_solution_destroy(vnm_solution* s);
/* Status name: "Unique", "NonUniqueRankDeficient", ... */
VNM_API const char* vnm_solution_status(const vnm_solution* s);
VNM_API double vnm_solution_sigma_hat(const vnm_solution* s);
VNM_API int vnm_solution_grid_size(const vnm_solution* s);
/* Writes min(capacity, grid size) values; returns the grid size. */
VNM_API int vnm_solution_grid(const vnm_solution* s, double* points, int capacity);
/* Evaluates the normalized utility at y. VNM_ERR_STATE without a utility. */
VNM_API vnm_status vnm_solution_eval(const vnm_solution* s, double y, double* value);

/* Session service handle. `data_dir` may be NULL or "" for in-memory use. */
typedef struct vnm_service vnm_service;

VNM_API vnm_status vnm_service_create(const char* data_dir, vnm_service** out);
VNM_API void vnm_service_destroy(vnm_service* service);
/* Routes one HTTP request. Thread-safe. */
VNM_API vnm_status vnm_service_handle(vnm_service* service, const char* method,
                                      const char* path, const char* body,
                                      int* http_status, char** out);

#ifdef __cplusplus
}
#endif

#endif  /* VNMELICIT_VNMELICIT_H_ */
