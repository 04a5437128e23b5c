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
#include "vnmelicit/vnmelicit.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "vnm/api/operations.h"
#include "vnm/api/serialize.h"
#include "vnm/core/errors.h"
#include "vnm/mle/mle.h"
#include "vnm/service/service.h"

namespace {

thread_local std::string g_last_error;

char* Dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

vnm_status Fail(vnm_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <typename Fn>
vnm_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const vnm::DomainError& e) {
    return Fail(VNM_ERR_DOMAIN, e.what());
  } catch (const vnm::StateError& e) {
    return Fail(VNM_ERR_STATE, e.what());
  } catch (const vnm::SolverError& e) {
    return Fail(VNM_ERR_SOLVER, e.what());
  } catch (const vnm::Json::exception& e) {
    return Fail(VNM_ERR_DOMAIN, std::string("bad request: ") + e.what());
  } catch (const std::bad_alloc&) {
    return Fail(VNM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(VNM_ERR_INTERNAL, e.what());
  }
}

vnm_status RunOp(const char* request, char** out,
                 const std::function<vnm::Json(const vnm::Json&)>& op) {
  if (!out) return Fail(VNM_ERR_DOMAIN, "out must not be NULL");
  *out = nullptr;
  return Guard([&] {
    if (!request) return Fail(VNM_ERR_DOMAIN, "request must not be NULL");
    vnm::Json result = op(vnm::ParseJson(request));
    *out = Dup(result.dump());
    return *out ? VNM_OK : Fail(VNM_ERR_INTERNAL, "out of memory");
  });
}

}  // namespace

struct vnm_solution {
  explicit vnm_solution(vnm::MleSolution s) : solution(std::move(s)) {}
  vnm::MleSolution solution;
  std::string status;
};

struct vnm_service {
  std::unique_ptr<vnm::Service> impl;
};

extern "C" {

const char* vnm_version(void) { return "1.0.0"; }

const char* vnm_status_string(vnm_status status) {
  switch (status) {
    case VNM_OK: return "ok";
    case VNM_ERR_DOMAIN: return "domain error";
    case VNM_ERR_STATE: return "state error";
    case VNM_ERR_SOLVER: return "solver error";
    case VNM_ERR_NOT_FOUND: return "not found";
    case VNM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* vnm_last_error(void) { return g_last_error.c_str(); }

void vnm_string_free(char* s) { std::free(s); }

vnm_status vnm_simulate(const char* request_json, char** out) {
  return RunOp(request_json, out, vnm::OpSimulate);
}
vnm_status vnm_elicit(const char* request_json, char** out) {
  return RunOp(request_json, out, vnm::OpElicit);
}
vnm_status vnm_bounds(const char* request_json, char** out) {
  return RunOp(request_json, out, vnm::OpBounds);
}
vnm_status vnm_design(const char* request_json, char** out) {
  return RunOp(request_json, out, vnm::OpDesign);
}
vnm_status vnm_portfolio(const char* request_json, char** out) {
  return RunOp(request_json, out, vnm::OpPortfolio);
}
vnm_status vnm_plot(const char* request_json, char** out) {
  return RunOp(request_json, out, vnm::OpPlot);
}

vnm_status vnm_bench(const char* request_json, vnm_progress_fn progress, void* user,
                     char** out) {
  vnm::ProgressFn fn;
  if (progress) {
    auto mu = std::make_shared<std::mutex>();
    fn = [progress, user, mu](const std::string& message) {
      std::lock_guard<std::mutex> lock(*mu);
      progress(message.c_str(), user);
    };
  }
  return RunOp(request_json, out,
               [&](const vnm::Json& req) { return vnm::OpBench(req, fn); });
}

vnm_status vnm_replay(const char* events_jsonl, char** out) {
  if (!out) return Fail(VNM_ERR_DOMAIN, "out must not be NULL");
  *out = nullptr;
  return Guard([&] {
    if (!events_jsonl) return Fail(VNM_ERR_DOMAIN, "events must not be NULL");
    *out = Dup(vnm::ReplayEventLog(events_jsonl).dump());
    return *out ? VNM_OK : Fail(VNM_ERR_INTERNAL, "out of memory");
  });
}

vnm_status vnm_solution_from_json(const char* solution_json, vnm_solution** out) {
  if (!out) return Fail(VNM_ERR_DOMAIN, "out must not be NULL");
  *out = nullptr;
  return Guard([&] {
    if (!solution_json) return Fail(VNM_ERR_DOMAIN, "solution must not be NULL");
    auto s = std::make_unique<vnm_solution>(
        vnm::SolutionFromJson(vnm::ParseJson(solution_json)));
    s->status = vnm::MleStatusName(s->solution.status);
    *out = s.release();
    return VNM_OK;
  });
}

void vnm_solution_destroy(vnm_solution* s) { delete s; }

const char* vnm_solution_status(const vnm_solution* s) {
  return s ? s->status.c_str() : "";
}

double vnm_solution_sigma_hat(const vnm_solution* s) {
  return s ? s->solution.sigma_hat : 0.0;
}

int vnm_solution_grid_size(const vnm_solution* s) {
  return s ? s->solution.grid.size() : 0;
}

int vnm_solution_grid(const vnm_solution* s, double* points, int capacity) {
  if (!s) return 0;
  const auto& p = s->solution.grid.points();
  for (int j = 0; j < capacity && j < static_cast<int>(p.size()); ++j) points[j] = p[j];
  return static_cast<int>(p.size());
}

vnm_status vnm_solution_eval(const vnm_solution* s, double y, double* value) {
  if (!s || !value) return Fail(VNM_ERR_DOMAIN, "arguments must not be NULL");
  return Guard([&] {
    if (!s->solution.utility) {
      return Fail(VNM_ERR_STATE, "solution has no utility (status " + s->status + ")");
    }
    *value = s->solution.utility->Eval(y);
    return VNM_OK;
  });
}

vnm_status vnm_service_create(const char* data_dir, vnm_service** out) {
  if (!out) return Fail(VNM_ERR_DOMAIN, "out must not be NULL");
  *out = nullptr;
  return Guard([&] {
    auto s = std::make_unique<vnm_service>();
    s->impl = std::make_unique<vnm::Service>(data_dir ? data_dir : "");
    *out = s.release();
    return VNM_OK;
  });
}

void vnm_service_destroy(vnm_service* service) { delete service; }

vnm_status vnm_service_handle(vnm_service* service, const char* method,
                              const char* path, const char* body, int* http_status,
                              char** out) {
  if (!out || !http_status || !service || !method || !path) {
    return Fail(VNM_ERR_DOMAIN, "arguments must not be NULL");
  }
  *out = nullptr;
  return Guard([&] {
    vnm::HttpResponse r = service->impl->Handle(method, path, body ? body : "");
    *http_status = r.status;
    *out = Dup(r.body);
    return *out ? VNM_OK : Fail(VNM_ERR_INTERNAL, "out of memory");
  });
}

}  // extern "C"
