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
#ifndef VNM_SERVICE_SERVICE_H_
#define VNM_SERVICE_SERVICE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>

#include "vnm/core/json_io.h"

namespace vnm {

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

// Session-based elicitation API. Routes:
//   POST /sessions                      create (body: config)
//   GET  /sessions                      list ids
//   GET  /sessions/{id}                 summary
//   GET  /sessions/{id}/query           next unanswered query
//   POST /sessions/{id}/choices         {"query_id", "z"}
//   POST /sessions/{id}/estimate        MLE + bounds
//   POST /sessions/{id}/recommend       portfolio report
//   POST /sessions/{id}/simulate        answer queries with a synthetic DM
//   POST /sessions/{id}/close
//   GET  /sessions/{id}/dataset         answered records (dataset file format)
//   GET  /sessions/{id}/events          event log
//   GET  /health
// Each session is persisted as an append-only JSON-lines event log under
// `data_dir` (in memory only when empty) and rebuilt from it on start-up.
// Thread-safe: one writer per session, concurrent readers.
class Service {
 public:
  explicit Service(std::string data_dir = "");
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpResponse Handle(const std::string& method, const std::string& path,
                      const std::string& body);

  struct Session;

 private:
  std::shared_ptr<Session> Find(const std::string& id) const;
  HttpResponse Create(const std::string& body);
  void Load();

  std::string data_dir_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  uint64_t next_id_ = 1;
};

// Rebuilds a session from its JSON-lines event log and returns
// {"session", "estimate", "recommendation", "replay_mismatch"}; the estimate is
// recomputed, so it equals what the live service returned.
Json ReplayEventLog(const std::string& jsonl);

}  // namespace vnm

#endif  // VNM_SERVICE_SERVICE_H_
