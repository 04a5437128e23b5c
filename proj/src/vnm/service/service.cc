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
#include "vnm/service/service.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "vnm/api/operations.h"
#include "vnm/api/serialize.h"
#include "vnm/bounds/bounds.h"
#include "vnm/core/errors.h"
#include "vnm/design/design.h"
#include "vnm/mle/mle.h"

namespace vnm {
namespace {

class HttpError : public std::runtime_error {
 public:
  HttpError(int status, const std::string& msg, Json extra = Json::object())
      : std::runtime_error(msg), status_(status), extra_(std::move(extra)) {}
  int status() const { return status_; }
  const Json& extra() const { return extra_; }

 private:
  int status_;
  Json extra_;
};

HttpResponse Reply(int status, const Json& body) {
  return {status, body.dump()};
}

HttpResponse ErrorReply(int status, const std::string& msg,
                        const Json& extra = Json::object()) {
  Json body = {{"error", msg}};
  for (auto it = extra.begin(); it != extra.end(); ++it) body[it.key()] = it.value();
  return Reply(status, body);
}

struct SessionConfig {
  double lipschitz = 10.0;
  double cbar = 100.0;
  double b_bar = kDefaultBBar;
  double delta = 0.05;
  Structure level = Structure::kFull;
  double quantum = kDefaultQuantum;
  double amplitude = kDefaultAmplitude;
  int max_rounds = 0;  // 0: until the grid saturates
  uint64_t seed = 0;

  Json ToJson() const {
    return {{"L", lipschitz},          {"cbar", cbar},
            {"b_bar", MoneyString(b_bar)}, {"delta", delta},
            {"structure", StructureName(level)}, {"quantum", quantum},
            {"amplitude", amplitude},  {"max_rounds", max_rounds},
            {"seed", seed}};
  }

  static SessionConfig FromJson(const Json& j) {
    SessionConfig c;
    Json fields = Json::object();
    if (!j.is_object()) throw HttpError(400, "config must be a JSON object");
    auto number = [&](const char* key, double& out, bool money = false) {
      if (!j.contains(key)) return;
      try {
        out = money ? GetMoney(j, key, out) : GetNumber(j, key, out);
      } catch (const DomainError& e) {
        fields[key] = e.what();
      }
    };
    number("L", c.lipschitz);
    number("cbar", c.cbar);
    number("b_bar", c.b_bar, true);
    number("delta", c.delta);
    number("quantum", c.quantum);
    number("amplitude", c.amplitude);
    if (j.contains("structure")) {
      try {
        c.level = ParseStructure(j["structure"].get<std::string>());
      } catch (const std::exception&) {
        fields["structure"] = "must be one of full|nolip|mono|none";
      }
    }
    if (j.contains("max_rounds")) {
      if (j["max_rounds"].is_number_integer() && j["max_rounds"].get<int>() >= 0) {
        c.max_rounds = j["max_rounds"].get<int>();
      } else {
        fields["max_rounds"] = "must be a non-negative integer";
      }
    }
    if (j.contains("seed")) {
      if (j["seed"].is_number_unsigned()) {
        c.seed = j["seed"].get<uint64_t>();
      } else {
        fields["seed"] = "must be a non-negative integer";
      }
    }
    if (!fields.contains("L") && !(c.lipschitz > 0.0)) fields["L"] = "must be > 0";
    if (!fields.contains("cbar") && !(c.cbar > 0.0)) fields["cbar"] = "must be > 0";
    if (!fields.contains("b_bar") && !(c.b_bar > 0.0)) fields["b_bar"] = "must be > 0";
    if (!fields.contains("delta") && !(c.delta > 0.0 && c.delta < 1.0)) {
      fields["delta"] = "must lie in (0, 1)";
    }
    if (!fields.contains("quantum") && !(c.quantum > 0.0)) {
      fields["quantum"] = "must be > 0";
    }
    if (!fields.contains("amplitude") && !(c.amplitude > 0.0 && c.amplitude <= 1.0)) {
      fields["amplitude"] = "must lie in (0, 1]";
    }
    if (!fields.empty()) {
      throw HttpError(400, "invalid session config", {{"fields", fields}});
    }
    return c;
  }

  StructureParams Params() const {
    StructureParams sp;
    sp.level = level;
    sp.lipschitz = lipschitz;
    sp.cbar = cbar;
    return sp;
  }
};

double RoundProb(double p) { return std::round(p * 1e12) / 1e12; }

Json LotteryPayload(const Lottery& l) {
  Json outcomes = Json::array();
  for (const Outcome& o : l.outcomes()) {
    outcomes.push_back({{"payoff", MoneyString(o.payoff)}, {"prob", RoundProb(o.prob)}});
  }
  return {{"outcomes", outcomes}};
}

std::string NowUtc() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::vector<std::string> SplitPath(const std::string& path) {
  std::string p = path.substr(0, path.find('?'));
  std::vector<std::string> out;
  std::stringstream ss(p);
  std::string part;
  while (std::getline(ss, part, '/')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

Json ParseBody(const std::string& body) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) return Json::object();
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw HttpError(400, std::string("malformed JSON body: ") + e.what());
  }
}

}  // namespace

struct Service::Session {
  std::string id;
  std::string created_at;
  SessionConfig config;
  bool closed = false;
  DesignState design;
  std::vector<RoundPlan> rounds;
  bool design_exhausted = false;
  std::map<std::string, int> answers;
  Dataset dataset;  // in answer order
  std::optional<Json> estimate;
  std::optional<MleSolution> solution;
  int estimate_k = 0;
  std::optional<Json> recommendation;
  std::vector<Json> events;
  std::string log_path;
  bool replay_mismatch = false;
  mutable std::shared_mutex mu;

  Session(std::string id_, std::string created, SessionConfig cfg)
      : id(std::move(id_)),
        created_at(std::move(created)),
        config(cfg),
        design(DesignState::Start(cfg.b_bar, cfg.quantum, cfg.amplitude)) {
    Advance();
  }

  std::string Status() const {
    if (closed) return "closed";
    if (estimate && estimate_k == static_cast<int>(dataset.size())) return "estimated";
    return "collecting";
  }

  bool RoundAnswered(const RoundPlan& r) const {
    for (size_t i = 0; i < r.queries.size(); ++i) {
      if (!answers.count(QueryId(r.round, static_cast<int>(i) + 1))) return false;
    }
    return true;
  }

  static std::string QueryId(int round, int index) {
    return std::to_string(round) + "-" + std::to_string(index);
  }

  // Issues the next round once the last one is fully answered.
  void Advance() {
    while (!design_exhausted && (rounds.empty() || RoundAnswered(rounds.back()))) {
      if (config.max_rounds > 0 &&
          static_cast<int>(rounds.size()) >= config.max_rounds) {
        design_exhausted = true;
        break;
      }
      std::optional<RoundPlan> plan = MultiRoundStep(design);
      if (!plan) {
        design_exhausted = true;
        break;
      }
      rounds.push_back(std::move(*plan));
    }
  }

  int IssuedCount() const {
    int n = 0;
    for (const RoundPlan& r : rounds) n += static_cast<int>(r.queries.size());
    return n;
  }

  const Query& Lookup(const std::string& qid, int* round, int* index) const {
    int r = 0, i = 0;
    char dash = 0;
    std::istringstream in(qid);
    if (!(in >> r >> dash >> i) || dash != '-' || !in.eof() || r < 1 || i < 1 ||
        r > static_cast<int>(rounds.size()) ||
        i > static_cast<int>(rounds[r - 1].queries.size())) {
      throw HttpError(404, "unknown or not yet issued query '" + qid + "'");
    }
    *round = r;
    *index = i;
    return rounds[r - 1].queries[i - 1];
  }

  std::optional<std::string> NextQueryId() const {
    for (const RoundPlan& r : rounds) {
      for (size_t i = 0; i < r.queries.size(); ++i) {
        std::string qid = QueryId(r.round, static_cast<int>(i) + 1);
        if (!answers.count(qid)) return qid;
      }
    }
    return std::nullopt;
  }

  Json Counts() const {
    return {{"answered", dataset.size()},
            {"issued", IssuedCount()},
            {"round", rounds.empty() ? 0 : rounds.back().round},
            {"n_r", rounds.empty() ? design.n() : rounds.back().n_r}};
  }

  // Returns false for an idempotent repeat.
  bool ApplyChoice(const std::string& qid, int z) {
    if (closed) throw HttpError(409, "session is closed");
    if (z != 1 && z != -1) throw HttpError(400, "z must be +1 or -1");
    int r = 0, i = 0;
    const Query& q = Lookup(qid, &r, &i);
    auto it = answers.find(qid);
    if (it != answers.end()) {
      if (it->second == z) return false;
      throw HttpError(409, "query '" + qid + "' was already answered with z = " +
                               std::to_string(it->second));
    }
    answers[qid] = z;
    dataset.push_back({q.w, q.y, z});
    Advance();
    return true;
  }

  Json ComputeEstimate() const {
    if (dataset.empty()) throw HttpError(409, "no answered queries to estimate from");
    BreakpointGrid grid = BuildGrid(dataset, config.b_bar, config.quantum);
    StructureParams sp = config.Params();
    MleSolution sol = SolveMle(MakeMleProblem(dataset, grid, sp));
    Json payload = {{"session_id", id},
                    {"k", dataset.size()},
                    {"status", MleStatusName(sol.status)},
                    {"sigma_hat", FiniteOrNull(sol.sigma_hat)},
                    {"gamma_star", sol.gamma_star},
                    {"rank", sol.diagnostics.rank},
                    {"n", grid.size()},
                    {"lambda_min", sol.diagnostics.lambda_min},
                    {"solution", ToJson(sol)}};
    if (sol.utility) {
      Json poly = Json::array();
      for (int j = 0; j < grid.size(); ++j) {
        poly.push_back({{"y", MoneyString(grid[j])}, {"u", sol.utility->alpha()[j]}});
      }
      payload["utility_polyline"] = poly;
    } else {
      payload["utility_polyline"] = nullptr;
    }
    payload["band"] = nullptr;
    if (sol.status == MleStatus::kUnique &&
        (sp.level == Structure::kFull || sp.level == Structure::kNoLipschitz)) {
      OptimalSetBand band = ComputeOptimalSetBand(sol);
      Json upper = Json::array();
      for (const auto& [y, v] : band.UpperPolyline()) {
        upper.push_back({{"y", MoneyString(y)}, {"u", v}});
      }
      payload["band"] = {{"upper", upper}};
    }
    InfoMatrix info;
    info.k = sol.diagnostics.k;
    info.rank = sol.diagnostics.rank;
    info.eigenvalues = sol.diagnostics.eigenvalues;
    info.lambda_min = sol.diagnostics.lambda_min;
    BoundInputs in;
    in.n = grid.size();
    in.delta = config.delta;
    in.cbar = config.cbar;
    in.lipschitz = config.lipschitz;
    in.mesh = grid.Mesh();
    try {
      payload["bounds"] = ToJson(TheoreticalBounds(info, in));
    } catch (const DomainError& e) {
      payload["bounds"] = {{"error", e.what()}};
    }
    return payload;
  }

  void ApplyEstimate(Json payload) {
    solution = SolutionFromJson(payload["solution"]);
    estimate = std::move(payload);
    estimate_k = static_cast<int>(dataset.size());
  }

  Json ComputeRecommendation(const Json& req) const {
    if (!estimate || !solution) {
      throw HttpError(409, "no estimate yet; POST /sessions/" + id + "/estimate first");
    }
    if (estimate_k != static_cast<int>(dataset.size())) {
      throw HttpError(409, "estimate is stale; re-run estimate after new answers");
    }
    if (!(solution->status == MleStatus::kUnique ||
          solution->status == MleStatus::kSeparationAtBound) ||
        !solution->utility) {
      throw HttpError(409, "estimate status " + MleStatusName(solution->status) +
                               " does not support a recommendation; answer more "
                               "queries and re-estimate",
                      {{"status", MleStatusName(solution->status)}});
    }
    Json op = {{"solution", (*estimate)["solution"]}, {"delta", config.delta}};
    for (const char* key : {"scenarios_csv", "scenarios", "budget", "caps"}) {
      if (req.contains(key)) op[key] = req[key];
    }
    if (!op.contains("budget")) throw HttpError(400, "budget is required");
    Json r;
    try {
      r = OpPortfolio(op);
    } catch (const DomainError& e) {
      throw HttpError(400, e.what());
    }
    Json alloc = Json::array();
    for (const Json& v : r["allocation"]) alloc.push_back(MoneyString(v.get<double>()));
    Json payload = {{"session_id", id},
                    {"allocation", alloc},
                    {"objective", r["objective"]},
                    {"lp_value", r["lp_value"]},
                    {"delta", r["delta"]},
                    {"sigma", r["sigma"]},
                    {"par", r["par"]},
                    {"prar", r["prar"]},
                    {"equivalence", r["equivalence"]}};
    return payload;
  }

  // Grid of the latest issued round; its exploration point is not yet in it.
  BreakpointGrid CurrentGrid() const {
    if (rounds.empty()) return design.grid;
    std::vector<double> pts;
    for (double y : design.grid.points()) {
      if (y != rounds.back().new_breakpoint) pts.push_back(y);
    }
    return BreakpointGrid::Create(pts, design.grid.b_bar(), design.grid.quantum());
  }

  Json Summary() const {
    Json s = {{"id", id},
              {"created_at", created_at},
              {"status", Status()},
              {"config", config.ToJson()},
              {"grid", ToJson(CurrentGrid())},
              {"design_complete", design_exhausted && !NextQueryId()},
              {"estimate", estimate ? Json({{"k", estimate_k},
                                            {"status", (*estimate)["status"]},
                                            {"sigma_hat", (*estimate)["sigma_hat"]}})
                                    : Json(nullptr)}};
    s.update(Counts());
    if (replay_mismatch) s["replay_mismatch"] = true;
    return s;
  }

  void Log(const Json& event) {
    events.push_back(event);
    if (log_path.empty()) return;
    std::ofstream out(log_path, std::ios::app);
    out << event.dump() << "\n";
    out.flush();
    if (!out) throw std::runtime_error("cannot append to event log " + log_path);
  }

  // Applies a persisted event.
  void Replay(const Json& ev) {
    const std::string type = ev.value("type", std::string());
    if (type == "choice") {
      ApplyChoice(ev.at("query_id").get<std::string>(), ev.at("z").get<int>());
    } else if (type == "estimate") {
      Json payload = ComputeEstimate();
      if (ev.contains("payload") && ev["payload"] != payload) replay_mismatch = true;
      ApplyEstimate(std::move(payload));
    } else if (type == "recommend") {
      Json payload = ComputeRecommendation(ev.at("request"));
      if (ev.contains("payload") && ev["payload"] != payload) replay_mismatch = true;
      recommendation = std::move(payload);
    } else if (type == "close") {
      closed = true;
    } else {
      throw std::runtime_error("unknown event type '" + type + "'");
    }
    events.push_back(ev);
  }
};

Service::Service(std::string data_dir) : data_dir_(std::move(data_dir)) {
  if (!data_dir_.empty()) {
    std::filesystem::create_directories(data_dir_);
    Load();
  }
}

Service::~Service() = default;

namespace {

std::shared_ptr<Service::Session> SessionFromLog(std::istream& in,
                                                 const std::string& name) {
  std::string line;
  std::shared_ptr<Service::Session> s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json ev = Json::parse(line);
    if (!s) {
      if (ev.value("type", std::string()) != "create") {
        throw DomainError("event log " + name + " does not start with a create event");
      }
      s = std::make_shared<Service::Session>(ev.at("id").get<std::string>(),
                                             ev.at("created_at").get<std::string>(),
                                             SessionConfig::FromJson(ev.at("config")));
      s->events.push_back(ev);
      continue;
    }
    s->Replay(ev);
  }
  return s;
}

}  // namespace

Json ReplayEventLog(const std::string& jsonl) {
  std::istringstream in(jsonl);
  std::shared_ptr<Service::Session> s;
  try {
    s = SessionFromLog(in, "<input>");
  } catch (const HttpError& e) {
    throw StateError(std::string("event log does not replay: ") + e.what());
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed event log: ") + e.what());
  }
  if (!s) throw DomainError("event log is empty");
  return {{"session", s->Summary()},
          {"estimate", s->estimate ? *s->estimate : Json(nullptr)},
          {"recommendation", s->recommendation ? *s->recommendation : Json(nullptr)},
          {"replay_mismatch", s->replay_mismatch}};
}

void Service::Load() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(data_dir_)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path);
    std::shared_ptr<Session> s = SessionFromLog(in, path.string());
    if (!s) continue;
    s->log_path = path.string();
    const std::string& id = s->id;
    if (id.size() > 1 && id[0] == 's') {
      try {
        next_id_ = std::max<uint64_t>(next_id_, std::stoull(id.substr(1)) + 1);
      } catch (const std::exception&) {
      }
    }
    sessions_[id] = s;
  }
}

std::shared_ptr<Service::Session> Service::Find(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw HttpError(404, "unknown session '" + id + "'");
  return it->second;
}

HttpResponse Service::Create(const std::string& body) {
  SessionConfig cfg = SessionConfig::FromJson(ParseBody(body));
  std::unique_lock lock(mu_);
  std::ostringstream id;
  id << 's' << std::setw(6) << std::setfill('0') << next_id_++;
  auto s = std::make_shared<Session>(id.str(), NowUtc(), cfg);
  if (!data_dir_.empty()) {
    s->log_path = (std::filesystem::path(data_dir_) / (s->id + ".jsonl")).string();
  }
  s->Log({{"type", "create"},
          {"id", s->id},
          {"created_at", s->created_at},
          {"config", cfg.ToJson()}});
  sessions_[s->id] = s;
  return Reply(201, s->Summary());
}

HttpResponse Service::Handle(const std::string& method, const std::string& path,
                             const std::string& body) {
  try {
    std::vector<std::string> parts = SplitPath(path);
    if (parts.size() == 1 && parts[0] == "health" && method == "GET") {
      return Reply(200, {{"status", "ok"}});
    }
    if (parts.empty() || parts[0] != "sessions") throw HttpError(404, "no route " + path);
    if (parts.size() == 1) {
      if (method == "POST") return Create(body);
      if (method == "GET") {
        std::shared_lock lock(mu_);
        Json ids = Json::array();
        for (const auto& [id, s] : sessions_) ids.push_back(id);
        return Reply(200, {{"sessions", ids}});
      }
      throw HttpError(405, "method not allowed");
    }
    std::shared_ptr<Session> s = Find(parts[1]);
    const std::string action = parts.size() > 2 ? parts[2] : "";
    if (parts.size() > 3) throw HttpError(404, "no route " + path);

    if (method == "GET") {
      std::shared_lock lock(s->mu);
      if (action.empty()) return Reply(200, s->Summary());
      if (action == "query") {
        if (s->closed) throw HttpError(409, "session is closed");
        std::optional<std::string> qid = s->NextQueryId();
        Json out = s->Counts();
        if (!qid) {
          out["status"] = "design_complete";
          return Reply(200, out);
        }
        int r = 0, i = 0;
        const Query& q = s->Lookup(*qid, &r, &i);
        const RoundPlan& plan = s->rounds[r - 1];
        out["status"] = "query";
        out["query_id"] = *qid;
        out["round"] = r;
        out["index"] = i;
        out["round_size"] = plan.queries.size();
        out["n_r"] = plan.n_r;
        out["kind"] = i == static_cast<int>(plan.queries.size()) ? "exploration"
                                                                 : "orthogonal";
        out["w"] = LotteryPayload(q.w);
        out["y"] = LotteryPayload(q.y);
        return Reply(200, out);
      }
      if (action == "dataset") return Reply(200, ToJson(s->dataset));
      if (action == "events") return Reply(200, s->events);
      throw HttpError(404, "no route " + path);
    }
    if (method != "POST") throw HttpError(405, "method not allowed");

    std::unique_lock lock(s->mu);
    Json req = ParseBody(body);
    if (action == "choices") {
      if (!req.contains("query_id") || !req["query_id"].is_string()) {
        throw HttpError(400, "body needs a string 'query_id'");
      }
      if (!req.contains("z") || !req["z"].is_number_integer()) {
        throw HttpError(400, "body needs an integer 'z' (+1 or -1)");
      }
      std::string qid = req["query_id"].get<std::string>();
      int z = req["z"].get<int>();
      bool fresh = s->ApplyChoice(qid, z);
      if (fresh) s->Log({{"type", "choice"}, {"query_id", qid}, {"z", z}});
      Json out = s->Counts();
      out["query_id"] = qid;
      out["z"] = z;
      out["duplicate"] = !fresh;
      out["status"] = s->Status();
      return Reply(200, out);
    }
    if (action == "estimate") {
      if (s->closed) throw HttpError(409, "session is closed");
      Json payload = s->ComputeEstimate();
      s->Log({{"type", "estimate"}, {"k", s->dataset.size()}, {"payload", payload}});
      s->ApplyEstimate(payload);
      return Reply(200, payload);
    }
    if (action == "recommend") {
      Json payload = s->ComputeRecommendation(req);
      s->Log({{"type", "recommend"}, {"request", req}, {"payload", payload}});
      s->recommendation = payload;
      return Reply(200, payload);
    }
    if (action == "simulate") {
      if (s->closed) throw HttpError(409, "session is closed");
      SimulatedDM dm = TruthFromJson(req.value(
          "truth", TruthJson(GetNumber(req, "sigma_star", 10.0), s->config.b_bar)));
      uint64_t seed = req.value("seed", s->config.seed);
      int count = req.value("count", -1);
      if (count < 0 && !s->rounds.empty()) {
        count = 0;
        for (size_t i = 0; i < s->rounds.back().queries.size(); ++i) {
          if (!s->answers.count(Session::QueryId(s->rounds.back().round,
                                                 static_cast<int>(i) + 1))) {
            ++count;
          }
        }
      }
      Json answered = Json::array();
      for (int c = 0; c < count; ++c) {
        std::optional<std::string> qid = s->NextQueryId();
        if (!qid) break;
        int r = 0, i = 0;
        const Query& q = s->Lookup(*qid, &r, &i);
        Rng rng(Rng::StreamSeed(seed, s->dataset.size()));
        int z = SampleChoice(dm, q.w, q.y, rng);
        s->ApplyChoice(*qid, z);
        s->Log({{"type", "choice"}, {"query_id", *qid}, {"z", z}});
        answered.push_back({{"query_id", *qid}, {"z", z}});
      }
      Json out = s->Counts();
      out["simulated"] = answered;
      out["status"] = s->Status();
      return Reply(200, out);
    }
    if (action == "close") {
      if (!s->closed) {
        s->closed = true;
        s->Log({{"type", "close"}});
      }
      return Reply(200, s->Summary());
    }
    throw HttpError(404, "no route " + path);
  } catch (const HttpError& e) {
    return ErrorReply(e.status(), e.what(), e.extra());
  } catch (const DomainError& e) {
    return ErrorReply(400, e.what());
  } catch (const StateError& e) {
    return ErrorReply(409, e.what());
  } catch (const SolverError& e) {
    return ErrorReply(500, std::string("solver failure: ") + e.what());
  } catch (const Json::exception& e) {
    return ErrorReply(400, std::string("bad request: ") + e.what());
  } catch (const std::exception& e) {
    return ErrorReply(500, e.what());
  }
}

}  // namespace vnm
