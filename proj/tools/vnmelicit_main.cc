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
// Command-line front end. Links only the C API.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"
#include "vnmelicit/vnmelicit.h"

namespace {

using Json = nlohmann::json;

struct CliError {
  int code;
  std::string message;
};

int ExitCode(vnm_status s) {
  switch (s) {
    case VNM_OK: return 0;
    case VNM_ERR_DOMAIN: return 2;
    case VNM_ERR_STATE: return 3;
    case VNM_ERR_SOLVER: return 4;
    default: return 1;
  }
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{2, "cannot open " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json ReadJson(const std::string& path) {
  try {
    return Json::parse(ReadText(path));
  } catch (const Json::parse_error& e) {
    throw CliError{2, path + ": malformed JSON: " + e.what()};
  }
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw CliError{2, "cannot write " + path};
  out << text;
}

void WriteJson(const std::string& path, const Json& j) { WriteText(path, j.dump(2) + "\n"); }

Json Call(vnm_status (*fn)(const char*, char**), const Json& req) {
  char* out = nullptr;
  vnm_status s = fn(req.dump().c_str(), &out);
  if (s != VNM_OK) throw CliError{ExitCode(s), vnm_last_error()};
  Json j = Json::parse(out);
  vnm_string_free(out);
  return j;
}

// Money stays a string so the decimal text reaches the library unchanged.
void SetMoney(Json& req, const char* key, const std::string& value) {
  if (!value.empty()) req[key] = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Utility elicitation from pairwise lottery choices"};
  app.set_version_flag("--version", std::string(vnm_version()));
  app.require_subcommand(1);

  // simulate
  uint64_t seed = 1;
  int k = 100, n = 50;
  double sigma_star = 10.0, step = 100.0;
  std::string b_bar, law = "zero", out, truth_out, grid_out;
  auto* sim = app.add_subcommand("simulate", "Simulate choices of a CARA decision maker");
  sim->add_option("--seed", seed, "Random seed")->capture_default_str();
  sim->add_option("--K", k, "Number of comparisons")->capture_default_str();
  sim->add_option("--N", n, "Number of breakpoints")->capture_default_str();
  sim->add_option("--sigma-star", sigma_star, "Gumbel scale")->capture_default_str();
  sim->add_option("--b-bar", b_bar, "Upper payoff bound (default 100000)");
  sim->add_option("--step", step, "Breakpoint spacing quantum")->capture_default_str();
  sim->add_option("--lottery-law", law, "zero|uniform")->capture_default_str();
  sim->add_option("--out", out, "Dataset file (stdout if omitted)");
  sim->add_option("--truth", truth_out, "Write the true utility spec here");
  sim->add_option("--grid-out", grid_out, "Write the breakpoint grid here");

  // elicit
  std::string data_path, structure = "full", grid_path;
  double lip = 10.0, cbar = 100.0, quantum = 1.0;
  std::optional<double> fixed_sigma;
  bool no_rat = false;
  auto* eli = app.add_subcommand("elicit", "Maximum-likelihood utility estimate");
  eli->add_option("--data", data_path, "Dataset file")->required();
  eli->add_option("--structure", structure, "full|nolip|mono|none")->capture_default_str();
  eli->add_option("--L", lip, "Lipschitz bound")->capture_default_str();
  eli->add_option("--cbar", cbar, "Upper bound on 1/sigma")->capture_default_str();
  eli->add_option("--b-bar", b_bar, "Upper payoff bound");
  eli->add_option("--quantum", quantum, "Payoff quantum")->capture_default_str();
  eli->add_option("--grid", grid_path, "Grid file (default: payoffs in the data)");
  eli->add_option("--fixed-sigma", fixed_sigma, "Fix sigma instead of estimating it");
  eli->add_flag("--no-rationalizability", no_rat, "Skip the rationalizability LP");
  eli->add_option("--out", out, "Solution file (stdout if omitted)");

  // bounds
  std::string solution_path, truth_path, lambda = "auto";
  double delta = 0.05;
  bool csv_only = false;
  std::optional<double> b_cbar, b_lip;
  auto* bnd = app.add_subcommand("bounds", "Finite-sample error bounds");
  bnd->add_option("--solution", solution_path, "Solution file")->required();
  bnd->add_option("--truth", truth_path, "True utility spec (adds empirical errors)");
  bnd->add_option("--delta", delta, "Confidence level")->capture_default_str();
  bnd->add_option("--lambda", lambda, "Ridge term or 'auto'")->capture_default_str();
  bnd->add_option("--cbar", b_cbar, "Override cbar");
  bnd->add_option("--L", b_lip, "Override Lipschitz bound");
  bnd->add_flag("--csv", csv_only, "Print only the CSV row");
  bnd->add_option("--out", out, "Report file (stdout if omitted)");

  // design
  std::string mode = "random";
  int rounds = 3;
  double amplitude = 0.5, keep = 0.5;
  auto* des = app.add_subcommand("design", "Generate comparison queries");
  des->add_option("--mode", mode, "random|fullrank|rankdeficient|multiround")
      ->capture_default_str();
  des->add_option("--seed", seed, "Random seed")->capture_default_str();
  des->add_option("--K", k, "Number of queries")->capture_default_str();
  des->add_option("--N", n, "Number of breakpoints")->capture_default_str();
  des->add_option("--step", step, "Breakpoint spacing quantum")->capture_default_str();
  des->add_option("--rounds", rounds, "Rounds (multiround)")->capture_default_str();
  des->add_option("--amplitude", amplitude, "Query amplitude")->capture_default_str();
  des->add_option("--b-bar", b_bar, "Upper payoff bound");
  des->add_option("--quantum", quantum, "Payoff quantum")->capture_default_str();
  des->add_option("--keep-fraction", keep, "Interior share kept (rankdeficient)")
      ->capture_default_str();
  des->add_option("--lottery-law", law, "zero|uniform")->capture_default_str();
  des->add_option("--out", out, "Query file (stdout if omitted)");

  // portfolio
  std::string utility_path, scenarios_path, budget, caps;
  bool allow_nonunique = false;
  std::optional<double> sigma;
  auto* pf = app.add_subcommand("portfolio", "Expected-utility portfolio with PaR report");
  auto* sol_opt = pf->add_option("--solution", solution_path, "Solution file");
  auto* util_opt = pf->add_option("--utility", utility_path, "Utility file");
  sol_opt->excludes(util_opt);
  pf->add_option("--sigma", sigma, "Error scale (with --utility)");
  pf->add_option("--scenarios", scenarios_path, "Scenario CSV (asset_0..asset_S)")
      ->required();
  pf->add_option("--budget", budget, "Initial wealth")->required();
  pf->add_option("--caps", caps, "Comma-separated per-asset caps");
  pf->add_option("--delta", delta, "PaR level")->capture_default_str();
  pf->add_flag("--allow-nonunique", allow_nonunique, "Accept rank-deficient estimates");
  pf->add_option("--out", out, "Report file (stdout if omitted)");

  // bench
  std::string experiment, out_dir = "bench_out";
  int seeds = 30, threads = 0;
  std::vector<int> k_schedule;
  std::optional<int> bench_n;
  bool quiet = false;
  auto* bch = app.add_subcommand("bench", "Run a reproduction experiment");
  bch->add_option("--experiment", experiment, "fig2|fig3|table2")->required();
  bch->add_option("--seeds", seeds, "Seeds 1..S")->capture_default_str();
  bch->add_option("--out", out_dir, "Output directory")->capture_default_str();
  bch->add_option("--threads", threads, "Worker threads (0: hardware)");
  bch->add_option("--k-schedule", k_schedule, "Override the K schedule")->delimiter(',');
  bch->add_option("--N", bench_n, "Override N");
  bch->add_option("--lottery-law", law, "zero|uniform")->capture_default_str();
  bch->add_option("--rank-keep-fraction", keep, "Rank-deficient support share")
      ->capture_default_str();
  bch->add_flag("--quiet", quiet, "No progress output");

  // plot
  std::string summary_path, metric = "l2", title;
  auto* plt = app.add_subcommand("plot", "Render a summary CSV as SVG");
  plt->add_option("--summary", summary_path, "summary.csv")->required();
  plt->add_option("--metric", metric, "l2|linf|lambda_min|gram_lambda_min|rank")
      ->capture_default_str();
  plt->add_option("--title", title, "Plot title");
  plt->add_option("--out", out, "SVG file (stdout if omitted)");

  // replay
  std::string events_path;
  auto* rep = app.add_subcommand("replay", "Rebuild a session from its event log");
  rep->add_option("--events", events_path, "Session .jsonl log")->required();
  rep->add_option("--out", out, "Output file (stdout if omitted)");
  std::string what = "estimate";
  rep->add_option("--show", what, "estimate|recommendation|session|all")
      ->capture_default_str();

  // serve
  std::string host = "127.0.0.1", data_dir = "sessions";
  int port = 8080;
  auto* srv = app.add_subcommand("serve", "Run the session HTTP service");
  srv->add_option("--host", host, "Bind address")->capture_default_str();
  srv->add_option("--port", port, "Port")->capture_default_str();
  srv->add_option("--data-dir", data_dir, "Session log directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      Json req = {{"seed", seed}, {"K", k}, {"N", n}, {"sigma_star", sigma_star},
                  {"step", step}, {"lottery_law", law}};
      SetMoney(req, "b_bar", b_bar);
      Json r = Call(vnm_simulate, req);
      WriteJson(out, r["dataset"]);
      if (!truth_out.empty()) WriteJson(truth_out, r["truth"]);
      if (!grid_out.empty()) WriteJson(grid_out, r["grid"]);
    } else if (*eli) {
      Json req = {{"dataset", ReadJson(data_path)}, {"structure", structure},
                  {"L", lip}, {"cbar", cbar}, {"quantum", quantum},
                  {"rationalizability", !no_rat}};
      SetMoney(req, "b_bar", b_bar);
      if (!grid_path.empty()) req["grid"] = ReadJson(grid_path);
      if (fixed_sigma) req["fixed_sigma"] = *fixed_sigma;
      WriteJson(out, Call(vnm_elicit, req));
    } else if (*bnd) {
      Json req = {{"solution", ReadJson(solution_path)}, {"delta", delta}};
      if (lambda == "auto") {
        req["lambda"] = "auto";
      } else {
        try {
          req["lambda"] = std::stod(lambda);
        } catch (const std::exception&) {
          throw CliError{2, "--lambda must be a number or 'auto'"};
        }
      }
      if (!truth_path.empty()) req["truth"] = ReadJson(truth_path);
      if (b_cbar) req["cbar"] = *b_cbar;
      if (b_lip) req["L"] = *b_lip;
      Json r = Call(vnm_bounds, req);
      if (csv_only) {
        WriteText(out, r["csv"].get<std::string>());
      } else {
        WriteJson(out, r);
      }
    } else if (*des) {
      Json req = {{"mode", mode}, {"seed", seed}, {"K", k}, {"N", n}, {"step", step},
                  {"rounds", rounds}, {"amplitude", amplitude}, {"quantum", quantum},
                  {"keep_fraction", keep}, {"lottery_law", law}};
      SetMoney(req, "b_bar", b_bar);
      WriteJson(out, Call(vnm_design, req));
    } else if (*pf) {
      Json req = {{"scenarios_csv", ReadText(scenarios_path)}, {"budget", budget},
                  {"delta", delta}, {"allow_nonunique", allow_nonunique}};
      if (!solution_path.empty()) {
        req["solution"] = ReadJson(solution_path);
      } else if (!utility_path.empty()) {
        req["utility"] = ReadJson(utility_path);
        if (sigma) req["sigma"] = *sigma;
      } else {
        throw CliError{2, "portfolio needs --solution or --utility"};
      }
      if (!caps.empty()) {
        std::vector<double> c;
        std::stringstream ss(caps);
        std::string item;
        while (std::getline(ss, item, ',')) {
          try {
            c.push_back(std::stod(item));
          } catch (const std::exception&) {
            throw CliError{2, "--caps must be comma-separated numbers"};
          }
        }
        req["caps"] = c;
      }
      WriteJson(out, Call(vnm_portfolio, req));
    } else if (*bch) {
      Json req = {{"experiment", experiment}, {"seeds", seeds}, {"threads", threads},
                  {"lottery_law", law}, {"rank_keep_fraction", keep}};
      if (!k_schedule.empty()) req["k_schedule"] = k_schedule;
      if (bench_n) req["N"] = *bench_n;
      char* raw = nullptr;
      vnm_progress_fn progress = nullptr;
      if (!quiet) {
        progress = [](const char* msg, void*) { std::fprintf(stderr, "%s\n", msg); };
      }
      vnm_status s = vnm_bench(req.dump().c_str(), progress, nullptr, &raw);
      if (s != VNM_OK) throw CliError{ExitCode(s), vnm_last_error()};
      Json r = Json::parse(raw);
      vnm_string_free(raw);
      std::filesystem::create_directories(out_dir);
      auto path = [&](const std::string& f) {
        return (std::filesystem::path(out_dir) / f).string();
      };
      WriteText(path("summary.csv"), r["summary_csv"].get<std::string>());
      WriteText(path("cells.csv"), r["cells_csv"].get<std::string>());
      WriteJson(path("metadata.json"), r["metadata"]);
      std::vector<std::string> metrics = {"l2", "linf"};
      if (experiment == "table2") metrics.push_back("gram_lambda_min");
      for (const std::string& m : metrics) {
        Json p = Call(vnm_plot, {{"summary_csv", r["summary_csv"]},
                                 {"metric", m},
                                 {"title", experiment + ": mean " + m + " by K"}});
        WriteText(path(m + ".svg"), p["svg"].get<std::string>());
      }
      if (!quiet) std::fprintf(stderr, "wrote %s\n", out_dir.c_str());
    } else if (*plt) {
      Json req = {{"summary_csv", ReadText(summary_path)}, {"metric", metric}};
      if (!title.empty()) req["title"] = title;
      WriteText(out, Call(vnm_plot, req)["svg"].get<std::string>());
    } else if (*rep) {
      char* raw = nullptr;
      vnm_status s = vnm_replay(ReadText(events_path).c_str(), &raw);
      if (s != VNM_OK) throw CliError{ExitCode(s), vnm_last_error()};
      Json r = Json::parse(raw);
      vnm_string_free(raw);
      if (what == "all") {
        WriteJson(out, r);
      } else if (r.contains(what)) {
        WriteJson(out, r[what]);
      } else {
        throw CliError{2, "--show must be estimate|recommendation|session|all"};
      }
    } else if (*srv) {
      vnm_service* service = nullptr;
      if (vnm_service_create(data_dir.c_str(), &service) != VNM_OK) {
        throw CliError{1, std::string("cannot start service: ") + vnm_last_error()};
      }
      httplib::Server server;
      auto handler = [service](const httplib::Request& req, httplib::Response& res) {
        int status = 500;
        char* body = nullptr;
        if (vnm_service_handle(service, req.method.c_str(), req.path.c_str(),
                               req.body.c_str(), &status, &body) != VNM_OK) {
          res.status = 500;
          res.set_content(Json{{"error", vnm_last_error()}}.dump(), "application/json");
          return;
        }
        res.status = status;
        res.set_content(body, "application/json");
        vnm_string_free(body);
      };
      server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                  {"Access-Control-Allow-Headers", "Content-Type"}});
      server.Get(".*", handler);
      server.Post(".*", handler);
      server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
      });
      std::fprintf(stderr, "listening on http://%s:%d (sessions in %s)\n", host.c_str(),
                   port, data_dir.c_str());
      bool ok = server.listen(host, port);
      vnm_service_destroy(service);
      if (!ok) throw CliError{1, "cannot bind " + host + ":" + std::to_string(port)};
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
