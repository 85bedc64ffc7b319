// Copyright 2026 The Interval Privacy Authors.
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

// intpriv: experiment harness, batch privatize/estimate, and the survey
// service.
//
//   intpriv moment-exp     [--config f] [--seed s] [--reps r] [--out dir]
//   intpriv regression-exp [--config f] [--input records.jsonl] ...
//   intpriv tradeoff       [--config f] ...
//   intpriv progressive    [--config f] ...
//   intpriv privatize --config mech.json --input data.csv --column y
//                     [--features a,b] [--seed s] [--out records.jsonl]
//   intpriv estimate  --input records.jsonl [--format json|csv] [--out f]
//   intpriv serve     [--host h] [--port p] [--log events.jsonl] [--seed s]
//
// Exit codes: 0 ok, 2 validation / parse / no data, 3 runtime.

#include <csignal>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/tokenizer.hpp>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "intpriv/core/errors.h"
#include "intpriv/core/record.h"
#include "intpriv/core/rng.h"
#include "intpriv/estimation/npmle.h"
#include "intpriv/experiments/moment.h"
#include "intpriv/experiments/progressive_sim.h"
#include "intpriv/experiments/regression_exp.h"
#include "intpriv/experiments/tradeoff.h"
#include "intpriv/kernels/parallel.h"
#include "intpriv/mechanisms/config.h"
#include "intpriv/mechanisms/mechanisms.h"
#include "intpriv/service/event_log.h"
#include "intpriv/service/http_server.h"
#include "intpriv/service/survey_service.h"
#include "json.hpp"

#ifndef INTPRIV_VERSION
#define INTPRIV_VERSION "0.0.0"
#endif

namespace intpriv {
namespace {

using nlohmann::json;

struct CommonFlags {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<int> reps;
  std::string out;
  int threads = 0;
};

int ExitCodeFor(const absl::Status& s) {
  if (s.ok()) return 0;
  const std::string kind = ErrorKind(s);
  if (s.code() == absl::StatusCode::kInvalidArgument || kind == "NoData" ||
      kind == "ValidationError" || kind == "ParseError") {
    return 2;
  }
  return 3;
}

uint64_t Fnv1a(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return InvalidArgument("ParseError", absl::StrCat("cannot open ", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::InternalError(absl::StrCat("IoError: cannot write ", path.string()));
  out << bytes;
  out.close();
  if (!out) return absl::InternalError(absl::StrCat("IoError: write failed for ", path.string()));
  return absl::OkStatus();
}

absl::StatusOr<json> LoadConfig(const std::string& path) {
  if (path.empty()) return json::object();
  INTPRIV_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return InvalidArgument("ParseError", absl::StrCat(path, " is not valid JSON"));
  }
  if (!j.is_object()) return InvalidArgument("ParseError", absl::StrCat(path, " must hold an object"));
  return j;
}

json Manifest(const std::string& command, const json& config, uint64_t seed) {
  const std::string canonical = config.dump();
  return {{"command", command},
          {"config", config},
          {"config_hash", absl::StrFormat("fnv1a64:%016x", Fnv1a(canonical))},
          {"seed", seed},
          {"versions", {{"intpriv", INTPRIV_VERSION}, {"wire_schema", kWireSchemaVersion}}}};
}

// Writes name -> bytes under `dir` plus manifest.json; with no directory,
// prints `stdout_name`'s contents.
absl::Status Emit(const CommonFlags& f, const std::string& command, const json& config,
                  uint64_t seed, const std::vector<std::pair<std::string, std::string>>& files,
                  const std::string& stdout_name) {
  if (f.out.empty()) {
    for (const auto& [name, bytes] : files) {
      if (name == stdout_name) std::cout << bytes;
    }
    return absl::OkStatus();
  }
  std::error_code ec;
  std::filesystem::create_directories(f.out, ec);
  if (ec) return absl::InternalError(absl::StrCat("IoError: cannot create ", f.out));
  for (const auto& [name, bytes] : files) {
    INTPRIV_RETURN_IF_ERROR(WriteFile(std::filesystem::path(f.out) / name, bytes));
  }
  return WriteFile(std::filesystem::path(f.out) / "manifest.json",
                   Manifest(command, config, seed).dump(2) + "\n");
}

void ApplyThreads(const CommonFlags& f) {
  if (f.threads > 0) SetThreadCount(f.threads);
}

absl::Status RunMoment(const CommonFlags& f) {
  INTPRIV_ASSIGN_OR_RETURN(json j, LoadConfig(f.config));
  INTPRIV_ASSIGN_OR_RETURN(MomentConfig cfg, MomentConfig::FromJson(j));
  if (f.seed) cfg.seed = *f.seed;
  if (f.reps) cfg.reps = *f.reps;
  INTPRIV_ASSIGN_OR_RETURN(cfg, MomentConfig::FromJson(cfg.ToJson()));
  INTPRIV_ASSIGN_OR_RETURN(MomentTable t, RunMomentExperiment(cfg));
  return Emit(f, "moment-exp", cfg.ToJson(), cfg.seed,
              {{"moment_table.csv", t.ToCsv()},
               {"moment_table.txt", t.ToText()},
               {"moment.json", t.ToJson().dump(2) + "\n"}},
              "moment_table.txt");
}

absl::StatusOr<std::vector<WireRecord>> LoadRecords(const std::string& path) {
  INTPRIV_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  std::istringstream in(text);
  return ParseJsonLines(in);
}

absl::Status RunRegression(const CommonFlags& f, const std::string& input) {
  INTPRIV_ASSIGN_OR_RETURN(json j, LoadConfig(f.config));
  INTPRIV_ASSIGN_OR_RETURN(RegressionExpConfig cfg, RegressionExpConfig::FromJson(j));
  if (f.seed) cfg.seed = *f.seed;
  if (f.reps) cfg.reps = *f.reps;
  INTPRIV_ASSIGN_OR_RETURN(cfg, RegressionExpConfig::FromJson(cfg.ToJson()));
  if (!input.empty()) {
    INTPRIV_ASSIGN_OR_RETURN(std::vector<WireRecord> records, LoadRecords(input));
    INTPRIV_ASSIGN_OR_RETURN(RecordFit fit, FitRecords(records, cfg));
    json config = cfg.ToJson();
    config["input"] = input;
    return Emit(f, "regression-exp", config, cfg.seed,
                {{"fit.json", fit.report.dump(2) + "\n"}, {"trace.csv", fit.trace_csv}},
                "fit.json");
  }
  INTPRIV_ASSIGN_OR_RETURN(RegressionExpResult r, RunRegressionExperiment(cfg));
  return Emit(f, "regression-exp", cfg.ToJson(), cfg.seed,
              {{"trace.csv", r.TraceCsv()},
               {"summary.csv", r.SummaryCsv()},
               {"regression.json", r.ToJson().dump(2) + "\n"}},
              "summary.csv");
}

absl::Status RunTradeoff(const CommonFlags& f) {
  INTPRIV_ASSIGN_OR_RETURN(json j, LoadConfig(f.config));
  INTPRIV_ASSIGN_OR_RETURN(TradeoffConfig cfg, TradeoffConfig::FromJson(j));
  if (f.seed) cfg.base.seed = *f.seed;
  if (f.reps) cfg.reps = *f.reps;
  INTPRIV_ASSIGN_OR_RETURN(cfg, TradeoffConfig::FromJson(cfg.ToJson()));
  INTPRIV_ASSIGN_OR_RETURN(TradeoffResult r, RunTradeoffSweep(cfg));
  return Emit(f, "tradeoff", cfg.ToJson(), cfg.base.seed,
              {{"tradeoff.csv", r.ToCsv()}, {"tradeoff.json", r.ToJson().dump(2) + "\n"}},
              "tradeoff.csv");
}

absl::Status RunProgressive(const CommonFlags& f) {
  INTPRIV_ASSIGN_OR_RETURN(json j, LoadConfig(f.config));
  INTPRIV_ASSIGN_OR_RETURN(ProgressiveSimConfig cfg, ProgressiveSimConfig::FromJson(j));
  if (f.seed) cfg.seed = *f.seed;
  if (f.reps) cfg.seeds = *f.reps;
  INTPRIV_ASSIGN_OR_RETURN(cfg, ProgressiveSimConfig::FromJson(cfg.ToJson()));
  INTPRIV_ASSIGN_OR_RETURN(ProgressiveSimResult r, RunProgressiveSimulation(cfg));
  return Emit(f, "progressive", cfg.ToJson(), cfg.seed,
              {{"progressive.csv", r.ToCsv()}, {"progressive.json", r.ToJson().dump(2) + "\n"}},
              "progressive.csv");
}

using CsvTokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;

absl::StatusOr<std::vector<std::string>> SplitCsvLine(const std::string& line, size_t line_no) {
  try {
    CsvTokenizer tok(line);
    return std::vector<std::string>(tok.begin(), tok.end());
  } catch (const boost::escaped_list_error& e) {
    return InvalidArgument("ParseError", absl::StrCat("line ", line_no, ": ", e.what()));
  }
}

absl::StatusOr<double> ParseCell(const std::string& cell, const std::string& column,
                                 size_t line_no) {
  double v = 0.0;
  if (!absl::SimpleAtod(cell, &v) || !std::isfinite(v)) {
    return InvalidArgument("ParseError", absl::StrCat("line ", line_no, ": column ", column,
                                                      " value '", cell, "' is not a number"));
  }
  return v;
}

struct PrivatizeFlags {
  std::string input;
  std::string column;
  std::string features;
};

absl::Status RunPrivatize(const CommonFlags& f, const PrivatizeFlags& p) {
  if (f.config.empty()) return InvalidArgument("ValidationError", "--config: mechanism config required");
  INTPRIV_ASSIGN_OR_RETURN(json j, LoadConfig(f.config));
  INTPRIV_ASSIGN_OR_RETURN(MechanismConfig mech, MechanismConfig::FromJson(j));
  if (mech.progressive()) {
    return InvalidArgument("ValidationError",
                           "progressive: multi-round flows are interactive; use serve");
  }
  const uint64_t seed = f.seed.value_or(2022);
  INTPRIV_ASSIGN_OR_RETURN(std::string text, ReadFile(p.input));
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  if (!std::getline(in, line)) return InvalidArgument("ParseError", "line 1: missing header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  INTPRIV_ASSIGN_OR_RETURN(std::vector<std::string> header, SplitCsvLine(line, line_no));
  const auto index_of = [&](const std::string& name) -> absl::StatusOr<size_t> {
    for (size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return k;
    }
    return InvalidArgument("ValidationError", absl::StrCat("--column: no column named ", name));
  };
  INTPRIV_ASSIGN_OR_RETURN(size_t target, index_of(p.column));
  std::vector<std::string> feature_names;
  std::vector<size_t> feature_cols;
  if (!p.features.empty()) {
    feature_names = absl::StrSplit(p.features, ',');
    for (const std::string& name : feature_names) {
      INTPRIV_ASSIGN_OR_RETURN(size_t k, index_of(name));
      feature_cols.push_back(k);
    }
  }
  std::string out;
  uint64_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    INTPRIV_ASSIGN_OR_RETURN(std::vector<std::string> cells, SplitCsvLine(line, line_no));
    if (cells.size() != header.size()) {
      return InvalidArgument("ParseError", absl::StrCat("line ", line_no, ": expected ",
                                                        header.size(), " fields, got ",
                                                        cells.size()));
    }
    INTPRIV_ASSIGN_OR_RETURN(double y, ParseCell(cells[target], p.column, line_no));
    std::vector<double> features;
    for (size_t k = 0; k < feature_cols.size(); ++k) {
      INTPRIV_ASSIGN_OR_RETURN(double v, ParseCell(cells[feature_cols[k]], feature_names[k], line_no));
      features.push_back(v);
    }
    Rng rng(DeriveSeed(seed, {row}));
    const json meta = {{"row", row}};
    WireRecord record = NullRecord{meta};
    std::optional<PrivatizedRecord> emitted;
    if (mech.selective()) {
      INTPRIV_ASSIGN_OR_RETURN(SelectiveOutcome o, PrivatizeSelective(y, mech, rng));
      if (auto* r = std::get_if<PrivatizedRecord>(&o.record)) emitted = std::move(*r);
    } else {
      INTPRIV_ASSIGN_OR_RETURN(emitted, Privatize(y, mech, rng));
    }
    if (emitted) {
      PrivatizedRecord tagged = emitted->WithMeta(meta);
      if (!feature_cols.empty()) tagged = tagged.WithFeatures(features);
      record = std::move(tagged);
    }
    absl::StrAppend(&out, ToJsonLine(record), "\n");
    ++row;
  }
  if (f.out.empty()) {
    std::cout << out;
    return absl::OkStatus();
  }
  INTPRIV_RETURN_IF_ERROR(WriteFile(f.out, out));
  json config = {{"mechanism", mech.ToJson()},
                 {"input", p.input},
                 {"column", p.column},
                 {"features", feature_names}};
  return WriteFile(f.out + ".manifest.json", Manifest("privatize", config, seed).dump(2) + "\n");
}

absl::Status RunEstimate(const CommonFlags& f, const std::string& input, const std::string& format) {
  if (format != "json" && format != "csv") {
    return InvalidArgument("ValidationError", "--format: must be json or csv");
  }
  INTPRIV_ASSIGN_OR_RETURN(std::vector<WireRecord> records, LoadRecords(input));
  NpmleOptions opts;
  INTPRIV_ASSIGN_OR_RETURN(NpmleResult fit, Npmle(std::span<const WireRecord>(records), opts));
  const std::string text = format == "csv" ? fit.ToCsv() : fit.ToJson().dump(2) + "\n";
  if (f.out.empty()) {
    std::cout << text;
    return absl::OkStatus();
  }
  return WriteFile(f.out, text);
}

struct ServeFlags {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string log;
};

absl::Status RunServe(const CommonFlags& f, const ServeFlags& s) {
  // Block the shutdown signals before any thread starts so that only the
  // waiter below receives them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  std::unique_ptr<EventLog> log;
  if (!s.log.empty()) {
    INTPRIV_ASSIGN_OR_RETURN(log, EventLog::Open(s.log));
  }
  SurveyService::Options opts;
  opts.seed = f.seed.value_or(1);
  INTPRIV_ASSIGN_OR_RETURN(std::unique_ptr<SurveyService> service,
                           SurveyService::Create(std::move(log), opts));
  HttpServer server(service.get());
  INTPRIV_ASSIGN_OR_RETURN(int port, server.Bind(s.host, s.port));
  std::cerr << "listening on " << s.host << ":" << port << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    server.Stop();
  });
  const absl::Status served = server.Serve();
  // Serve can also end on its own; wake the waiter in that case.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return served;
}

void AddCommon(CLI::App* app, CommonFlags& f, bool with_reps) {
  app->add_option("--config", f.config, "JSON config file");
  app->add_option("--seed", f.seed, "master seed");
  if (with_reps) app->add_option("--reps", f.reps, "replications")->check(CLI::PositiveNumber);
  app->add_option("--out", f.out, "output directory (experiments) or file");
  app->add_option("--threads", f.threads, "OpenMP threads; results do not depend on it")
      ->check(CLI::NonNegativeNumber);
}

int Main(int argc, char** argv) {
  CLI::App app{"Interval privacy toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", INTPRIV_VERSION);

  CommonFlags common;
  std::string input, format = "json";
  PrivatizeFlags pf;
  ServeFlags sf;

  auto* moment = app.add_subcommand("moment-exp", "moment estimation table");
  AddCommon(moment, common, true);
  auto* regression = app.add_subcommand("regression-exp", "interval regression traces");
  AddCommon(regression, common, true);
  regression->add_option("--input", input, "fit privatized records (JSON lines) instead");
  auto* tradeoff = app.add_subcommand("tradeoff", "coverage versus prediction error sweep");
  AddCommon(tradeoff, common, true);
  auto* progressive = app.add_subcommand("progressive", "multi-round versus first-round survey");
  AddCommon(progressive, common, true);
  auto* privatize = app.add_subcommand("privatize", "privatize one CSV column");
  AddCommon(privatize, common, false);
  privatize->add_option("--input", pf.input, "CSV file with a header row, or -")->required();
  privatize->add_option("--column", pf.column, "column to privatize")->required();
  privatize->add_option("--features", pf.features, "comma-separated feature columns");
  auto* estimate = app.add_subcommand("estimate", "NPMLE of privatized records");
  AddCommon(estimate, common, false);
  estimate->add_option("--input", input, "JSON-lines records, or -")->required();
  estimate->add_option("--format", format, "json or csv");
  auto* serve = app.add_subcommand("serve", "run the survey service");
  serve->add_option("--seed", common.seed, "service seed");
  serve->add_option("--threads", common.threads, "OpenMP threads");
  serve->add_option("--host", sf.host, "bind address");
  serve->add_option("--port", sf.port, "port; 0 picks a free one");
  serve->add_option("--log", sf.log, "event log; replayed on start");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  ApplyThreads(common);

  absl::Status status;
  if (moment->parsed()) status = RunMoment(common);
  if (regression->parsed()) status = RunRegression(common, input);
  if (tradeoff->parsed()) status = RunTradeoff(common);
  if (progressive->parsed()) status = RunProgressive(common);
  if (privatize->parsed()) status = RunPrivatize(common, pf);
  if (estimate->parsed()) status = RunEstimate(common, input, format);
  if (serve->parsed()) status = RunServe(common, sf);
  if (!status.ok()) {
    std::cerr << "error: " << status.message() << std::endl;
    return ExitCodeFor(status);
  }
  return 0;
}

}  // namespace
}  // namespace intpriv

int main(int argc, char** argv) { return intpriv::Main(argc, argv); }
