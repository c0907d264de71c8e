// Copyright 2026 The frida-doa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front end; talks to the library through the C API only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "frida/frida.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

int status_to_exit(frida_status s) {
  switch (s) {
    case FRIDA_OK: return kExitOk;
    case FRIDA_ERR_INVALID_ARGUMENT:
    case FRIDA_ERR_IO: return kExitUsage;
    default: return kExitNumerical;
  }
}

int report_failure(frida_status s, const std::string& what) {
  std::cerr << "error: " << what << ": " << frida_status_string(s) << " ("
            << frida_last_error() << ")\n";
  return status_to_exit(s);
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> output_dir;
};

// Load the config file and fold in command-line overrides.
std::optional<std::string> load_config(const std::string& path, const Overrides& ov,
                                       std::string* error) {
  std::ifstream in(path);
  if (!in) {
    *error = "cannot open config file: " + path;
    return std::nullopt;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  auto j = nlohmann::json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) {
    *error = "malformed JSON in config file: " + path;
    return std::nullopt;
  }
  if (ov.seed) j["seed"] = *ov.seed;
  if (ov.workers) j["workers"] = *ov.workers;
  if (ov.output_dir) j["output"]["dir"] = *ov.output_dir;
  return j.dump();
}

void print_estimate_report(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  std::printf("input: %s\n", j["input"].get<std::string>().c_str());
  if (!j["truth_deg"].is_null()) {
    std::printf("truth (deg):");
    for (const auto& v : j["truth_deg"]) std::printf(" %.3f", v.get<double>());
    std::printf("\n");
  }
  for (const auto& e : j["estimators"]) {
    std::printf("%s:\n  azimuths (deg):", e["name"].get<std::string>().c_str());
    for (const auto& v : e["azimuths_deg"]) std::printf(" %.3f", v.get<double>());
    std::printf("\n");
    if (e.contains("details")) {
      const auto& d = e["details"];
      std::printf("  residual: %.6g  iterations: %d  restarts: %d\n",
                  d["residual"].get<double>(), d["iterations_used"].get<int>(),
                  d["restarts_used"].get<int>());
      std::printf("  per-band powers:\n");
      for (const auto& row : d["powers"]) {
        std::printf("   ");
        for (const auto& v : row) std::printf(" %.4g", v.get<double>());
        std::printf("\n");
      }
    }
    if (e.contains("low_confidence") && e["low_confidence"].get<bool>())
      std::printf("  (low confidence: flat response)\n");
  }
}

void print_benchmark_summary(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  std::printf("wrote %s\n", j["csv"].get<std::string>().c_str());
  std::printf("wrote %s\n", j["json"].get<std::string>().c_str());
  std::printf("wrote %s\n", j["effective_config"].get<std::string>().c_str());
  std::printf("%-10s %12s %12s %12s %10s %10s\n", "estimator", "value", "mean[deg]",
              "median[deg]", "success", "recovered");
  for (const auto& a : j["aggregates"]) {
    std::printf("%-10s %12.3f %12.4f %12.4f %10.3f %10.3f\n",
                a["estimator"].get<std::string>().c_str(),
                a["sweep_value"].get<double>(), a["mean_error_deg"].get<double>(),
                a["median_error_deg"].get<double>(), a["success_rate"].get<double>(),
                a["recovered_mean"].get<double>());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wideband direction-of-arrival estimation (FRIDA, MUSIC, SRP-PHAT)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string input_wav;
  std::string output_dir_flag;
  std::uint64_t seed_flag = 0;
  int workers_flag = 0;
  bool json_out = false;
  bool dry_run = false;
  bool inject_fault = false;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "JSON experiment config");
    if (needs_config) opt->required();
    cmd->add_option("--seed", seed_flag, "override the master seed")->capture_default_str();
    cmd->add_option("--workers", workers_flag, "worker threads (0 = all cores)");
    cmd->add_option("--output-dir", output_dir_flag, "override the output directory");
  };

  auto* est = app.add_subcommand("estimate", "run the estimators once and print DOAs");
  add_common(est, true);
  est->add_option("--input", input_wav, "multichannel WAV input instead of synthesis");
  est->add_flag("--json", json_out, "print the machine-readable report");

  auto* bench = app.add_subcommand("benchmark", "run the configured Monte Carlo sweep");
  add_common(bench, true);
  bench->add_flag("--dry-run", dry_run, "print the resolved config and exit");

  auto* self = app.add_subcommand("selftest", "run the built-in oracle checks");
  self->add_flag("--json", json_out, "print the machine-readable report");
  self->add_flag("--inject-bessel-fault", inject_fault,
                 "deliberately perturb the Bessel evaluator (failure-path test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Overrides ov;
  if (est->count("--seed") || bench->count("--seed")) ov.seed = seed_flag;
  if (est->count("--workers") || bench->count("--workers")) ov.workers = workers_flag;
  if (!output_dir_flag.empty()) ov.output_dir = output_dir_flag;

  if (self->parsed()) {
    nlohmann::json opts;
    opts["inject_bessel_fault"] = inject_fault;
    char* report = nullptr;
    const frida_status s = frida_selftest(opts.dump().c_str(), &report);
    if (report) {
      if (json_out) {
        std::printf("%s\n", report);
      } else {
        const auto j = nlohmann::json::parse(report);
        for (const auto& c : j["checks"])
          std::printf("%-26s %s  (%s)\n", c["name"].get<std::string>().c_str(),
                      c["passed"].get<bool>() ? "PASS" : "FAIL",
                      c["detail"].get<std::string>().c_str());
        std::printf("self-test: %s\n", j["all_passed"].get<bool>() ? "PASS" : "FAIL");
      }
      frida_string_free(report);
    }
    if (s == FRIDA_OK) return kExitOk;
    return s == FRIDA_ERR_NUMERICAL ? kExitNumerical : report_failure(s, "selftest");
  }

  std::string error;
  const auto config = load_config(config_path, ov, &error);
  if (!config) {
    std::cerr << "error: " << error << "\n";
    return kExitUsage;
  }

  if (est->parsed()) {
    char* result = nullptr;
    const frida_status s = frida_run_estimate(
        config->c_str(), input_wav.empty() ? nullptr : input_wav.c_str(), &result);
    if (s != FRIDA_OK) return report_failure(s, "estimate");
    if (json_out)
      std::printf("%s\n", result);
    else
      print_estimate_report(result);
    frida_string_free(result);
    return kExitOk;
  }

  // benchmark
  if (dry_run) {
    char* effective = nullptr;
    const frida_status s = frida_config_resolve(config->c_str(), &effective);
    if (s != FRIDA_OK) return report_failure(s, "config");
    std::printf("%s\n", effective);
    frida_string_free(effective);
    return kExitOk;
  }
  char* summary = nullptr;
  const frida_status s = frida_run_benchmark(config->c_str(), nullptr, &summary);
  if (s != FRIDA_OK) return report_failure(s, "benchmark");
  print_benchmark_summary(summary);
  frida_string_free(summary);
  return kExitOk;
}
