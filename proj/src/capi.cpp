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

#include "frida/frida.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "config.hpp"
#include "rng.hpp"
#include "selftest.hpp"
#include "wav.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

frida_status fail(frida_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
frida_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(FRIDA_ERR_INVALID_ARGUMENT, e.what());
  } catch (const frida::IoError& e) {
    return fail(FRIDA_ERR_IO, e.what());
  } catch (const frida::NumericalError& e) {
    return fail(FRIDA_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FRIDA_ERR_NOMEM, "out of memory");
  } catch (const std::exception& e) {
    return fail(FRIDA_ERR_INTERNAL, e.what());
  }
}

nlohmann::ordered_json estimator_report(const frida::EstimatorSpec& spec,
                                        const frida::SnapshotTensor& snap,
                                        const frida::ArrayGeometry& geom,
                                        int num_sources, std::uint64_t seed,
                                        bool dump_visibilities) {
  nlohmann::ordered_json out;
  out["name"] = spec.name;
  std::vector<double> angles;
  if (spec.name == "frida") {
    frida::FridaRunDetail detail;
    angles = frida::run_frida(snap, geom, num_sources, spec.frida, seed, &detail);
    out["bands_used"] = detail.bands_used;
    out["details"] = nlohmann::ordered_json::parse(estimate_to_json(detail.estimate));
    if (dump_visibilities) {
      const auto vis = frida::estimate_visibilities(snap, detail.bands_used);
      out["visibilities"] =
          nlohmann::ordered_json::parse(visibilities_to_json(vis, detail.bands_used));
    }
  } else {
    const auto bins = frida::select_bands(snap, spec.grid.bands, frida::BandPolicy::kMaxPower);
    const frida::GridSearchResult res =
        spec.name == "music"
            ? frida::music_incoherent(snap, geom, bins, num_sources,
                                      frida::AngularGrid{spec.grid.grid_resolution})
            : frida::srp_phat(snap, geom, bins, num_sources,
                              frida::AngularGrid{spec.grid.grid_resolution});
    angles = res.azimuths;
    out["bands_used"] = bins;
    out["low_confidence"] = res.low_confidence;
  }
  out["azimuths_rad"] = angles;
  std::vector<double> deg;
  for (double a : angles) deg.push_back(frida::rad_to_deg(a));
  out["azimuths_deg"] = deg;
  return out;
}

}  // namespace

extern "C" {

struct frida_array {
  frida::ArrayGeometry geom;
};

struct frida_estimate {
  frida::DoaEstimate est;
  std::vector<double> band_omegas;
};

const char* frida_version(void) { return "0.1.0"; }

const char* frida_status_string(frida_status status) {
  switch (status) {
    case FRIDA_OK: return "ok";
    case FRIDA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FRIDA_ERR_NUMERICAL: return "numerical failure";
    case FRIDA_ERR_IO: return "i/o error";
    case FRIDA_ERR_NOMEM: return "out of memory";
    default: return "internal error";
  }
}

const char* frida_last_error(void) { return g_last_error.c_str(); }

void frida_string_free(char* str) { std::free(str); }

frida_status frida_array_create(const double* xy, int32_t num_mics,
                                double speed_of_sound, frida_array** out) {
  if (!xy || !out) return fail(FRIDA_ERR_INVALID_ARGUMENT, "null pointer argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<Eigen::Vector2d> pos;
    for (int32_t i = 0; i < num_mics; ++i) pos.emplace_back(xy[2 * i], xy[2 * i + 1]);
    *out = new frida_array{frida::ArrayGeometry(std::move(pos), speed_of_sound)};
    return FRIDA_OK;
  });
}

frida_status frida_array_create_triangular(double edge_m, int32_t mics_per_edge,
                                           double speed_of_sound, frida_array** out) {
  if (!out) return fail(FRIDA_ERR_INVALID_ARGUMENT, "null pointer argument");
  *out = nullptr;
  return guarded([&] {
    *out = new frida_array{
        frida::build_triangular_array(edge_m, mics_per_edge, speed_of_sound)};
    return FRIDA_OK;
  });
}

frida_status frida_array_load(const char* path, frida_array** out) {
  if (!path || !out) return fail(FRIDA_ERR_INVALID_ARGUMENT, "null pointer argument");
  *out = nullptr;
  return guarded([&] {
    *out = new frida_array{frida::load_geometry_file(path)};
    return FRIDA_OK;
  });
}

int32_t frida_array_num_mics(const frida_array* array) {
  return array ? array->geom.num_mics() : 0;
}

frida_status frida_array_position(const frida_array* array, int32_t index,
                                  double* x, double* y) {
  if (!array || !x || !y) return fail(FRIDA_ERR_INVALID_ARGUMENT, "null pointer argument");
  if (index < 0 || index >= array->geom.num_mics())
    return fail(FRIDA_ERR_INVALID_ARGUMENT, "mic index out of range");
  *x = array->geom.position(index).x();
  *y = array->geom.position(index).y();
  return FRIDA_OK;
}

void frida_array_free(frida_array* array) { delete array; }

frida_status frida_estimate_doa(const frida_array* array, const double* samples,
                                int32_t num_channels, int64_t num_samples,
                                double sample_rate, int32_t num_sources,
                                const char* options_json, frida_estimate** out) {
  if (!array || !samples || !out)
    return fail(FRIDA_ERR_INVALID_ARGUMENT, "null pointer argument");
  *out = nullptr;
  return guarded([&] {
    if (num_channels != array->geom.num_mics())
      throw std::invalid_argument("channel count does not match the geometry");
    if (num_samples < 4) throw std::invalid_argument("too few samples");

    std::string algorithm = "frida";
    int fft_size = 256;
    std::uint64_t seed = 0;
    frida::FridaEstimatorOptions fopts;
    frida::GridEstimatorOptions gopts;
    if (options_json && *options_json) {
      const auto j = nlohmann::json::parse(options_json, nullptr, false);
      if (j.is_discarded()) throw std::invalid_argument("options: malformed JSON");
      for (const auto& [key, _] : j.items())
        if (key != "algorithm" && key != "bands" && key != "fft_size" &&
            key != "grid_resolution" && key != "solver" && key != "seed")
          throw std::invalid_argument("options: unknown key \"" + key + "\"");
      algorithm = j.value("algorithm", algorithm);
      fft_size = j.value("fft_size", fft_size);
      seed = j.value("seed", seed);
      fopts.bands = gopts.bands = j.value("bands", fopts.bands);
      gopts.grid_resolution = j.value("grid_resolution", gopts.grid_resolution);
      if (j.contains("solver")) {
        // reuse the config-schema solver block
        nlohmann::json wrap;
        wrap["estimators"] =
            nlohmann::json::array({{{"name", "frida"}, {"solver", j["solver"]}}});
        fopts.solver = frida::parse_config(wrap.dump()).estimators[0].frida.solver;
      }
    }

    frida::MultichannelSignal sig;
    sig.sample_rate = sample_rate;
    sig.channels.resize(num_channels);
    for (int32_t c = 0; c < num_channels; ++c)
      sig.channels[c].assign(samples + c * num_samples, samples + (c + 1) * num_samples);
    const auto snap = frida::stft(sig, fft_size);

    auto result = std::make_unique<frida_estimate>();
    if (algorithm == "frida") {
      frida::FridaRunDetail detail;
      frida::run_frida(snap, array->geom, num_sources, fopts, seed, &detail);
      result->est = std::move(detail.estimate);
      for (int bin : detail.bands_used)
        result->band_omegas.push_back(snap.bin_frequencies[bin]);
    } else if (algorithm == "music" || algorithm == "srp-phat") {
      const auto bins = frida::select_bands(snap, gopts.bands, frida::BandPolicy::kMaxPower);
      const auto res = algorithm == "music"
                           ? frida::music_incoherent(snap, array->geom, bins, num_sources,
                                                     frida::AngularGrid{gopts.grid_resolution})
                           : frida::srp_phat(snap, array->geom, bins, num_sources,
                                             frida::AngularGrid{gopts.grid_resolution});
      result->est.azimuths = res.azimuths;
      result->est.degenerate = res.low_confidence;
      for (int bin : bins) result->band_omegas.push_back(snap.bin_frequencies[bin]);
    } else {
      throw std::invalid_argument("options.algorithm must be frida, music or srp-phat");
    }
    *out = result.release();
    return FRIDA_OK;
  });
}

int32_t frida_estimate_num_sources(const frida_estimate* est) {
  return est ? static_cast<int32_t>(est->est.azimuths.size()) : 0;
}

int32_t frida_estimate_num_bands(const frida_estimate* est) {
  return est ? static_cast<int32_t>(est->band_omegas.size()) : 0;
}

frida_status frida_estimate_azimuths(const frida_estimate* est, double* out) {
  if (!est || !out) return fail(FRIDA_ERR_INVALID_ARGUMENT, "null pointer argument");
  for (std::size_t i = 0; i < est->est.azimuths.size(); ++i) out[i] = est->est.azimuths[i];
  return FRIDA_OK;
}

frida_status frida_estimate_powers(const frida_estimate* est, double* out) {
  if (!est || !out) return fail(FRIDA_ERR_INVALID_ARGUMENT, "null pointer argument");
  const auto& p = est->est.powers;
  for (int r = 0; r < p.rows(); ++r)
    for (int c = 0; c < p.cols(); ++c) out[r * p.cols() + c] = p(r, c);
  return FRIDA_OK;
}

double frida_estimate_residual(const frida_estimate* est) {
  return est ? est->est.residual : 0.0;
}

frida_status frida_estimate_to_json(const frida_estimate* est, char** json_out) {
  if (!est || !json_out) return fail(FRIDA_ERR_INVALID_ARGUMENT, "null pointer argument");
  *json_out = dup_string(frida::estimate_to_json(est->est));
  return *json_out ? FRIDA_OK : fail(FRIDA_ERR_NOMEM, "out of memory");
}

void frida_estimate_free(frida_estimate* est) { delete est; }

frida_status frida_config_resolve(const char* config_json, char** effective_json_out) {
  if (!config_json || !effective_json_out)
    return fail(FRIDA_ERR_INVALID_ARGUMENT, "null pointer argument");
  *effective_json_out = nullptr;
  return guarded([&] {
    const auto cfg = frida::parse_config(config_json);
    *effective_json_out = dup_string(cfg.effective_json());
    return *effective_json_out ? FRIDA_OK : fail(FRIDA_ERR_NOMEM, "out of memory");
  });
}

frida_status frida_run_estimate(const char* config_json, const char* wav_path,
                                char** result_json_out) {
  if (!config_json || !result_json_out)
    return fail(FRIDA_ERR_INVALID_ARGUMENT, "null pointer argument");
  *result_json_out = nullptr;
  return guarded([&] {
    const auto cfg = frida::parse_config(config_json);
    const auto geom = cfg.geometry.build();

    nlohmann::ordered_json report;
    report["effective_config"] = nlohmann::ordered_json::parse(cfg.effective_json());

    frida::SnapshotTensor snap;
    if (wav_path && *wav_path) {
      const auto sig = frida::load_wav(wav_path);
      if (sig.num_channels() != geom.num_mics())
        throw frida::IoError("wav channel count (" + std::to_string(sig.num_channels()) +
                             ") does not match geometry (" +
                             std::to_string(geom.num_mics()) + " mics): " + wav_path);
      snap = frida::stft(sig, cfg.fft_size);
      report["input"] = std::string("wav:") + wav_path;
      report["truth_deg"] = nullptr;
    } else {
      frida::SourceScenario scenario;
      if (cfg.scenario.azimuths_deg) {
        for (double d : *cfg.scenario.azimuths_deg)
          scenario.azimuths.push_back(frida::wrap_to_2pi(frida::deg_to_rad(d)));
      } else {
        frida::Rng rng(frida::mix_seed(cfg.seed, 0x00));
        for (int i = 0; i < cfg.scenario.num_sources; ++i)
          scenario.azimuths.push_back(rng.uniform(0.0, frida::kTwoPi));
      }
      scenario.duration_samples =
          static_cast<std::int64_t>(cfg.scenario.num_snapshots) * cfg.fft_size;
      scenario.sample_rate = cfg.scenario.sample_rate;
      auto sig = frida::simulate_farfield(geom, scenario, frida::mix_seed(cfg.seed, 0x01));
      if (cfg.scenario.snr_db)
        sig = frida::add_noise(sig, *cfg.scenario.snr_db, frida::mix_seed(cfg.seed, 0x02));
      snap = frida::stft(sig, cfg.fft_size);
      report["input"] = "synthetic";
      std::vector<double> deg;
      for (double a : scenario.azimuths) deg.push_back(frida::rad_to_deg(a));
      report["truth_deg"] = deg;
    }

    auto arr = nlohmann::ordered_json::array();
    for (const auto& spec : cfg.estimators) {
      const std::uint64_t seed =
          frida::mix_seed(cfg.seed, frida::fnv1a(spec.name.c_str()));
      arr.push_back(estimator_report(spec, snap, geom, cfg.scenario.num_sources, seed,
                                     cfg.output.dump_visibilities));
    }
    report["estimators"] = std::move(arr);

    *result_json_out = dup_string(report.dump(2));
    return *result_json_out ? FRIDA_OK : fail(FRIDA_ERR_NOMEM, "out of memory");
  });
}

frida_status frida_run_benchmark(const char* config_json, const char* output_dir,
                                 char** summary_json_out) {
  if (!config_json || !summary_json_out)
    return fail(FRIDA_ERR_INVALID_ARGUMENT, "null pointer argument");
  *summary_json_out = nullptr;
  return guarded([&] {
    const auto cfg = frida::parse_config(config_json);
    if (!cfg.sweep) throw std::invalid_argument("config: benchmark needs a sweep block");
    const auto geom = cfg.geometry.build();

    std::vector<frida::Estimator> estimators;
    for (const auto& spec : cfg.estimators) estimators.push_back(spec.make());

    frida::SweepProtocol proto;
    proto.num_snapshots = cfg.scenario.num_snapshots;
    proto.fft_size = cfg.fft_size;
    proto.sample_rate = cfg.scenario.sample_rate;
    proto.workers = cfg.workers;
    proto.success_threshold_deg = cfg.sweep->success_threshold_deg;

    frida::SweepResult result;
    if (cfg.sweep->type == "snr") {
      result = frida::snr_sweep(estimators, cfg.sweep->snr_db, cfg.sweep->trials,
                                cfg.scenario.num_sources, geom, proto, cfg.seed);
    } else {
      result = frida::separation_sweep(estimators, cfg.sweep->delta_deg,
                                       cfg.sweep->trials_per_phi, cfg.sweep->phi_count,
                                       cfg.sweep->fixed_snr_db, geom, proto, cfg.seed);
    }

    const std::string dir = (output_dir && *output_dir) ? output_dir : cfg.output.dir;
    std::filesystem::create_directories(dir);
    const std::string base =
        (std::filesystem::path(dir) / (cfg.output.prefix + "_" + result.sweep_type))
            .string();
    const std::string csv_path = base + ".csv";
    const std::string json_path = base + ".json";
    const std::string cfg_path = base + "_effective_config.json";
    {
      std::ofstream f(csv_path, std::ios::binary);
      if (!f) throw frida::IoError("benchmark: cannot write " + csv_path);
      f << frida::sweep_to_csv(result);
    }
    {
      std::ofstream f(json_path, std::ios::binary);
      if (!f) throw frida::IoError("benchmark: cannot write " + json_path);
      f << frida::sweep_to_json(result);
    }
    {
      std::ofstream f(cfg_path, std::ios::binary);
      if (!f) throw frida::IoError("benchmark: cannot write " + cfg_path);
      f << cfg.effective_json();
    }

    nlohmann::ordered_json summary;
    summary["csv"] = csv_path;
    summary["json"] = json_path;
    summary["effective_config"] = cfg_path;
    auto aggs = nlohmann::ordered_json::array();
    for (const auto& a : result.aggregates) {
      nlohmann::ordered_json ja;
      ja["estimator"] = a.estimator;
      ja["sweep_value"] = a.sweep_value;
      ja["mean_error_deg"] = a.mean_error_deg;
      ja["median_error_deg"] = a.median_error_deg;
      ja["success_rate"] = a.success_rate;
      ja["recovered_mean"] = a.recovered_mean;
      ja["trials"] = a.trials;
      aggs.push_back(std::move(ja));
    }
    summary["aggregates"] = std::move(aggs);

    *summary_json_out = dup_string(summary.dump(2));
    return *summary_json_out ? FRIDA_OK : fail(FRIDA_ERR_NOMEM, "out of memory");
  });
}

frida_status frida_selftest(const char* options_json, char** report_json_out) {
  if (!report_json_out) return fail(FRIDA_ERR_INVALID_ARGUMENT, "null pointer argument");
  *report_json_out = nullptr;
  return guarded([&]() -> frida_status {
    bool inject = false;
    if (options_json && *options_json) {
      const auto j = nlohmann::json::parse(options_json, nullptr, false);
      if (j.is_discarded()) throw std::invalid_argument("options: malformed JSON");
      inject = j.value("inject_bessel_fault", false);
    }
    const auto report = frida::run_selftest(inject);
    *report_json_out = dup_string(frida::selftest_to_json(report));
    if (!*report_json_out) return fail(FRIDA_ERR_NOMEM, "out of memory");
    if (!report.all_passed())
      return fail(FRIDA_ERR_NUMERICAL, "self-test checks failed");
    return FRIDA_OK;
  });
}

}  // extern "C"
