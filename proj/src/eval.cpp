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

#include "eval.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "hungarian.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "sim.hpp"

namespace frida {

double circular_distance(double phi, double phi_hat) {
  if (!std::isfinite(phi) || !std::isfinite(phi_hat))
    throw std::invalid_argument("circular_distance: non-finite angle");
  double d = std::fmod(phi - phi_hat + kPi, kTwoPi);
  if (d < 0.0) d += kTwoPi;
  d -= kPi;
  if (d <= -kPi) d = kPi;  // antipodal case lands on +pi
  return d;
}

MatchReport match_and_score(const std::vector<double>& truth,
                            const std::vector<double>& estimate,
                            double success_threshold) {
  const int k = static_cast<int>(truth.size());
  if (static_cast<int>(estimate.size()) != k)
    throw std::invalid_argument("match_and_score: size mismatch");
  MatchReport report;
  if (k == 0) return report;

  std::vector<int> perm(k);
  if (k == 1) {
    perm[0] = 0;
  } else if (k == 2) {
    const double direct = std::abs(circular_distance(truth[0], estimate[0])) +
                          std::abs(circular_distance(truth[1], estimate[1]));
    const double swapped = std::abs(circular_distance(truth[0], estimate[1])) +
                           std::abs(circular_distance(truth[1], estimate[0]));
    if (direct <= swapped) {
      perm = {0, 1};
    } else {
      perm = {1, 0};
    }
  } else {
    Eigen::MatrixXd cost(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        cost(i, j) = std::abs(circular_distance(truth[i], estimate[j]));
    perm = hungarian(cost);
  }

  report.permutation = perm;
  report.errors.resize(k);
  report.success.resize(k);
  for (int i = 0; i < k; ++i) {
    report.errors[i] = circular_distance(truth[i], estimate[perm[i]]);
    report.total_abs_error += std::abs(report.errors[i]);
    report.success[i] = std::abs(report.errors[i]) < success_threshold;
  }
  return report;
}

std::pair<double, double> circular_mean_spread(const std::vector<double>& samples) {
  if (samples.empty())
    throw std::invalid_argument("circular_mean_spread: empty sample list");
  cplx acc(0.0, 0.0);
  for (double t : samples) acc += cplx(std::cos(t), std::sin(t));
  const double mean = wrap_to_2pi(std::arg(acc));
  double spread = 0.0;
  for (double t : samples) spread += std::abs(circular_distance(t, mean));
  spread /= static_cast<double>(samples.size());
  return {mean, spread};
}

namespace {

std::vector<double> draw_azimuths(Rng& rng, int k, double min_separation_rad) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> az(k);
    for (double& a : az) a = rng.uniform(0.0, kTwoPi);
    bool ok = true;
    for (int i = 0; i < k && ok; ++i)
      for (int j = i + 1; j < k; ++j)
        if (std::abs(circular_distance(az[i], az[j])) < min_separation_rad) {
          ok = false;
          break;
        }
    if (ok) return az;
  }
  throw NumericalError("draw_azimuths: could not draw separated azimuths");
}

struct TrialTask {
  int value_index;
  int trial_index;
};

void aggregate(SweepResult& result, double recover_threshold_for_value_deg,
               bool strict_delta_rule) {
  const int num_values = static_cast<int>(result.sweep_values.size());
  const int num_estimators = static_cast<int>(result.estimator_names.size());
  for (int e = 0; e < num_estimators; ++e) {
    for (int v = 0; v < num_values; ++v) {
      SweepAggregate agg;
      agg.estimator = result.estimator_names[e];
      agg.sweep_value = result.sweep_values[v];
      agg.trials = static_cast<int>(result.trials[v].size());
      const double thr_deg = strict_delta_rule ? result.sweep_values[v] / 2.0
                                               : recover_threshold_for_value_deg;
      std::vector<double> per_trial_mean;
      double err_acc = 0.0;
      std::int64_t err_cnt = 0;
      double recovered_acc = 0.0;
      int success_cnt = 0;
      for (const auto& trial : result.trials[v]) {
        const auto& errs = trial.errors_rad[e];
        double trial_acc = 0.0;
        int recovered = 0;
        for (double err : errs) {
          const double abs_deg = rad_to_deg(std::abs(err));
          trial_acc += abs_deg;
          err_acc += abs_deg;
          ++err_cnt;
          if (abs_deg < thr_deg) ++recovered;
        }
        per_trial_mean.push_back(errs.empty() ? 0.0 : trial_acc / errs.size());
        recovered_acc += recovered;
        if (recovered == static_cast<int>(errs.size())) ++success_cnt;
      }
      agg.mean_error_deg = err_cnt ? err_acc / static_cast<double>(err_cnt) : 0.0;
      std::sort(per_trial_mean.begin(), per_trial_mean.end());
      agg.median_error_deg =
          per_trial_mean.empty()
              ? 0.0
              : (per_trial_mean.size() % 2
                     ? per_trial_mean[per_trial_mean.size() / 2]
                     : 0.5 * (per_trial_mean[per_trial_mean.size() / 2 - 1] +
                              per_trial_mean[per_trial_mean.size() / 2]));
      agg.success_rate = agg.trials ? static_cast<double>(success_cnt) / agg.trials : 0.0;
      agg.recovered_mean = agg.trials ? recovered_acc / agg.trials : 0.0;
      result.aggregates.push_back(std::move(agg));
    }
  }
}

}  // namespace

SweepResult snr_sweep(const std::vector<Estimator>& estimators,
                      const std::vector<double>& snr_db_list, int trials,
                      int num_sources, const ArrayGeometry& geom,
                      const SweepProtocol& proto, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("snr_sweep: trials must be >= 1");
  if (estimators.empty()) throw std::invalid_argument("snr_sweep: no estimators");
  if (snr_db_list.empty()) throw std::invalid_argument("snr_sweep: no sweep values");
  if (num_sources < 1) throw std::invalid_argument("snr_sweep: K must be >= 1");

  SweepResult result;
  result.sweep_type = "snr";
  result.sweep_values = snr_db_list;
  result.master_seed = seed;
  result.trials_per_value = trials;
  result.success_threshold_deg = proto.success_threshold_deg;
  for (const auto& e : estimators) result.estimator_names.push_back(e.name);
  result.trials.assign(snr_db_list.size(), std::vector<SweepResult::Trial>(trials));

  std::vector<TrialTask> tasks;
  for (int v = 0; v < static_cast<int>(snr_db_list.size()); ++v)
    for (int t = 0; t < trials; ++t) tasks.push_back({v, t});

  const double thr_rad = deg_to_rad(proto.success_threshold_deg);
  parallel_for(static_cast<int>(tasks.size()), proto.workers, [&](int task_index) {
    const auto [v, t] = tasks[task_index];
    SweepResult::Trial& slot = result.trials[v][t];
    slot.seed = mix_seed(mix_seed(seed, 0x1000 + v), t);

    Rng rng(mix_seed(slot.seed, 0x00));
    slot.truth_rad = draw_azimuths(rng, num_sources, deg_to_rad(1.0));

    SourceScenario scenario;
    scenario.azimuths = slot.truth_rad;
    scenario.duration_samples =
        static_cast<std::int64_t>(proto.num_snapshots) * proto.fft_size;
    scenario.sample_rate = proto.sample_rate;
    const auto clean = simulate_farfield(geom, scenario, mix_seed(slot.seed, 0x01));
    const auto noisy = add_noise(clean, snr_db_list[v], mix_seed(slot.seed, 0x02));
    const auto snap = stft(noisy, proto.fft_size);

    for (const auto& estimator : estimators) {
      const auto angles = estimator.run(snap, geom, num_sources,
                                        mix_seed(slot.seed, fnv1a(estimator.name.c_str())));
      const auto report = match_and_score(slot.truth_rad, angles, thr_rad);
      slot.estimates_rad.push_back(angles);
      slot.errors_rad.push_back(report.errors);
    }
  });

  aggregate(result, proto.success_threshold_deg, /*strict_delta_rule=*/false);
  return result;
}

SweepResult separation_sweep(const std::vector<Estimator>& estimators,
                             const std::vector<double>& delta_deg_list,
                             int trials_per_phi, int phi_count, double snr_db,
                             const ArrayGeometry& geom, const SweepProtocol& proto,
                             std::uint64_t seed) {
  if (trials_per_phi < 1 || phi_count < 1)
    throw std::invalid_argument("separation_sweep: trials and phi count must be >= 1");
  if (estimators.empty()) throw std::invalid_argument("separation_sweep: no estimators");
  for (double d : delta_deg_list)
    if (!(d > 0.0))
      throw std::invalid_argument("separation_sweep: separations must be positive");

  SweepResult result;
  result.sweep_type = "separation";
  result.sweep_values = delta_deg_list;
  result.master_seed = seed;
  result.trials_per_value = trials_per_phi * phi_count;
  result.success_threshold_deg = 0.0;  // strict delta/2 rule instead
  for (const auto& e : estimators) result.estimator_names.push_back(e.name);
  result.trials.assign(delta_deg_list.size(),
                       std::vector<SweepResult::Trial>(result.trials_per_value));

  std::vector<TrialTask> tasks;
  for (int v = 0; v < static_cast<int>(delta_deg_list.size()); ++v)
    for (int t = 0; t < result.trials_per_value; ++t) tasks.push_back({v, t});

  parallel_for(static_cast<int>(tasks.size()), proto.workers, [&](int task_index) {
    const auto [v, t] = tasks[task_index];
    const int phi_index = t / trials_per_phi;
    SweepResult::Trial& slot = result.trials[v][t];
    slot.seed = mix_seed(mix_seed(seed, 0x2000 + v), t);

    const double phi = kTwoPi * phi_index / phi_count;
    const double delta = deg_to_rad(delta_deg_list[v]);
    slot.truth_rad = {wrap_to_2pi(phi), wrap_to_2pi(phi + delta)};

    SourceScenario scenario;
    scenario.azimuths = slot.truth_rad;
    scenario.duration_samples =
        static_cast<std::int64_t>(proto.num_snapshots) * proto.fft_size;
    scenario.sample_rate = proto.sample_rate;
    const auto clean = simulate_farfield(geom, scenario, mix_seed(slot.seed, 0x01));
    const auto noisy = add_noise(clean, snr_db, mix_seed(slot.seed, 0x02));
    const auto snap = stft(noisy, proto.fft_size);

    const double thr_rad = 0.5 * delta;  // strict: exactly delta/2 is a miss
    for (const auto& estimator : estimators) {
      const auto angles = estimator.run(snap, geom, 2,
                                        mix_seed(slot.seed, fnv1a(estimator.name.c_str())));
      const auto report = match_and_score(slot.truth_rad, angles, thr_rad);
      slot.estimates_rad.push_back(angles);
      slot.errors_rad.push_back(report.errors);
    }
  });

  aggregate(result, 0.0, /*strict_delta_rule=*/true);
  return result;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string sweep_to_csv(const SweepResult& result) {
  std::string out =
      "schema_version,sweep_type,estimator,sweep_value,mean_error_deg,"
      "median_error_deg,success_rate,recovered_mean,trials\n";
  for (const auto& a : result.aggregates) {
    out += "1," + result.sweep_type + "," + a.estimator + "," + fmt_double(a.sweep_value) +
           "," + fmt_double(a.mean_error_deg) + "," + fmt_double(a.median_error_deg) + "," +
           fmt_double(a.success_rate) + "," + fmt_double(a.recovered_mean) + "," +
           std::to_string(a.trials) + "\n";
  }
  return out;
}

std::string sweep_to_json(const SweepResult& result) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["sweep_type"] = result.sweep_type;
  j["master_seed"] = result.master_seed;
  j["sweep_values"] = result.sweep_values;
  j["estimators"] = result.estimator_names;
  j["trials_per_value"] = result.trials_per_value;
  j["success_threshold_deg"] = result.success_threshold_deg;

  auto values = nlohmann::ordered_json::array();
  for (std::size_t v = 0; v < result.sweep_values.size(); ++v) {
    nlohmann::ordered_json jv;
    jv["sweep_value"] = result.sweep_values[v];
    auto trials = nlohmann::ordered_json::array();
    for (const auto& t : result.trials[v]) {
      nlohmann::ordered_json jt;
      jt["seed"] = t.seed;
      jt["truth_rad"] = t.truth_rad;
      auto est = nlohmann::ordered_json::object();
      auto err = nlohmann::ordered_json::object();
      for (std::size_t e = 0; e < result.estimator_names.size(); ++e) {
        est[result.estimator_names[e]] = t.estimates_rad[e];
        err[result.estimator_names[e]] = t.errors_rad[e];
      }
      jt["estimates_rad"] = std::move(est);
      jt["errors_rad"] = std::move(err);
      trials.push_back(std::move(jt));
    }
    jv["trials"] = std::move(trials);
    values.push_back(std::move(jv));
  }
  j["values"] = std::move(values);

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
  j["aggregates"] = std::move(aggs);
  return j.dump(2);
}

}  // namespace frida
