// SPDX-License-Identifier: Apache-2.0
//
// blindris: blind cascaded-channel estimation for RIS-assisted mmWave uplinks
// Copyright (C) 2026 The blindris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BLINDRIS_EXPERIMENT_HPP
#define BLINDRIS_EXPERIMENT_HPP

#include "blindris/airlink.hpp"
#include "blindris/cascade.hpp"
#include "blindris/channel.hpp"
#include "blindris/config.hpp"
#include "blindris/metrics.hpp"
#include "blindris/recovery.hpp"
#include "blindris/ris.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace blindris::harness {

enum class ScheduleSource { random, optimized, file };

std::string_view source_name(ScheduleSource s);
ScheduleSource parse_source(std::string_view s); // throws ConfigError

struct ExperimentSpec {
    SystemConfig base;
    std::vector<double> snr_db{0.0, 5.0, 10.0, 15.0, 20.0};
    // Empty axes fall back to the base config value.
    std::vector<std::size_t> m_values;
    std::vector<std::size_t> j_values;
    std::vector<std::size_t> k_values;
    std::vector<ScheduleSource> schedules{ScheduleSource::random};
    std::string schedule_file;
    std::size_t trials = 100;
    std::uint64_t master_seed = 1;
    bool freeze_codebook = false;
    std::size_t somp_iters = 0; // 0 = K
    std::optional<double> omp_residual_threshold;
    ris::OptimizerOptions optimizer;
    std::size_t threads = 1;
    std::string csv_path;
    std::string svg_prefix;
    std::string records_path;

    // Throws ConfigError if any sweep point is invalid.
    void validate() const;
};

struct SweepPoint {
    std::size_t index = 0;
    SystemConfig cfg; // snr_db, M, J, K already substituted
    ScheduleSource schedule = ScheduleSource::random;
};

// Cartesian product in the fixed order K, J, M, schedule, SNR (SNR fastest).
std::vector<SweepPoint> expand(const ExperimentSpec& spec);

struct TrialRecord {
    std::size_t point = 0;
    std::size_t trial = 0;
    double snr_db = 0.0;
    std::vector<double> nmse_linear; // per user
    std::vector<double> nmse_db;
    metrics::BerCounts ber;
    std::size_t failed_users = 0; // cascade estimate could not be formed
    bool failed = false;          // the trial aborted; counted as total loss
    std::string failure;
    double runtime_s = 0.0;
};

// Everything one trial produced, for the demo command and the tests.
struct TrialArtifacts {
    channel::SteeringDictionary dict;
    airlink::TransmissionScenario scenario;
    airlink::ReceivedBlocks received;
    recovery::RecoveryOutput recovery;
    cascade::SensingMatrix sensing;
    cascade::CascadeEstimate estimate;
};

// Per-point state shared read-only by all trials of that point.
struct PointContext {
    SweepPoint point;
    channel::SteeringDictionary dict;
    std::shared_ptr<const ris::PhaseSchedule> fixed_schedule; // optimized or file sources
    std::shared_ptr<const cascade::SensingMatrix> fixed_sensing;
};

// Builds the point context; an optimized schedule is computed here once,
// from an init seeded by (master seed, N_R, J).
PointContext prepare_point(const ExperimentSpec& spec, const SweepPoint& point);

// Random streams per trial are derived from (master seed, trial, stream), not
// from the sweep point, so every point of a sweep sees the same channels,
// codebooks and messages (common random numbers across the sweep).
TrialArtifacts simulate_trial(const ExperimentSpec& spec, const PointContext& ctx, std::size_t trial);
TrialRecord score_trial(const PointContext& ctx, std::size_t trial, const TrialArtifacts& art);
TrialRecord run_trial(const ExperimentSpec& spec, const PointContext& ctx, std::size_t trial);

struct PointSummary {
    SweepPoint point;
    std::size_t trials = 0;
    std::size_t failed_trials = 0;
    metrics::BerCounts ber;
    double nmse_linear = 0.0; // mean over trials and users
    double nmse_db = 0.0;     // dB of nmse_linear
    double data_rate = 0.0;
};

// Order-independent aggregation of one point's records.
PointSummary summarize(const SweepPoint& point, std::span<const TrialRecord> records);

struct ExperimentResult {
    std::vector<PointSummary> points;
};

using RecordSink = std::function<void(const SweepPoint&, std::span<const TrialRecord>)>;

// Runs every point; trials of a point are spread over spec.threads workers
// and written back by trial index, so results do not depend on the thread
// count. The sink, if given, sees each point's records in trial order.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RecordSink& sink = {});

} // namespace blindris::harness

#endif
