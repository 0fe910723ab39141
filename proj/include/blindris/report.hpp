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

#ifndef BLINDRIS_REPORT_HPP
#define BLINDRIS_REPORT_HPP

#include "blindris/experiment.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace blindris::report {

inline constexpr std::string_view kCsvHeader =
    "snr_db,m,j,k,schedule,trials,ber_weighted,ber_id,ber_data,nmse_db,erasure_rate,data_rate";

inline constexpr std::string_view kWeightedBerFormula =
    "sum(M_b*e_id + e_dat) / sum(M_b*M_K + (M_b - M_K)) over user-blocks; erased user-blocks count "
    "e_id = M_K, e_dat = M_b - M_K";

std::string to_csv(std::span<const harness::PointSummary> points);

// Sidecar JSON next to the CSV: the weighted-BER formula, NMSE aggregation
// rule, SNR definition, failed-trial counts and the experiment configuration.
std::string metadata_json(const harness::ExperimentSpec& spec, std::span<const harness::PointSummary> points);

// One JSON object per line.
std::string record_line(const harness::SweepPoint& point, const harness::TrialRecord& r);

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::string svg_plot(std::string_view title, std::string_view x_label, std::string_view y_label,
                     std::span<const Series> series, bool log_y);

// Weighted BER (log y) and NMSE curves against SNR, one series per
// (M, J, K, schedule).
std::vector<Series> ber_series(std::span<const harness::PointSummary> points);
std::vector<Series> nmse_series(std::span<const harness::PointSummary> points);

// JSON config document. Sections: system, sweep, codebook, recovery,
// optimizer, run, output. Unknown keys are a ConfigError.
harness::ExperimentSpec spec_from_json(std::string_view text);
std::string spec_to_json(const harness::ExperimentSpec& spec);

void write_file(const std::string& path, std::string_view contents);
std::string read_file(const std::string& path);

} // namespace blindris::report

#endif
