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

#include "blindris/report.hpp"

#include "blindris/errors.hpp"
#include "blindris/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace blindris::report {

using nlohmann::json;

namespace {

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string series_label(const harness::SweepPoint& p) {
    return "M=" + std::to_string(p.cfg.codeword_len) + " J=" + std::to_string(p.cfg.n_blocks) +
           " K=" + std::to_string(p.cfg.n_users) + " " + std::string(harness::source_name(p.schedule));
}

} // namespace

std::string to_csv(std::span<const harness::PointSummary> points) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& s : points) {
        const auto& c = s.point.cfg;
        out += fmt("%g", c.snr_db) + ',' + std::to_string(c.codeword_len) + ',' + std::to_string(c.n_blocks) + ',' +
               std::to_string(c.n_users) + ',' + std::string(harness::source_name(s.point.schedule)) + ',' +
               std::to_string(s.trials) + ',' + fmt("%.6e", s.ber.weighted()) + ',' + fmt("%.6e", s.ber.id_rate()) +
               ',' + fmt("%.6e", s.ber.data_rate()) + ',' + fmt("%.4f", s.nmse_db) + ',' +
               fmt("%.6e", s.ber.erasure_rate()) + ',' + fmt("%.6f", s.data_rate) + '\n';
    }
    return out;
}

std::string metadata_json(const harness::ExperimentSpec& spec, std::span<const harness::PointSummary> points) {
    json j;
    j["csv_header"] = std::string(kCsvHeader);
    j["ber_weighted_formula"] = std::string(kWeightedBerFormula);
    j["nmse_aggregation"] = "mean of per-user per-trial linear NMSE, then 10*log10; floor " +
                            fmt("%g", metrics::kNmseFloorDb) + " dB";
    j["snr_definition"] = "mean |entry|^2 of the noiseless received blocks over all blocks, divided by noise variance";
    j["failed_trial_policy"] = "all user-blocks erased and per-user NMSE = 1";
    json pts = json::array();
    for (const auto& s : points) {
        pts.push_back({{"snr_db", s.point.cfg.snr_db},
                       {"m", s.point.cfg.codeword_len},
                       {"j", s.point.cfg.n_blocks},
                       {"k", s.point.cfg.n_users},
                       {"schedule", std::string(harness::source_name(s.point.schedule))},
                       {"failed_trials", s.failed_trials},
                       {"nmse_linear", s.nmse_linear}});
    }
    j["points"] = std::move(pts);
    j["spec"] = json::parse(spec_to_json(spec));
    return j.dump(2) + "\n";
}

std::string record_line(const harness::SweepPoint& point, const harness::TrialRecord& r) {
    json j{{"point", point.index},
           {"trial", r.trial},
           {"snr_db", r.snr_db},
           {"m", point.cfg.codeword_len},
           {"j", point.cfg.n_blocks},
           {"k", point.cfg.n_users},
           {"schedule", std::string(harness::source_name(point.schedule))},
           {"nmse_linear", r.nmse_linear},
           {"nmse_db", r.nmse_db},
           {"ber_weighted_num", r.ber.weighted_numerator()},
           {"ber_weighted_den", r.ber.weighted_denominator()},
           {"id_bit_errors", r.ber.id_errors},
           {"data_bit_errors", r.ber.data_errors},
           {"erasures", r.ber.erasures},
           {"failed_users", r.failed_users},
           {"failed", r.failed},
           {"runtime_s", r.runtime_s}};
    if (r.failed) {
        j["failure"] = r.failure;
    }
    return j.dump() + "\n";
}

namespace {

std::vector<Series> collect(std::span<const harness::PointSummary> points, bool ber) {
    std::map<std::string, Series> by_label;
    std::vector<std::string> order;
    for (const auto& s : points) {
        const std::string label = series_label(s.point);
        auto [it, inserted] = by_label.try_emplace(label);
        if (inserted) {
            it->second.label = label;
            order.push_back(label);
        }
        it->second.x.push_back(s.point.cfg.snr_db);
        it->second.y.push_back(ber ? s.ber.weighted() : s.nmse_db);
    }
    std::vector<Series> out;
    for (const auto& l : order) {
        out.push_back(by_label[l]);
    }
    return out;
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

} // namespace

std::vector<Series> ber_series(std::span<const harness::PointSummary> points) { return collect(points, true); }
std::vector<Series> nmse_series(std::span<const harness::PointSummary> points) { return collect(points, false); }

std::string svg_plot(std::string_view title, std::string_view x_label, std::string_view y_label,
                     std::span<const Series> series, bool log_y) {
    constexpr double width = 640, height = 420, left = 70, right = 190, top = 40, bottom = 50;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    // Log axes clamp zeros to one decade below the smallest positive value.
    double min_pos = 1.0;
    bool have_pos = false;
    for (const auto& s : series) {
        for (double v : s.y) {
            if (v > 0.0 && (!have_pos || v < min_pos)) {
                min_pos = v;
                have_pos = true;
            }
        }
    }
    const double log_floor = have_pos ? std::floor(std::log10(min_pos)) - 1.0 : -6.0;
    auto ty = [&](double v) { return log_y ? (v > 0.0 ? std::log10(v) : log_floor) : v; };

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double yv = ty(s.y[i]);
            if (first) {
                x0 = x1 = s.x[i];
                y0 = y1 = yv;
                first = false;
            }
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, yv);
            y1 = std::max(y1, yv);
        }
    }
    if (log_y) {
        y0 = std::floor(y0);
        y1 = std::ceil(y1);
    }
    if (x1 == x0) {
        x1 = x0 + 1;
    }
    if (y1 == y0) {
        y1 = y0 + 1;
    }
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(title)
      << "</text>\n";
    o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int y_ticks = log_y ? static_cast<int>(y1 - y0) : 5;
    for (int i = 0; i <= y_ticks; ++i) {
        const double yv = y0 + (y1 - y0) * i / y_ticks;
        o << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << py(yv) << "\" y2=\"" << py(yv)
          << "\" stroke=\"#ddd\"/>\n";
        const std::string lbl = log_y ? "1e" + fmt("%g", yv) : fmt("%.3g", yv);
        o << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << lbl
          << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double xv = x0 + (x1 - x0) * i / 5;
        o << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
          << fmt("%.3g", xv) << "</text>\n";
    }
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << escape_xml(x_label) << "</text>\n";
    o << "<text transform=\"translate(16," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">"
      << escape_xml(y_label) << "</text>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = colors[si % std::size(colors)];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            o << (i ? " " : "") << px(s.x[i]) << "," << py(ty(s.y[i]));
        }
        o << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            o << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(ty(s.y[i])) << "\" r=\"3\" fill=\"" << color
              << "\"/>\n";
        }
        const double ly = top + 14 + 18.0 * static_cast<double>(si);
        o << "<line x1=\"" << left + pw + 10 << "\" x2=\"" << left + pw + 30 << "\" y1=\"" << ly << "\" y2=\"" << ly
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << left + pw + 34 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << escape_xml(s.label)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

namespace {

template <typename T>
void take(const json& obj, const char* key, T& dst) {
    if (auto it = obj.find(key); it != obj.end() && !it->is_null()) {
        dst = it->get<T>();
    }
}

void reject_unknown(const json& obj, const std::string& section, std::initializer_list<const char*> known) {
    if (!obj.is_object()) {
        throw ConfigError("config section '" + section + "' must be an object");
    }
    for (const auto& [key, _] : obj.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
            throw ConfigError("unknown config key '" + (section.empty() ? key : section + "." + key) + "'");
        }
    }
}

} // namespace

harness::ExperimentSpec spec_from_json(std::string_view text) {
    harness::ExperimentSpec spec;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        reject_unknown(root, "", {"system", "sweep", "codebook", "recovery", "optimizer", "run", "output"});
        if (auto it = root.find("system"); it != root.end()) {
            const json& s = *it;
            reject_unknown(s, "system",
                           {"n_bs_antennas", "n_ris_elements", "n_users", "grid_bs", "grid_ris", "paths_rb",
                            "paths_ru", "codeword_len", "bits_per_block", "n_blocks"});
            take(s, "n_bs_antennas", spec.base.n_bs_antennas);
            take(s, "n_ris_elements", spec.base.n_ris_elements);
            take(s, "n_users", spec.base.n_users);
            take(s, "grid_bs", spec.base.grid_bs);
            take(s, "grid_ris", spec.base.grid_ris);
            take(s, "paths_rb", spec.base.paths_rb);
            take(s, "paths_ru", spec.base.paths_ru);
            take(s, "codeword_len", spec.base.codeword_len);
            take(s, "bits_per_block", spec.base.bits_per_block);
            take(s, "n_blocks", spec.base.n_blocks);
        }
        if (auto it = root.find("sweep"); it != root.end()) {
            const json& s = *it;
            reject_unknown(s, "sweep", {"snr_db", "m", "j", "k", "schedule", "schedule_file", "trials"});
            take(s, "snr_db", spec.snr_db);
            take(s, "m", spec.m_values);
            take(s, "j", spec.j_values);
            take(s, "k", spec.k_values);
            take(s, "schedule_file", spec.schedule_file);
            take(s, "trials", spec.trials);
            if (auto sc = s.find("schedule"); sc != s.end()) {
                spec.schedules.clear();
                for (const auto& v : *sc) {
                    spec.schedules.push_back(harness::parse_source(v.get<std::string>()));
                }
            }
        }
        if (auto it = root.find("codebook"); it != root.end()) {
            reject_unknown(*it, "codebook", {"freeze_codebook"});
            take(*it, "freeze_codebook", spec.freeze_codebook);
        }
        if (auto it = root.find("recovery"); it != root.end()) {
            reject_unknown(*it, "recovery", {"somp_iters", "omp_residual_threshold"});
            take(*it, "somp_iters", spec.somp_iters);
            if (auto t = it->find("omp_residual_threshold"); t != it->end() && !t->is_null()) {
                spec.omp_residual_threshold = t->get<double>();
            }
        }
        if (auto it = root.find("optimizer"); it != root.end()) {
            reject_unknown(*it, "optimizer",
                           {"max_iters", "tol", "initial_step", "shrink", "sufficient_decrease", "max_backtracks"});
            take(*it, "max_iters", spec.optimizer.max_iters);
            take(*it, "tol", spec.optimizer.tol);
            take(*it, "initial_step", spec.optimizer.initial_step);
            take(*it, "shrink", spec.optimizer.shrink);
            take(*it, "sufficient_decrease", spec.optimizer.sufficient_decrease);
            take(*it, "max_backtracks", spec.optimizer.max_backtracks);
        }
        if (auto it = root.find("run"); it != root.end()) {
            reject_unknown(*it, "run", {"master_seed", "threads"});
            take(*it, "master_seed", spec.master_seed);
            take(*it, "threads", spec.threads);
        }
        if (auto it = root.find("output"); it != root.end()) {
            reject_unknown(*it, "output", {"csv", "svg_prefix", "records"});
            take(*it, "csv", spec.csv_path);
            take(*it, "svg_prefix", spec.svg_prefix);
            take(*it, "records", spec.records_path);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config value has the wrong type: ") + e.what());
    }
    spec.base.seed = spec.master_seed;
    return spec;
}

std::string spec_to_json(const harness::ExperimentSpec& spec) {
    const auto& b = spec.base;
    json schedules = json::array();
    for (auto s : spec.schedules) {
        schedules.push_back(std::string(harness::source_name(s)));
    }
    json j{
        {"system",
         {{"n_bs_antennas", b.n_bs_antennas},
          {"n_ris_elements", b.n_ris_elements},
          {"n_users", b.n_users},
          {"grid_bs", b.grid_bs},
          {"grid_ris", b.grid_ris},
          {"paths_rb", b.paths_rb},
          {"paths_ru", b.paths_ru},
          {"codeword_len", b.codeword_len},
          {"bits_per_block", b.bits_per_block},
          {"n_blocks", b.n_blocks}}},
        {"sweep",
         {{"snr_db", spec.snr_db},
          {"m", spec.m_values},
          {"j", spec.j_values},
          {"k", spec.k_values},
          {"schedule", schedules},
          {"schedule_file", spec.schedule_file},
          {"trials", spec.trials}}},
        {"codebook", {{"freeze_codebook", spec.freeze_codebook}}},
        {"recovery",
         {{"somp_iters", spec.somp_iters},
          {"omp_residual_threshold",
           spec.omp_residual_threshold ? json(*spec.omp_residual_threshold) : json(nullptr)}}},
        {"optimizer",
         {{"max_iters", spec.optimizer.max_iters},
          {"tol", spec.optimizer.tol},
          {"initial_step", spec.optimizer.initial_step},
          {"shrink", spec.optimizer.shrink},
          {"sufficient_decrease", spec.optimizer.sufficient_decrease},
          {"max_backtracks", spec.optimizer.max_backtracks}}},
        {"run", {{"master_seed", spec.master_seed}, {"threads", spec.threads}}},
        {"output", {{"csv", spec.csv_path}, {"svg_prefix", spec.svg_prefix}, {"records", spec.records_path}}},
    };
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open " + path + " for writing");
    }
    out << contents;
    if (!out) {
        throw Error("write to " + path + " failed");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace blindris::report
