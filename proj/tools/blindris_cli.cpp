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

#include "blindris/channel.hpp"
#include "blindris/errors.hpp"
#include "blindris/experiment.hpp"
#include "blindris/kernels.hpp"
#include "blindris/metrics.hpp"
#include "blindris/report.hpp"
#include "blindris/ris.hpp"
#include "blindris/selftest.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace blindris;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

// Every config field, as an optional override.
struct Overrides {
    std::optional<std::size_t> n_bs_antennas, n_ris_elements, n_users, grid_bs, grid_ris, paths_rb, paths_ru,
        codeword_len, bits_per_block, n_blocks;
    std::vector<double> snr_db;
    std::vector<std::size_t> m, j, k;
    std::vector<std::string> schedule;
    std::optional<std::string> schedule_file;
    std::optional<std::size_t> trials;
    std::optional<bool> freeze_codebook;
    std::optional<std::size_t> somp_iters;
    std::optional<double> omp_residual_threshold;
    std::optional<std::size_t> max_iters;
    std::optional<double> tol, initial_step, shrink, sufficient_decrease;
    std::optional<std::size_t> max_backtracks;
    std::optional<std::uint64_t> master_seed;
    std::optional<std::size_t> threads;
    std::optional<std::string> csv, svg_prefix, records;
};

void add_overrides(CLI::App* app, Overrides& o) {
    app->add_option("--n_bs_antennas", o.n_bs_antennas, "BS antennas N_B")->group("System");
    app->add_option("--n_ris_elements", o.n_ris_elements, "RIS elements N_R")->group("System");
    app->add_option("--n_users", o.n_users, "Users K (base value)")->group("System");
    app->add_option("--grid_bs", o.grid_bs, "BS angular grid size G_B")->group("System");
    app->add_option("--grid_ris", o.grid_ris, "RIS angular grid size G_R")->group("System");
    app->add_option("--paths_rb", o.paths_rb, "RIS-BS paths L_RB")->group("System");
    app->add_option("--paths_ru", o.paths_ru, "User-RIS paths L_RU")->group("System");
    app->add_option("--codeword_len", o.codeword_len, "Codeword length M (base value)")->group("System");
    app->add_option("--bits_per_block", o.bits_per_block, "Bits per block M_b")->group("System");
    app->add_option("--n_blocks", o.n_blocks, "Blocks J (base value)")->group("System");

    app->add_option("--snr_db", o.snr_db, "SNR sweep in dB, comma separated")->delimiter(',')->group("Sweep");
    app->add_option("--m", o.m, "Codeword-length sweep")->delimiter(',')->group("Sweep");
    app->add_option("--j", o.j, "Block-count sweep")->delimiter(',')->group("Sweep");
    app->add_option("--k", o.k, "User-count sweep")->delimiter(',')->group("Sweep");
    app->add_option("--schedule", o.schedule, "RIS schedule sources: random, optimized, file")
        ->delimiter(',')
        ->group("Sweep");
    app->add_option("--schedule_file", o.schedule_file, "Schedule file for the 'file' source")->group("Sweep");
    app->add_option("--trials", o.trials, "Monte-Carlo trials per point")->group("Sweep");

    app->add_option("--freeze_codebook", o.freeze_codebook, "Reuse one codebook for all trials (true/false)")
        ->group("Codebook");
    app->add_option("--somp_iters", o.somp_iters, "S-OMP iterations (0 = K)")->group("Recovery");
    app->add_option("--omp_residual_threshold", o.omp_residual_threshold, "OMP residual stop threshold")
        ->group("Recovery");

    app->add_option("--max_iters", o.max_iters, "Optimizer iteration cap")->group("Optimizer");
    app->add_option("--tol", o.tol, "Optimizer relative-decrease tolerance")->group("Optimizer");
    app->add_option("--initial_step", o.initial_step, "Armijo initial step")->group("Optimizer");
    app->add_option("--shrink", o.shrink, "Armijo shrink factor")->group("Optimizer");
    app->add_option("--sufficient_decrease", o.sufficient_decrease, "Armijo constant")->group("Optimizer");
    app->add_option("--max_backtracks", o.max_backtracks, "Armijo backtrack cap")->group("Optimizer");

    app->add_option("--master_seed", o.master_seed, "Master RNG seed")->group("Run");
    app->add_option("--threads", o.threads, "Worker threads")->group("Run");

    app->add_option("--csv", o.csv, "CSV output path (default: stdout)")->group("Output");
    app->add_option("--svg_prefix", o.svg_prefix, "Write <prefix>_ber.svg and <prefix>_nmse.svg")->group("Output");
    app->add_option("--records", o.records, "Per-trial JSONL records path")->group("Output");
}

template <class T>
void apply(const std::optional<T>& src, T& dst) {
    if (src) {
        dst = *src;
    }
}

harness::ExperimentSpec build_spec(const std::string& config_path, const Overrides& o) {
    harness::ExperimentSpec spec;
    if (!config_path.empty()) {
        std::string text;
        try {
            text = report::read_file(config_path);
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
        spec = report::spec_from_json(text);
    }
    auto& b = spec.base;
    apply(o.n_bs_antennas, b.n_bs_antennas);
    apply(o.n_ris_elements, b.n_ris_elements);
    apply(o.n_users, b.n_users);
    apply(o.grid_bs, b.grid_bs);
    apply(o.grid_ris, b.grid_ris);
    apply(o.paths_rb, b.paths_rb);
    apply(o.paths_ru, b.paths_ru);
    apply(o.codeword_len, b.codeword_len);
    apply(o.bits_per_block, b.bits_per_block);
    apply(o.n_blocks, b.n_blocks);
    if (!o.snr_db.empty()) spec.snr_db = o.snr_db;
    if (!o.m.empty()) spec.m_values = o.m;
    if (!o.j.empty()) spec.j_values = o.j;
    if (!o.k.empty()) spec.k_values = o.k;
    if (!o.schedule.empty()) {
        spec.schedules.clear();
        for (const auto& s : o.schedule) {
            spec.schedules.push_back(harness::parse_source(s));
        }
    }
    apply(o.schedule_file, spec.schedule_file);
    apply(o.trials, spec.trials);
    apply(o.freeze_codebook, spec.freeze_codebook);
    apply(o.somp_iters, spec.somp_iters);
    if (o.omp_residual_threshold) spec.omp_residual_threshold = o.omp_residual_threshold;
    apply(o.max_iters, spec.optimizer.max_iters);
    apply(o.tol, spec.optimizer.tol);
    apply(o.initial_step, spec.optimizer.initial_step);
    apply(o.shrink, spec.optimizer.shrink);
    apply(o.sufficient_decrease, spec.optimizer.sufficient_decrease);
    apply(o.max_backtracks, spec.optimizer.max_backtracks);
    apply(o.master_seed, spec.master_seed);
    apply(o.threads, spec.threads);
    apply(o.csv, spec.csv_path);
    apply(o.svg_prefix, spec.svg_prefix);
    apply(o.records, spec.records_path);
    spec.base.seed = spec.master_seed;
    spec.validate();
    return spec;
}

int cmd_sweep(const harness::ExperimentSpec& spec, bool quiet) {
    std::ofstream records;
    if (!spec.records_path.empty()) {
        records.open(spec.records_path, std::ios::trunc);
        if (!records) {
            throw ConfigError("cannot open records file " + spec.records_path);
        }
    }
    const auto points = harness::expand(spec);
    std::size_t done = 0;
    const auto sink = [&](const harness::SweepPoint& p, std::span<const harness::TrialRecord> recs) {
        if (records.is_open()) {
            for (const auto& r : recs) {
                records << report::record_line(p, r);
            }
            records.flush();
        }
        ++done;
        if (!quiet) {
            std::fprintf(stderr, "[%zu/%zu] snr=%g m=%zu j=%zu k=%zu %s\n", done, points.size(), p.cfg.snr_db,
                         p.cfg.codeword_len, p.cfg.n_blocks, p.cfg.n_users,
                         std::string(harness::source_name(p.schedule)).c_str());
        }
    };
    const auto result = harness::run_experiment(spec, sink);
    const std::string csv = report::to_csv(result.points);
    if (spec.csv_path.empty()) {
        std::fwrite(csv.data(), 1, csv.size(), stdout);
    } else {
        report::write_file(spec.csv_path, csv);
        report::write_file(spec.csv_path + ".meta.json", report::metadata_json(spec, result.points));
    }
    if (!spec.svg_prefix.empty()) {
        const auto ber = report::ber_series(result.points);
        const auto nmse = report::nmse_series(result.points);
        report::write_file(spec.svg_prefix + "_ber.svg",
                           report::svg_plot("Weighted BER vs SNR", "SNR (dB)", "weighted BER", ber, true));
        report::write_file(spec.svg_prefix + "_nmse.svg",
                           report::svg_plot("Cascaded-channel NMSE vs SNR", "SNR (dB)", "NMSE (dB)", nmse, false));
    }
    return kExitOk;
}

int cmd_optimize(const harness::ExperimentSpec& spec, const std::string& out, const std::string& trace_path) {
    const auto& cfg = spec.base;
    const auto dict = channel::build_dictionaries(cfg);
    Rng rng(derive_seed(spec.master_seed, {6, cfg.n_ris_elements, cfg.grid_ris, cfg.n_blocks}));
    const auto init = ris::random_schedule(cfg.n_ris_elements, cfg.n_blocks, rng);
    const auto res = ris::optimize_schedule(dict.f_ris, init, spec.optimizer);

    const double mu0 = ris::mutual_coherence(ris::ris_operand(init.psi, dict.f_ris));
    const double mu1 = ris::mutual_coherence(ris::ris_operand(res.schedule.psi, dict.f_ris));
    std::fprintf(stderr, "iterations %zu (%s), objective %.6e -> %.6e, coherence %.4f -> %.4f\n", res.iterations,
                 res.converged ? "converged" : "iteration cap", res.trace.front(), res.trace.back(), mu0, mu1);

    if (out.empty() || out == "-") {
        ris::write_schedule(std::cout, res.schedule);
    } else {
        std::ofstream os(out);
        if (!os) {
            throw ConfigError("cannot open schedule output " + out);
        }
        ris::write_schedule(os, res.schedule);
    }
    if (!trace_path.empty()) {
        std::string t = "iteration,objective\n";
        char buf[64];
        for (std::size_t i = 0; i < res.trace.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, res.trace[i]);
            t += buf;
        }
        report::write_file(trace_path, t);
    }
    return kExitOk;
}

int cmd_demo(harness::ExperimentSpec spec, std::size_t trial, const std::string& dump_path) {
    auto points = harness::expand(spec);
    harness::SweepPoint p = points.back(); // highest SNR of the last configuration
    const auto ctx = harness::prepare_point(spec, p);
    const auto art = harness::simulate_trial(spec, ctx, trial);
    const auto rec = harness::score_trial(ctx, trial, art);
    const auto& cfg = p.cfg;

    std::printf("config: N_B=%zu N_R=%zu K=%zu G_B=%zu G_R=%zu L_RB=%zu L_RU=%zu M=%zu M_b=%zu J=%zu\n",
                cfg.n_bs_antennas, cfg.n_ris_elements, cfg.n_users, cfg.grid_bs, cfg.grid_ris, cfg.paths_rb,
                cfg.paths_ru, cfg.codeword_len, cfg.bits_per_block, cfg.n_blocks);
    std::printf("snr %g dB, schedule %s, trial %zu, kernels %s\n", cfg.snr_db,
                std::string(harness::source_name(p.schedule)).c_str(), trial,
                std::string(kernels::backend_name(kernels::active_backend())).c_str());
    std::printf("noise variance %.4e\n", art.received.noise_var);

    std::size_t shown = 0;
    for (const auto& b : art.recovery.blocks) {
        if (shown++ >= 4) {
            std::printf("... (%zu blocks total)\n", art.recovery.blocks.size());
            break;
        }
        std::printf("block %zu:%s\n", b.block, b.failed ? " FAILED" : "");
        for (std::size_t u = 0; u < b.users.size(); ++u) {
            const auto& truth = art.scenario.message(u, b.block);
            if (b.users[u].erased) {
                std::printf("  user %zu: sent %zu, erased\n", u, truth.codeword_index);
            } else {
                std::printf("  user %zu: sent %zu, recovered %zu%s\n", u, truth.codeword_index, b.users[u].index,
                            b.users[u].index == truth.codeword_index ? "" : "  <-- mismatch");
            }
        }
    }
    for (std::size_t u = 0; u < rec.nmse_db.size(); ++u) {
        std::printf("user %zu cascade NMSE %.2f dB%s\n", u, rec.nmse_db[u],
                    art.estimate.users[u].failed ? " (estimate failed)" : "");
    }
    std::printf("weighted BER %.6e (id %.6e, data %.6e), erasures %zu/%zu\n", rec.ber.weighted(), rec.ber.id_rate(),
                rec.ber.data_rate(), rec.ber.erasures, rec.ber.user_blocks);
    std::printf("data rate %.6f bits/channel use, runtime %.3f s\n", metrics::data_rate(cfg), rec.runtime_s);
    if (rec.failed) {
        std::printf("trial failed: %s\n", rec.failure.c_str());
    }

    if (!dump_path.empty()) {
        std::ofstream os(dump_path);
        if (!os) {
            throw ConfigError("cannot open dump output " + dump_path);
        }
        channel::write_realization(os, art.scenario.channels);
    }
    return kExitOk;
}

int cmd_selftest(std::uint64_t seed) {
    const auto checks = selftest::run(seed);
    bool ok = true;
    for (const auto& c : checks) {
        std::printf("%s  %s  (%s)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        ok = ok && c.passed;
    }
    std::printf("%s\n", ok ? "selftest passed" : "selftest FAILED");
    return ok ? kExitOk : kExitRuntime;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"blindris: blind cascaded-channel estimation and codeword recovery simulator"};
    app.require_subcommand(1);
    std::string config_path;
    std::string kernels_opt;
    app.add_option("-c,--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--kernels", kernels_opt, "Force kernel backend: scalar or avx2");

    Overrides ov_sweep, ov_opt, ov_demo, ov_self;

    auto* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo sweep and write CSV/SVG");
    bool quiet = false;
    add_overrides(sweep, ov_sweep);
    sweep->add_flag("-q,--quiet", quiet, "No progress on stderr");

    auto* opt = app.add_subcommand("optimize-ris", "Design a coherence-minimizing RIS schedule");
    std::string opt_out, opt_trace;
    add_overrides(opt, ov_opt);
    opt->add_option("-o,--out", opt_out, "Schedule output path (default: stdout)");
    opt->add_option("--trace", opt_trace, "Write the objective trace as CSV");

    auto* demo = app.add_subcommand("demo", "Run one verbose trial");
    std::size_t demo_trial = 0;
    std::string demo_dump;
    add_overrides(demo, ov_demo);
    demo->add_option("--trial", demo_trial, "Trial index");
    demo->add_option("--dump", demo_dump, "Write the channel realization to this file");

    auto* self = app.add_subcommand("selftest", "Run the built-in oracle checks");
    add_overrides(self, ov_self);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (!kernels_opt.empty()) {
            if (kernels_opt != "scalar" && kernels_opt != "avx2") {
                throw ConfigError("--kernels must be scalar or avx2");
            }
            kernels::set_backend(kernels_opt == "avx2" ? kernels::Backend::avx2 : kernels::Backend::scalar);
        }
        if (sweep->parsed()) {
            return cmd_sweep(build_spec(config_path, ov_sweep), quiet);
        }
        if (opt->parsed()) {
            return cmd_optimize(build_spec(config_path, ov_opt), opt_out, opt_trace);
        }
        if (demo->parsed()) {
            return cmd_demo(build_spec(config_path, ov_demo), demo_trial, demo_dump);
        }
        return cmd_selftest(build_spec(config_path, ov_self).master_seed);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
