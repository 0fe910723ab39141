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

#include "blindris/experiment.hpp"

#include "blindris/codebook.hpp"
#include "blindris/errors.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

namespace blindris::harness {

namespace {

enum Stream : std::uint64_t {
    kChannelStream = 1,
    kCodebookStream = 2,
    kMessageStream = 3,
    kScheduleStream = 4,
    kNoiseStream = 5,
    kOptimizerInitStream = 6,
};

Rng stream_rng(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    return Rng(derive_seed(master, keys));
}

} // namespace

std::string_view source_name(ScheduleSource s) {
    switch (s) {
    case ScheduleSource::random:
        return "random";
    case ScheduleSource::optimized:
        return "optimized";
    case ScheduleSource::file:
        return "file";
    }
    return "unknown";
}

ScheduleSource parse_source(std::string_view s) {
    if (s == "random") {
        return ScheduleSource::random;
    }
    if (s == "optimized") {
        return ScheduleSource::optimized;
    }
    if (s == "file") {
        return ScheduleSource::file;
    }
    throw ConfigError("unknown schedule source '" + std::string(s) + "' (random|optimized|file)");
}

std::vector<SweepPoint> expand(const ExperimentSpec& spec) {
    auto or_base = [](const std::vector<std::size_t>& v, std::size_t base) {
        return v.empty() ? std::vector<std::size_t>{base} : v;
    };
    const auto ks = or_base(spec.k_values, spec.base.n_users);
    const auto js = or_base(spec.j_values, spec.base.n_blocks);
    const auto ms = or_base(spec.m_values, spec.base.codeword_len);
    const std::vector<double> snrs = spec.snr_db.empty() ? std::vector<double>{spec.base.snr_db} : spec.snr_db;
    const std::vector<ScheduleSource> sources =
        spec.schedules.empty() ? std::vector<ScheduleSource>{ScheduleSource::random} : spec.schedules;

    std::vector<SweepPoint> out;
    for (std::size_t k : ks) {
        for (std::size_t j : js) {
            for (std::size_t m : ms) {
                for (ScheduleSource src : sources) {
                    for (double snr : snrs) {
                        SweepPoint p;
                        p.index = out.size();
                        p.cfg = spec.base;
                        p.cfg.n_users = k;
                        p.cfg.n_blocks = j;
                        p.cfg.codeword_len = m;
                        p.cfg.snr_db = snr;
                        p.schedule = src;
                        out.push_back(p);
                    }
                }
            }
        }
    }
    return out;
}

void ExperimentSpec::validate() const {
    if (trials == 0) {
        throw ConfigError("trials must be positive");
    }
    if (threads == 0) {
        throw ConfigError("threads must be positive");
    }
    for (const auto& p : expand(*this)) {
        p.cfg.validate();
        if (p.schedule == ScheduleSource::file && schedule_file.empty()) {
            throw ConfigError("schedule source 'file' needs schedule_file");
        }
    }
}

namespace {

using ScheduleKey = std::tuple<std::size_t, std::size_t, std::size_t>;

struct ScheduleCache {
    std::mutex mu;
    std::map<ScheduleKey, std::shared_ptr<const ris::PhaseSchedule>> optimized;
    std::shared_ptr<const ris::PhaseSchedule> from_file;
};

std::shared_ptr<const ris::PhaseSchedule> optimized_schedule(const ExperimentSpec& spec, const SystemConfig& cfg,
                                                             const channel::SteeringDictionary& dict) {
    Rng rng = stream_rng(spec.master_seed, {kOptimizerInitStream, cfg.n_ris_elements, cfg.grid_ris, cfg.n_blocks});
    const ris::PhaseSchedule init = ris::random_schedule(cfg.n_ris_elements, cfg.n_blocks, rng);
    auto res = ris::optimize_schedule(dict.f_ris, init, spec.optimizer);
    return std::make_shared<const ris::PhaseSchedule>(std::move(res.schedule));
}

PointContext prepare_point_cached(const ExperimentSpec& spec, const SweepPoint& point, ScheduleCache* cache) {
    PointContext ctx;
    ctx.point = point;
    ctx.point.cfg.validate();
    ctx.dict = channel::build_dictionaries(point.cfg);
    const SystemConfig& cfg = point.cfg;

    if (point.schedule == ScheduleSource::optimized) {
        const ScheduleKey key{cfg.n_ris_elements, cfg.grid_ris, cfg.n_blocks};
        if (cache != nullptr) {
            std::lock_guard<std::mutex> lock(cache->mu);
            auto it = cache->optimized.find(key);
            if (it == cache->optimized.end()) {
                it = cache->optimized.emplace(key, optimized_schedule(spec, cfg, ctx.dict)).first;
            }
            ctx.fixed_schedule = it->second;
        } else {
            ctx.fixed_schedule = optimized_schedule(spec, cfg, ctx.dict);
        }
    } else if (point.schedule == ScheduleSource::file) {
        std::shared_ptr<const ris::PhaseSchedule> s;
        if (cache != nullptr && cache->from_file) {
            s = cache->from_file;
        } else {
            std::ifstream in(spec.schedule_file);
            if (!in) {
                throw ConfigError("cannot open schedule file " + spec.schedule_file);
            }
            s = std::make_shared<const ris::PhaseSchedule>(ris::read_schedule(in));
            if (cache != nullptr) {
                cache->from_file = s;
            }
        }
        if (s->n_ris() != cfg.n_ris_elements || s->n_blocks() != cfg.n_blocks) {
            throw ConfigError("schedule file is " + std::to_string(s->n_ris()) + "x" + std::to_string(s->n_blocks()) +
                              ", sweep point needs " + std::to_string(cfg.n_ris_elements) + "x" +
                              std::to_string(cfg.n_blocks));
        }
        ctx.fixed_schedule = std::move(s);
    }
    if (ctx.fixed_schedule) {
        ctx.fixed_sensing = std::make_shared<const cascade::SensingMatrix>(
            cascade::build_sensing_matrix(ctx.dict.f_bs, ctx.dict.f_ris, *ctx.fixed_schedule));
    }
    return ctx;
}

} // namespace

PointContext prepare_point(const ExperimentSpec& spec, const SweepPoint& point) {
    return prepare_point_cached(spec, point, nullptr);
}

TrialArtifacts simulate_trial(const ExperimentSpec& spec, const PointContext& ctx, std::size_t trial) {
    const SystemConfig& cfg = ctx.point.cfg;
    const std::uint64_t master = spec.master_seed;

    TrialArtifacts art;
    art.dict = ctx.dict;

    Rng channel_rng = stream_rng(master, {trial, kChannelStream});
    auto channels = channel::sample_channel(cfg, ctx.dict, channel_rng);

    Rng book_rng = spec.freeze_codebook ? stream_rng(master, {kCodebookStream})
                                        : stream_rng(master, {trial, kCodebookStream});
    auto book = codebook::gen_codebook(cfg.codeword_len, cfg.bits_per_block, cfg.n_users, book_rng);

    ris::PhaseSchedule schedule;
    if (ctx.fixed_schedule) {
        schedule = *ctx.fixed_schedule;
    } else {
        Rng sched_rng = stream_rng(master, {trial, kScheduleStream});
        schedule = ris::random_schedule(cfg.n_ris_elements, cfg.n_blocks, sched_rng);
    }

    Rng msg_rng = stream_rng(master, {trial, kMessageStream});
    art.scenario = airlink::make_scenario(cfg, std::move(book), std::move(channels), std::move(schedule), msg_rng);

    Rng noise_rng = stream_rng(master, {trial, kNoiseStream});
    art.received = airlink::synthesize(art.scenario, cfg.snr_db, noise_rng);

    art.recovery = recovery::recover_all_blocks(art.received.y, art.scenario.book, cfg, spec.somp_iters);

    art.sensing = ctx.fixed_sensing ? *ctx.fixed_sensing
                                    : cascade::build_sensing_matrix(ctx.dict.f_bs, ctx.dict.f_ris, art.scenario.schedule);
    cascade::OmpOptions opts;
    opts.sparsity = cfg.cascade_sparsity();
    opts.residual_threshold = spec.omp_residual_threshold;
    art.estimate = cascade::estimate_cascades(art.recovery, art.sensing, ctx.dict, opts);
    return art;
}

TrialRecord score_trial(const PointContext& ctx, std::size_t trial, const TrialArtifacts& art) {
    const SystemConfig& cfg = ctx.point.cfg;
    TrialRecord rec;
    rec.point = ctx.point.index;
    rec.trial = trial;
    rec.snr_db = cfg.snr_db;

    std::vector<metrics::RecoveredIndex> recovered;
    recovered.reserve(cfg.n_users * cfg.n_blocks);
    for (const auto& block : art.recovery.blocks) {
        for (std::size_t u = 0; u < cfg.n_users; ++u) {
            const auto& r = block.users[u];
            recovered.push_back({u, block.block, r.erased, r.index});
        }
    }
    rec.ber = metrics::weighted_ber(art.scenario.messages, recovered, cfg.bits_per_block, cfg.id_bits());

    for (std::size_t u = 0; u < cfg.n_users; ++u) {
        const auto& est = art.estimate.users[u];
        const auto n = metrics::nmse(art.scenario.channels.cascade[u], est.H_hat);
        rec.nmse_linear.push_back(n.linear);
        rec.nmse_db.push_back(n.db);
        if (est.failed) {
            ++rec.failed_users;
        }
    }
    return rec;
}

namespace {

TrialRecord failed_record(const SweepPoint& point, std::size_t trial, const std::string& why) {
    const SystemConfig& cfg = point.cfg;
    TrialRecord rec;
    rec.point = point.index;
    rec.trial = trial;
    rec.snr_db = cfg.snr_db;
    rec.failed = true;
    rec.failure = why;
    rec.failed_users = cfg.n_users;
    rec.nmse_linear.assign(cfg.n_users, 1.0);
    rec.nmse_db.assign(cfg.n_users, 0.0);
    rec.ber.m_bits = cfg.bits_per_block;
    rec.ber.id_bits = cfg.id_bits();
    rec.ber.user_blocks = cfg.n_users * cfg.n_blocks;
    rec.ber.erasures = rec.ber.user_blocks;
    rec.ber.id_errors = rec.ber.user_blocks * rec.ber.id_bits;
    rec.ber.data_errors = rec.ber.user_blocks * (rec.ber.m_bits - rec.ber.id_bits);
    return rec;
}

} // namespace

TrialRecord run_trial(const ExperimentSpec& spec, const PointContext& ctx, std::size_t trial) {
    const auto start = std::chrono::steady_clock::now();
    TrialRecord rec;
    try {
        const TrialArtifacts art = simulate_trial(spec, ctx, trial);
        rec = score_trial(ctx, trial, art);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        rec = failed_record(ctx.point, trial, e.what());
    }
    rec.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

PointSummary summarize(const SweepPoint& point, std::span<const TrialRecord> records) {
    PointSummary s;
    s.point = point;
    s.trials = records.size();
    s.ber.m_bits = point.cfg.bits_per_block;
    s.ber.id_bits = point.cfg.id_bits();
    std::size_t n = 0;
    double nmse_sum = 0.0;
    for (const auto& r : records) {
        s.ber += r.ber;
        if (r.failed) {
            ++s.failed_trials;
        }
        for (double v : r.nmse_linear) {
            nmse_sum += v;
            ++n;
        }
    }
    s.nmse_linear = n > 0 ? nmse_sum / static_cast<double>(n) : 0.0;
    s.nmse_db = metrics::to_db(s.nmse_linear);
    s.data_rate = metrics::data_rate(point.cfg);
    return s;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RecordSink& sink) {
    spec.validate();
    ScheduleCache cache;
    ExperimentResult result;
    for (const SweepPoint& point : expand(spec)) {
        const PointContext ctx = prepare_point_cached(spec, point, &cache);
        std::vector<TrialRecord> records(spec.trials);

        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mu;
        auto worker = [&] {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= spec.trials) {
                    return;
                }
                try {
                    records[t] = run_trial(spec, ctx, t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!first_error) {
                        first_error = std::current_exception();
                    }
                    next.store(spec.trials);
                    return;
                }
            }
        };
        const std::size_t n_workers = std::min(spec.threads, spec.trials);
        if (n_workers <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(n_workers);
            for (std::size_t w = 0; w < n_workers; ++w) {
                pool.emplace_back(worker);
            }
            for (auto& th : pool) {
                th.join();
            }
        }
        if (first_error) {
            std::rethrow_exception(first_error);
        }
        if (sink) {
            sink(point, records);
        }
        result.points.push_back(summarize(point, records));
    }
    return result;
}

} // namespace blindris::harness
