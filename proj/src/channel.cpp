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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace blindris::channel {

ComplexMatrix steering_vector(std::size_t n_elements, double spatial_freq) {
    const double f = std::fmod(std::fmod(spatial_freq, 2.0) + 2.0, 2.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_elements));
    ComplexMatrix a(n_elements, 1);
    for (std::size_t n = 0; n < n_elements; ++n) {
        a(n, 0) = std::polar(scale, std::numbers::pi * static_cast<double>(n) * f);
    }
    return a;
}

namespace {

ComplexMatrix grid_dictionary(std::size_t n, std::size_t g, std::vector<double>& freqs) {
    ComplexMatrix f(n, g);
    freqs.resize(g);
    for (std::size_t col = 0; col < g; ++col) {
        freqs[col] = 2.0 * static_cast<double>(col) / static_cast<double>(g);
        const ComplexMatrix a = steering_vector(n, freqs[col]);
        std::copy_n(a.data(), n, f.col(col).data());
    }
    return f;
}

} // namespace

SteeringDictionary build_dictionaries(const SystemConfig& cfg) {
    SteeringDictionary d;
    d.f_bs = grid_dictionary(cfg.n_bs_antennas, cfg.grid_bs, d.bs_freqs);
    d.f_ris = grid_dictionary(cfg.n_ris_elements, cfg.grid_ris, d.ris_freqs);
    return d;
}

ComplexMatrix merge_cascade(const ComplexMatrix& d_ru_k, const ComplexMatrix& d_rb, std::size_t n_ris) {
    const std::size_t g_ris = d_rb.rows();
    if (d_ru_k.rows() != g_ris || d_ru_k.cols() != 1) {
        throw DimensionError("merge_cascade: d_ru must be G_R x 1 matching D_RB rows");
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_ris));
    ComplexMatrix d_k(g_ris, d_rb.cols());
    for (std::size_t i = 0; i < g_ris; ++i) {
        const cplx a = std::conj(d_ru_k(i, 0));
        if (a == cplx{}) {
            continue;
        }
        for (std::size_t j = 0; j < g_ris; ++j) {
            const std::size_t m = (j + g_ris - i) % g_ris;
            for (std::size_t c = 0; c < d_rb.cols(); ++c) {
                const cplx b = d_rb(j, c);
                if (b != cplx{}) {
                    d_k(m, c) += scale * a * b;
                }
            }
        }
    }
    return d_k;
}

ChannelRealization build_channel(const SteeringDictionary& dict, std::vector<RbPath> rb_paths,
                                 std::vector<std::vector<RuPath>> ru_paths) {
    const std::size_t n_ris = dict.f_ris.rows();
    const std::size_t n_bs = dict.f_bs.rows();
    const std::size_t g_ris = dict.f_ris.cols();
    const std::size_t g_bs = dict.f_bs.cols();
    if (rb_paths.empty()) {
        throw ConfigError("build_channel: at least one RIS-BS path required");
    }

    ChannelRealization ch;
    ch.d_rb = ComplexMatrix(g_ris, g_bs);
    const double rb_scale =
        std::sqrt(static_cast<double>(n_ris * n_bs) / static_cast<double>(rb_paths.size()));
    for (const auto& p : rb_paths) {
        if (p.ris_grid >= g_ris || p.bs_grid >= g_bs) {
            throw DimensionError("build_channel: RIS-BS path grid index out of range");
        }
        ch.d_rb(p.ris_grid, p.bs_grid) += rb_scale * p.gain;
    }
    ch.h_rb = linalg::matmul(linalg::matmul(dict.f_ris, ch.d_rb), linalg::adjoint(dict.f_bs));

    for (const auto& user_paths : ru_paths) {
        if (user_paths.empty()) {
            throw ConfigError("build_channel: every user needs at least one RIS path");
        }
        ComplexMatrix d_ru(g_ris, 1);
        const double ru_scale = std::sqrt(static_cast<double>(n_ris) / static_cast<double>(user_paths.size()));
        for (const auto& p : user_paths) {
            if (p.ris_grid >= g_ris) {
                throw DimensionError("build_channel: user-RIS path grid index out of range");
            }
            d_ru(p.ris_grid, 0) += ru_scale * p.gain;
        }
        ComplexMatrix h_ru = linalg::matmul(dict.f_ris, d_ru);

        ComplexMatrix h_k = ch.h_rb;
        for (std::size_t c = 0; c < n_bs; ++c) {
            for (std::size_t r = 0; r < n_ris; ++r) {
                h_k(r, c) *= std::conj(h_ru(r, 0));
            }
        }
        ch.d_cascade.push_back(merge_cascade(d_ru, ch.d_rb, n_ris));
        ch.cascade.push_back(std::move(h_k));
        ch.h_ru.push_back(std::move(h_ru));
        ch.d_ru.push_back(std::move(d_ru));
    }
    ch.rb_paths = std::move(rb_paths);
    ch.ru_paths = std::move(ru_paths);
    return ch;
}

namespace {

std::vector<std::size_t> distinct_indices(std::size_t count, std::size_t range, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, range - 1);
    std::vector<std::size_t> out;
    out.reserve(count);
    while (out.size() < count) {
        const std::size_t v = pick(rng);
        if (std::find(out.begin(), out.end(), v) == out.end()) {
            out.push_back(v);
        }
    }
    return out;
}

} // namespace

ChannelRealization sample_channel(const SystemConfig& cfg, const SteeringDictionary& dict, Rng& rng) {
    if (cfg.paths_rb > cfg.grid_ris * cfg.grid_bs || cfg.paths_ru > cfg.grid_ris) {
        throw ConfigError("sample_channel: more paths than grid points");
    }
    std::vector<RbPath> rb;
    for (std::size_t flat : distinct_indices(cfg.paths_rb, cfg.grid_ris * cfg.grid_bs, rng)) {
        rb.push_back({flat / cfg.grid_bs, flat % cfg.grid_bs,
                      complex_gaussian(rng, 1.0 / static_cast<double>(cfg.paths_rb))});
    }
    std::vector<std::vector<RuPath>> ru(cfg.n_users);
    for (auto& user : ru) {
        for (std::size_t idx : distinct_indices(cfg.paths_ru, cfg.grid_ris, rng)) {
            user.push_back({idx, complex_gaussian(rng, 1.0 / static_cast<double>(cfg.paths_ru))});
        }
    }
    return build_channel(dict, std::move(rb), std::move(ru));
}

namespace {

void write_matrix(std::ostream& os, const std::string& name, const ComplexMatrix& m) {
    os << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    char buf[64];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g", m(r, c).real(), m(r, c).imag());
            os << (c == 0 ? "" : " ") << buf;
        }
        os << '\n';
    }
}

ComplexMatrix read_matrix_body(std::istream& is, std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            double re = 0.0, im = 0.0;
            if (!(is >> re >> im)) {
                throw ConfigError("realization file: truncated matrix body");
            }
            m(r, c) = {re, im};
        }
    }
    return m;
}

} // namespace

void write_realization(std::ostream& os, const ChannelRealization& ch) {
    os << "blindris-realization 1\n";
    os << "users " << ch.n_users() << '\n';
    char buf[96];
    for (const auto& p : ch.rb_paths) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g", p.gain.real(), p.gain.imag());
        os << "rb_path " << p.ris_grid << ' ' << p.bs_grid << ' ' << buf << '\n';
    }
    for (std::size_t k = 0; k < ch.ru_paths.size(); ++k) {
        for (const auto& p : ch.ru_paths[k]) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g", p.gain.real(), p.gain.imag());
            os << "ru_path " << k << ' ' << p.ris_grid << ' ' << buf << '\n';
        }
    }
    write_matrix(os, "h_rb", ch.h_rb);
    write_matrix(os, "d_rb", ch.d_rb);
    for (std::size_t k = 0; k < ch.n_users(); ++k) {
        const std::string suffix = "." + std::to_string(k);
        write_matrix(os, "h_ru" + suffix, ch.h_ru[k]);
        write_matrix(os, "d_ru" + suffix, ch.d_ru[k]);
        write_matrix(os, "cascade" + suffix, ch.cascade[k]);
        write_matrix(os, "d_cascade" + suffix, ch.d_cascade[k]);
    }
}

ChannelRealization read_realization(std::istream& is) {
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "blindris-realization" || version != 1) {
        throw ConfigError("realization file: bad header");
    }
    ChannelRealization ch;
    std::string tag;
    std::size_t users = 0;
    while (is >> tag) {
        if (tag == "users") {
            is >> users;
            ch.h_ru.resize(users);
            ch.d_ru.resize(users);
            ch.cascade.resize(users);
            ch.d_cascade.resize(users);
            ch.ru_paths.resize(users);
        } else if (tag == "rb_path") {
            RbPath p{};
            double re = 0.0, im = 0.0;
            is >> p.ris_grid >> p.bs_grid >> re >> im;
            p.gain = {re, im};
            ch.rb_paths.push_back(p);
        } else if (tag == "ru_path") {
            std::size_t k = 0;
            RuPath p{};
            double re = 0.0, im = 0.0;
            is >> k >> p.ris_grid >> re >> im;
            if (k >= users) {
                throw ConfigError("realization file: ru_path user out of range");
            }
            p.gain = {re, im};
            ch.ru_paths[k].push_back(p);
        } else if (tag == "matrix") {
            std::string name;
            std::size_t rows = 0, cols = 0;
            is >> name >> rows >> cols;
            ComplexMatrix m = read_matrix_body(is, rows, cols);
            const auto dot = name.find('.');
            const std::string base = name.substr(0, dot);
            if (base == "h_rb") {
                ch.h_rb = std::move(m);
            } else if (base == "d_rb") {
                ch.d_rb = std::move(m);
            } else {
                if (dot == std::string::npos) {
                    throw ConfigError("realization file: per-user matrix without index: " + name);
                }
                const std::size_t k = std::stoul(name.substr(dot + 1));
                if (k >= users) {
                    throw ConfigError("realization file: user index out of range in " + name);
                }
                if (base == "h_ru") {
                    ch.h_ru[k] = std::move(m);
                } else if (base == "d_ru") {
                    ch.d_ru[k] = std::move(m);
                } else if (base == "cascade") {
                    ch.cascade[k] = std::move(m);
                } else if (base == "d_cascade") {
                    ch.d_cascade[k] = std::move(m);
                } else {
                    throw ConfigError("realization file: unknown matrix " + name);
                }
            }
        } else {
            throw ConfigError("realization file: unknown record " + tag);
        }
        if (!is) {
            throw ConfigError("realization file: malformed record " + tag);
        }
    }
    return ch;
}

} // namespace blindris::channel
