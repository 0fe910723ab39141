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

#include "blindris/ris.hpp"

#include "blindris/errors.hpp"
#include "blindris/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace blindris::ris {

using linalg::adjoint_matmul;
using linalg::matmul;
using linalg::transpose;

std::string_view origin_name(ScheduleOrigin o) {
    switch (o) {
    case ScheduleOrigin::random:
        return "random";
    case ScheduleOrigin::optimized:
        return "optimized";
    case ScheduleOrigin::file:
        return "file";
    }
    return "unknown";
}

PhaseSchedule random_schedule(std::size_t n_ris, std::size_t n_blocks, Rng& rng) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    PhaseSchedule s{ComplexMatrix(n_ris, n_blocks), ScheduleOrigin::random};
    for (std::size_t i = 0; i < s.psi.size(); ++i) {
        double theta = phase(rng);
        if (theta == 0.0) {
            theta = two_pi;
        }
        s.psi[i] = std::polar(1.0, theta);
    }
    return s;
}

double mutual_coherence(const ComplexMatrix& a) {
    if (a.cols() < 2) {
        throw DegenerateInputError("mutual_coherence: need at least two columns");
    }
    std::vector<double> norms(a.cols());
    for (std::size_t c = 0; c < a.cols(); ++c) {
        norms[c] = std::sqrt(kernels::norm2sq(a.col(c).data(), a.rows()));
        if (norms[c] == 0.0) {
            throw DegenerateInputError("mutual_coherence: zero column " + std::to_string(c));
        }
    }
    // Column tiles small enough to stay in cache while every later column
    // is correlated against them.
    constexpr std::size_t kTile = 64;
    double mu = 0.0;
    std::vector<cplx> ip(kTile);
    for (std::size_t t0 = 0; t0 < a.cols(); t0 += kTile) {
        const std::size_t t1 = std::min(a.cols(), t0 + kTile);
        for (std::size_t n = t0 + 1; n < a.cols(); ++n) {
            const std::size_t width = std::min(t1, n) - t0;
            kernels::adjoint_gemv(a.col(t0).data(), a.rows(), width, a.col(n).data(), a.rows(), ip.data());
            for (std::size_t m = 0; m < width; ++m) {
                mu = std::max(mu, std::abs(ip[m]) / (norms[t0 + m] * norms[n]));
            }
        }
    }
    return std::min(mu, 1.0);
}

ComplexMatrix ris_operand(const ComplexMatrix& psi, const ComplexMatrix& f_ris) {
    if (psi.rows() != f_ris.rows()) {
        throw DimensionError("ris_operand: schedule has " + std::to_string(psi.rows()) + " rows, F_R has " +
                             std::to_string(f_ris.rows()));
    }
    // (Psi^T F_R)^T = F_R^T Psi = conj(F_R)^H Psi
    return transpose(adjoint_matmul(linalg::conj(f_ris), psi));
}

namespace {

// Objective pieces shared by the value-only and gradient paths.
struct Workspace {
    ComplexMatrix a;   // J x G_R
    ComplexMatrix err; // A^H A - xi I
    double value = 0.0;
};

Workspace evaluate(const ComplexMatrix& psi, const ComplexMatrix& conj_f_ris, double xi) {
    Workspace w;
    w.a = transpose(adjoint_matmul(conj_f_ris, psi));
    w.err = adjoint_matmul(w.a, w.a);
    for (std::size_t i = 0; i < w.err.rows(); ++i) {
        w.err(i, i) -= xi;
    }
    w.value = linalg::frobenius_norm_sq(w.err);
    return w;
}

ComplexMatrix gradient(const Workspace& w, const ComplexMatrix& conj_f_ris) {
    ComplexMatrix g = matmul(conj_f_ris, transpose(matmul(w.a, w.err)));
    g *= 2.0;
    return g;
}

double trace_gram(const ComplexMatrix& psi, const ComplexMatrix& conj_f_ris) {
    const ComplexMatrix a = transpose(adjoint_matmul(conj_f_ris, psi));
    return linalg::frobenius_norm_sq(a) / static_cast<double>(conj_f_ris.cols());
}

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    return kernels::dotc(a.data(), b.data(), a.size()).real();
}

} // namespace

ObjectiveValue design_objective(const ComplexMatrix& psi, const ComplexMatrix& f_ris, double xi) {
    const ComplexMatrix cf = linalg::conj(f_ris);
    const Workspace w = evaluate(psi, cf, xi);
    return {w.value, gradient(w, cf)};
}

double design_value(const ComplexMatrix& psi, const ComplexMatrix& f_ris, double xi) {
    return evaluate(psi, linalg::conj(f_ris), xi).value;
}

double optimal_xi(const ComplexMatrix& psi, const ComplexMatrix& f_ris) {
    return trace_gram(psi, linalg::conj(f_ris));
}

ComplexMatrix tangent_projection(const ComplexMatrix& grad, const ComplexMatrix& psi) {
    ComplexMatrix out = grad;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double radial = (grad[i] * std::conj(psi[i])).real();
        out[i] -= radial * psi[i];
    }
    return out;
}

ComplexMatrix retract(const ComplexMatrix& psi) {
    ComplexMatrix out = psi;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double mag = std::abs(out[i]);
        out[i] = mag > 0.0 ? out[i] / mag : cplx{1.0, 0.0};
    }
    return out;
}

OptimizationResult optimize_schedule(const ComplexMatrix& f_ris, const PhaseSchedule& init,
                                     const OptimizerOptions& opts) {
    if (init.psi.rows() != f_ris.rows()) {
        throw DimensionError("optimize_schedule: schedule rows must match F_R rows");
    }
    const ComplexMatrix cf = linalg::conj(f_ris);
    auto check = [](double v) {
        if (!std::isfinite(v)) {
            throw NumericalError("optimize_schedule: non-finite objective");
        }
        return v;
    };

    OptimizationResult res;
    ComplexMatrix psi = retract(init.psi);
    double xi = trace_gram(psi, cf);
    Workspace w = evaluate(psi, cf, xi);
    res.trace.push_back(check(w.value));
    double step = opts.initial_step;

    for (std::size_t it = 0; it < opts.max_iters; ++it) {
        const ComplexMatrix riem = tangent_projection(gradient(w, cf), psi);
        const double riem_sq = real_inner(riem, riem);
        if (std::sqrt(riem_sq) < opts.tol) {
            res.converged = true;
            break;
        }

        // f(R(psi - t g)) <= f(psi) - c * t * 2 ||g||^2; the factor 2 maps the
        // Wirtinger gradient onto the real directional derivative.
        step = std::min(opts.initial_step, 2.0 * step);
        bool accepted = false;
        ComplexMatrix candidate;
        Workspace cw;
        for (std::size_t bt = 0; bt < opts.max_backtracks; ++bt) {
            candidate = psi;
            kernels::axpy(-step, riem.data(), candidate.data(), candidate.size());
            candidate = retract(candidate);
            cw = evaluate(candidate, cf, xi);
            check(cw.value);
            if (cw.value <= w.value - opts.sufficient_decrease * step * 2.0 * riem_sq) {
                accepted = true;
                break;
            }
            step *= opts.shrink;
        }
        if (!accepted) {
            res.converged = true;
            break;
        }

        psi = std::move(candidate);
        xi = trace_gram(psi, cf);
        w = evaluate(psi, cf, xi);
        const double prev = res.trace.back();
        res.trace.push_back(check(w.value));
        res.iterations = it + 1;
        if (prev > 0.0 && (prev - w.value) / prev < opts.tol) {
            res.converged = true;
            break;
        }
    }
    res.schedule = {std::move(psi), ScheduleOrigin::optimized};
    return res;
}

void write_schedule(std::ostream& os, const PhaseSchedule& s) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    char buf[32];
    for (std::size_t j = 0; j < s.n_blocks(); ++j) {
        for (std::size_t n = 0; n < s.n_ris(); ++n) {
            double theta = std::arg(s.psi(n, j));
            if (theta <= 0.0) {
                theta += two_pi;
            }
            std::snprintf(buf, sizeof buf, "%.17g", theta);
            os << (n == 0 ? "" : " ") << buf;
        }
        os << '\n';
    }
}

PhaseSchedule read_schedule(std::istream& is) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::vector<double> row;
        double v = 0.0;
        while (ls >> v) {
            row.push_back(v);
        }
        if (!ls.eof()) {
            throw ConfigError("schedule file: non-numeric entry on line " + std::to_string(rows.size() + 1));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ConfigError("schedule file: ragged rows");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().empty()) {
        throw ConfigError("schedule file: empty");
    }
    PhaseSchedule s{ComplexMatrix(rows.front().size(), rows.size()), ScheduleOrigin::file};
    for (std::size_t j = 0; j < rows.size(); ++j) {
        for (std::size_t n = 0; n < rows[j].size(); ++n) {
            s.psi(n, j) = std::polar(1.0, rows[j][n]);
        }
    }
    return s;
}

} // namespace blindris::ris
