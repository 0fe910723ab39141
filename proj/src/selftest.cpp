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

#include "blindris/selftest.hpp"

#include "blindris/airlink.hpp"
#include "blindris/cascade.hpp"
#include "blindris/channel.hpp"
#include "blindris/errors.hpp"
#include "blindris/experiment.hpp"
#include "blindris/kernels.hpp"
#include "blindris/recovery.hpp"
#include "blindris/ris.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <algorithm>

namespace blindris::selftest {

using linalg::ComplexMatrix;

namespace {

ComplexMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] = complex_gaussian(rng, 1.0);
    }
    return m;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

Check kernel_equivalence(Rng& rng) {
    if (!kernels::avx2_available()) {
        return {"kernel equivalence", true, "avx2 unavailable, scalar only"};
    }
    double worst = 0.0;
    for (std::size_t n = 0; n < 70; ++n) {
        const ComplexMatrix a = random_matrix(n, 1, rng);
        const ComplexMatrix b = random_matrix(n, 1, rng);
        const cplx s = kernels::scalar::dotc(a.data(), b.data(), n);
        const cplx v = kernels::avx2::dotc(a.data(), b.data(), n);
        worst = std::max(worst, std::abs(s - v) / std::max(1.0, std::abs(s)));
        ComplexMatrix ys = b, yv = b;
        kernels::scalar::axpy({0.3, -1.2}, a.data(), ys.data(), n);
        kernels::avx2::axpy({0.3, -1.2}, a.data(), yv.data(), n);
        if (n > 0) {
            worst = std::max(worst, linalg::max_abs_diff(ys, yv));
        }
        const double ns = kernels::scalar::norm2sq(a.data(), n);
        const double nv = kernels::avx2::norm2sq(a.data(), n);
        worst = std::max(worst, std::abs(ns - nv) / std::max(1.0, ns));
    }
    return {"kernel equivalence", worst < 1e-12, "max deviation " + sci(worst)};
}

Check kron_vec_identity(Rng& rng) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix a = random_matrix(3, 4, rng);
        const ComplexMatrix b = random_matrix(4, 2, rng);
        const ComplexMatrix c = random_matrix(2, 5, rng);
        const ComplexMatrix lhs = linalg::vec(linalg::matmul(linalg::matmul(a, b), c));
        const ComplexMatrix rhs = linalg::matmul(linalg::kron(linalg::transpose(c), a), linalg::vec(b));
        worst = std::max(worst, linalg::relative_error(lhs, rhs));
    }
    return {"vec(ABC) = kron(C^T, A) vec(B)", worst < 1e-12, "max rel error " + sci(worst)};
}

Check cascade_factorization(Rng& rng) {
    const SystemConfig cfg;
    const auto dict = channel::build_dictionaries(cfg);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const auto ch = channel::sample_channel(cfg, dict, rng);
        for (std::size_t k = 0; k < ch.n_users(); ++k) {
            // diag(conj(h_RU,k)) H_RB built from the dense matrices, not the cached cascade
            ComplexMatrix direct = ch.h_rb;
            for (std::size_t c = 0; c < direct.cols(); ++c) {
                for (std::size_t r = 0; r < direct.rows(); ++r) {
                    direct(r, c) *= std::conj(ch.h_ru[k](r, 0));
                }
            }
            const ComplexMatrix merged = linalg::matmul(linalg::matmul(dict.f_ris, ch.d_cascade[k]),
                                                        linalg::adjoint(dict.f_bs));
            worst = std::max(worst, linalg::relative_error(merged, direct));
        }
    }
    return {"cascade factorization H_k = F_R D_k F_B^H", worst < 1e-10, "max rel error " + sci(worst)};
}

Check sensing_consistency(Rng& rng) {
    const SystemConfig cfg;
    const auto dict = channel::build_dictionaries(cfg);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
        const auto ch = channel::sample_channel(cfg, dict, rng);
        const auto sched = ris::random_schedule(cfg.n_ris_elements, cfg.n_blocks, rng);
        const auto q = cascade::build_sensing_matrix(dict.f_bs, dict.f_ris, sched);
        for (std::size_t k = 0; k < ch.n_users(); ++k) {
            ComplexMatrix stacked(cfg.n_blocks * cfg.n_bs_antennas, 1);
            for (std::size_t j = 0; j < cfg.n_blocks; ++j) {
                const auto g = airlink::equivalent_channel(sched.psi.col(j), ch);
                for (std::size_t n = 0; n < cfg.n_bs_antennas; ++n) {
                    stacked(j * cfg.n_bs_antennas + n, 0) = g(k, n);
                }
            }
            const auto predicted = linalg::matmul(q.q, linalg::vec(ch.d_cascade[k]));
            worst = std::max(worst, linalg::relative_error(predicted, stacked));
        }
    }
    return {"stacked g_k = Q vec(D_k)", worst < 1e-10, "max rel error " + sci(worst)};
}

Check coherence_decoupling(Rng& rng) {
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const ComplexMatrix a = random_matrix(3, 5, rng);
        const ComplexMatrix b = random_matrix(4, 6, rng);
        const double lhs = ris::mutual_coherence(linalg::kron(a, b));
        const double rhs = std::max(ris::mutual_coherence(a), ris::mutual_coherence(b));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return {"mu(kron(A, B)) = max(mu(A), mu(B))", worst < 1e-12, "max deviation " + sci(worst)};
}

Check gradient_fd(Rng& rng) {
    SystemConfig cfg;
    cfg.n_ris_elements = 6;
    cfg.grid_ris = 10;
    const auto dict = channel::build_dictionaries(cfg);
    const auto s = ris::random_schedule(6, 4, rng);
    const double xi = ris::optimal_xi(s.psi, dict.f_ris) * 0.9;
    const auto obj = ris::design_objective(s.psi, dict.f_ris, xi);
    constexpr double h = 1e-6;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s.psi.size(); ++i) {
        for (const cplx dir : {cplx{1.0, 0.0}, cplx{0.0, 1.0}}) {
            ComplexMatrix plus = s.psi, minus = s.psi;
            plus[i] += h * dir;
            minus[i] -= h * dir;
            const double fd = (ris::design_value(plus, dict.f_ris, xi) - ris::design_value(minus, dict.f_ris, xi)) / (2 * h);
            const double an = 2.0 * (dir.real() != 0.0 ? obj.euclid_grad[i].real() : obj.euclid_grad[i].imag());
            num += (fd - an) * (fd - an);
            den += an * an;
        }
    }
    const double rel = std::sqrt(num / den);
    return {"objective gradient vs central differences", rel < 1e-5, "rel error " + sci(rel)};
}

Check somp_exhaustive(Rng& rng) {
    int agree = 0, total = 0;
    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix c = random_matrix(8, 16, rng);
        std::uniform_int_distribution<std::size_t> pick(0, 15);
        std::size_t a = pick(rng), b = pick(rng);
        while (b == a) {
            b = pick(rng);
        }
        const ComplexMatrix rows = random_matrix(2, 4, rng);
        const std::vector<std::size_t> truth{std::min(a, b), std::max(a, b)};
        const ComplexMatrix y = linalg::matmul(linalg::select_columns(c, truth), rows);

        // exhaustive: the pair with the smallest least-squares residual
        double best = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> best_pair;
        for (std::size_t i = 0; i < 16; ++i) {
            for (std::size_t j = i + 1; j < 16; ++j) {
                const std::vector<std::size_t> s{i, j};
                const ComplexMatrix sub = linalg::select_columns(c, s);
                const double res = linalg::frobenius_norm(y - linalg::matmul(sub, linalg::lstsq(sub, y)));
                if (res < best) {
                    best = res;
                    best_pair = s;
                }
            }
        }
        auto got = recovery::somp(y, c, 2, 2).support;
        std::sort(got.begin(), got.end());
        ++total;
        agree += got == best_pair ? 1 : 0;
    }
    return {"S-OMP vs exhaustive support search", agree == total,
            std::to_string(agree) + "/" + std::to_string(total) + " agree"};
}

Check noiseless_trial(std::uint64_t seed) {
    harness::ExperimentSpec spec;
    spec.master_seed = seed;
    harness::SweepPoint p;
    p.cfg = spec.base;
    p.cfg.snr_db = std::numeric_limits<double>::infinity();
    const auto ctx = harness::prepare_point(spec, p);
    const auto art = harness::simulate_trial(spec, ctx, 0);
    const auto rec = harness::score_trial(ctx, 0, art);
    const auto& cfg = p.cfg;

    double stack_err = 0.0;
    std::size_t exact_fits = 0, exact_fit_misses = 0;
    for (std::size_t k = 0; k < cfg.n_users; ++k) {
        for (std::size_t j = 0; j < cfg.n_blocks; ++j) {
            if (art.recovery.erased[k][j]) {
                continue;
            }
            for (std::size_t n = 0; n < cfg.n_bs_antennas; ++n) {
                const cplx got = art.recovery.stacked[k](j * cfg.n_bs_antennas + n, 0);
                stack_err = std::max(stack_err, std::abs(got - art.received.equivalent[j](k, n)));
            }
        }
        const auto& u = art.estimate.users[k];
        if (u.failed) {
            continue;
        }
        const auto fit = linalg::matmul(art.sensing.q, u.d_hat);
        double res = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < fit.rows(); ++i) {
            if (art.recovery.erased[k][i / cfg.n_bs_antennas]) {
                continue;
            }
            res += std::norm(fit[i] - art.recovery.stacked[k][i]);
            ref += std::norm(art.recovery.stacked[k][i]);
        }
        if (res <= 1e-20 * ref) {
            ++exact_fits;
            exact_fit_misses += rec.nmse_db[k] < -90.0 ? 0 : 1;
        }
    }
    const bool ok = !rec.failed && stack_err < 1e-9 && exact_fit_misses == 0;
    return {"noiseless end-to-end trial", ok,
            "stack error " + sci(stack_err) + ", " + std::to_string(exact_fits) + "/" + std::to_string(cfg.n_users) +
                " users fit exactly, weighted BER " + sci(rec.ber.weighted())};
}

} // namespace

std::vector<Check> run(std::uint64_t seed) {
    Rng rng(derive_seed(seed, {0x5e1f}));
    std::vector<std::function<Check()>> checks{
        [&] { return kernel_equivalence(rng); },   [&] { return kron_vec_identity(rng); },
        [&] { return cascade_factorization(rng); }, [&] { return sensing_consistency(rng); },
        [&] { return coherence_decoupling(rng); }, [&] { return gradient_fd(rng); },
        [&] { return somp_exhaustive(rng); },      [&] { return noiseless_trial(seed); },
    };
    std::vector<Check> out;
    for (auto& c : checks) {
        try {
            out.push_back(c());
        } catch (const std::exception& e) {
            out.push_back({"(check threw)", false, e.what()});
        }
    }
    return out;
}

} // namespace blindris::selftest
