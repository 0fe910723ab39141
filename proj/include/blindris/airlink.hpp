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

#ifndef BLINDRIS_AIRLINK_HPP
#define BLINDRIS_AIRLINK_HPP

#include "blindris/channel.hpp"
#include "blindris/codebook.hpp"
#include "blindris/config.hpp"
#include "blindris/ris.hpp"

#include <span>
#include <vector>

namespace blindris::airlink {

using linalg::ComplexMatrix;

struct TransmissionScenario {
    SystemConfig cfg;
    codebook::Codebook book;
    channel::ChannelRealization channels;
    ris::PhaseSchedule schedule;
    // One message per (user, block), stored block-major: index j * K + k.
    std::vector<codebook::BlockMessage> messages;

    const codebook::BlockMessage& message(std::size_t user, std::size_t block) const {
        return messages[block * cfg.n_users + user];
    }
    // Throws ConfigError if dimensions disagree or (user, block) coverage is
    // not exactly one message each.
    void validate() const;
};

// Draws uniform data bits for every (user, block) and encodes them.
TransmissionScenario make_scenario(const SystemConfig& cfg, codebook::Codebook book,
                                   channel::ChannelRealization channels, ris::PhaseSchedule schedule, Rng& rng);

struct ReceivedBlocks {
    std::vector<ComplexMatrix> y;               // J blocks, M x N_B
    std::vector<ComplexMatrix> noiseless;       // same, before noise
    std::vector<ComplexMatrix> equivalent;      // G(j), K x N_B
    double noise_var = 0.0;
};

// G(j): row k = psi(j)^T H_k.
ComplexMatrix equivalent_channel(std::span<const cplx> psi_col, const channel::ChannelRealization& ch);

// Mean |entry|^2 of the noiseless blocks divided by 10^(snr_db/10). An
// infinite snr gives zero. Throws DegenerateInputError on an all-zero signal.
double noise_variance_for_snr(std::span<const ComplexMatrix> noiseless, double snr_db);

// Lambda(j) (N x N_B): row n_k(j) holds g_k(j)^T, all other rows zero.
ComplexMatrix row_sparse_lambda(const TransmissionScenario& sc, std::size_t block, const ComplexMatrix& g);

// Builds each noiseless Y(j) as sum_k x_k(j) g_k(j)^T and as C Lambda(j),
// throws ModelInconsistencyError if they differ by more than 1e-12
// (relative), then adds CN(0, sigma^2) noise per entry.
ReceivedBlocks synthesize(const TransmissionScenario& sc, double snr_db, Rng& rng);

} // namespace blindris::airlink

#endif
