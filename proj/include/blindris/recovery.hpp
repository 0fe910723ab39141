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

#ifndef BLINDRIS_RECOVERY_HPP
#define BLINDRIS_RECOVERY_HPP

#include "blindris/codebook.hpp"
#include "blindris/config.hpp"
#include "blindris/linalg.hpp"

#include <span>
#include <vector>

namespace blindris::recovery {

using linalg::ComplexMatrix;

struct SompResult {
    std::vector<std::size_t> support; // the K kept indices, in selection order
    ComplexMatrix rows;               // K x N_B, row i belongs to support[i]
    std::vector<std::size_t> selected; // every index picked, in order
    std::vector<double> residual_norms; // ||R||_F before the first and after each iteration
};

// Simultaneous OMP on one block. Selects argmax ||R^H c_n|| / ||c_n|| over
// unselected columns (lowest index wins ties), refits Y on the selected
// columns by least squares, and after n_iters iterations keeps the k rows of
// the fit with the largest l2 norms. Throws ConfigError unless
// k <= n_iters <= min(M, N), and NumericalRankError if the selected columns
// become rank deficient.
SompResult somp(const ComplexMatrix& y, const ComplexMatrix& codebook, std::size_t k, std::size_t n_iters);

struct UserResolution {
    bool erased = true;
    std::size_t index = 0; // resolved codeword index
    ComplexMatrix row;     // 1 x N_B equivalent-channel estimate
};

// Maps each raw index to its owning user by ID range. A user claimed by
// exactly one index is resolved; users claimed zero or several times are
// erased, and colliding indices are assigned to nobody. Indices in an
// unassigned range (non-power-of-two K) are dropped.
std::vector<UserResolution> resolve_permutation(std::span<const std::size_t> raw_support,
                                                const ComplexMatrix& raw_rows, const codebook::Codebook& book);

struct BlockRecovery {
    std::size_t block = 0;
    std::vector<std::size_t> raw_support;
    ComplexMatrix raw_rows;
    std::vector<UserResolution> users;
    bool failed = false; // S-OMP hit a rank-deficient support; all users erased
};

struct RecoveryOutput {
    std::vector<BlockRecovery> blocks;
    std::vector<ComplexMatrix> stacked;     // per user, (J*N_B) x 1, block-major
    std::vector<std::vector<bool>> erased;  // per user, per block
};

// Per-block S-OMP + permutation resolution, then stacks each user's rows in
// block order. Erased blocks leave zeros in the stack and set the mask.
// n_iters = 0 means K.
RecoveryOutput recover_all_blocks(std::span<const ComplexMatrix> y, const codebook::Codebook& book,
                                  const SystemConfig& cfg, std::size_t n_iters = 0);

} // namespace blindris::recovery

#endif
