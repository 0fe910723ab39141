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

#ifndef BLINDRIS_CASCADE_HPP
#define BLINDRIS_CASCADE_HPP

#include "blindris/channel.hpp"
#include "blindris/linalg.hpp"
#include "blindris/recovery.hpp"
#include "blindris/ris.hpp"

#include <optional>
#include <string>
#include <vector>

namespace blindris::cascade {

using linalg::ComplexMatrix;

// Stack over blocks j of kron(conj(F_B), psi(j)^T F_R). Row j*N_B + n,
// column b*G_R + r, so Q * vec(D) with column-stacked D (G_R x G_B)
// reproduces the stacked equivalent channels.
struct SensingMatrix {
    ComplexMatrix q; // (J*N_B) x (G_B*G_R)
    std::size_t n_bs = 0;
    std::size_t n_blocks = 0;
    std::size_t grid_bs = 0;
    std::size_t grid_ris = 0;
};

SensingMatrix build_sensing_matrix(const ComplexMatrix& f_bs, const ComplexMatrix& f_ris,
                                   const ris::PhaseSchedule& schedule);

struct OmpOptions {
    std::size_t sparsity = 0;
    // Unknown-sparsity mode: stop once ||r|| <= residual_threshold * ||y||,
    // with sparsity acting as the atom budget.
    std::optional<double> residual_threshold;
};

struct OmpResult {
    ComplexMatrix coeffs;              // cols(q) x 1, zero off the support
    std::vector<std::size_t> support;  // selection order
    std::vector<double> residual_norms; // ||r|| before the first and after each step
};

// Orthogonal matching pursuit with |q_j^H r| selection (lowest index wins
// ties) and a least-squares refit each step. Rows with row_mask[i] == true are
// dropped from both y and q. Stops early when the residual vanishes
// (<= 1e-12 ||y||). Throws InsufficientMeasurementsError when fewer unmasked
// rows than sparsity remain, NumericalRankError on a rank-deficient support.
OmpResult omp(const ComplexMatrix& y, const ComplexMatrix& q, const OmpOptions& opts,
              const std::vector<bool>& row_mask = {});

struct UserCascade {
    bool failed = false;
    std::string failure;
    ComplexMatrix d_hat; // (G_R*G_B) x 1
    ComplexMatrix D_hat; // G_R x G_B
    ComplexMatrix H_hat; // N_R x N_B
    std::vector<std::size_t> support;
};

struct CascadeEstimate {
    std::vector<UserCascade> users;
};

// One user: masks the rows of erased blocks, runs OMP and maps the sparse
// angular estimate back to H_hat = F_R D_hat F_B^H. Throws as omp() does.
UserCascade estimate_user_cascade(const ComplexMatrix& stacked, const std::vector<bool>& erased_blocks,
                                  const SensingMatrix& sensing, const channel::SteeringDictionary& dict,
                                  const OmpOptions& opts);

// All users; a user whose solve throws is marked failed with H_hat = 0.
CascadeEstimate estimate_cascades(const recovery::RecoveryOutput& rec, const SensingMatrix& sensing,
                                  const channel::SteeringDictionary& dict, const OmpOptions& opts);

} // namespace blindris::cascade

#endif
