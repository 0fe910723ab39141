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

#ifndef BLINDRIS_CHANNEL_HPP
#define BLINDRIS_CHANNEL_HPP

#include "blindris/config.hpp"
#include "blindris/linalg.hpp"
#include "blindris/random.hpp"

#include <iosfwd>
#include <vector>

namespace blindris::channel {

using linalg::ComplexMatrix;

// ULA response for half-wavelength spacing. spatial_freq is cos(angle)
// folded into [0, 2); entry n is exp(i*pi*n*spatial_freq) / sqrt(n_elements).
ComplexMatrix steering_vector(std::size_t n_elements, double spatial_freq);

// Steering dictionaries on a uniform spatial-frequency grid: column g of an
// N x G dictionary sits at spatial frequency 2g/G. The uniform cosine grid
// is what turns the Khatri-Rao merge of the cascade into a modular shift.
struct SteeringDictionary {
    ComplexMatrix f_bs;  // N_B x G_B
    ComplexMatrix f_ris; // N_R x G_R
    std::vector<double> bs_freqs;
    std::vector<double> ris_freqs;
};

SteeringDictionary build_dictionaries(const SystemConfig& cfg);

// One on-grid propagation path of the RIS-BS hop.
struct RbPath {
    std::size_t ris_grid;
    std::size_t bs_grid;
    cplx gain; // rho, before the sqrt(N_R N_B / L_RB) scaling
};

// One on-grid path of a user-RIS hop.
struct RuPath {
    std::size_t ris_grid;
    cplx gain; // varrho, before the sqrt(N_R / L_RU) scaling
};

struct ChannelRealization {
    ComplexMatrix h_rb;                  // N_R x N_B
    ComplexMatrix d_rb;                  // G_R x G_B, L_RB nonzeros
    std::vector<ComplexMatrix> h_ru;     // per user, N_R x 1
    std::vector<ComplexMatrix> d_ru;     // per user, G_R x 1, L_RU nonzeros
    std::vector<ComplexMatrix> cascade;  // per user H_k = diag(conj(h_RU,k)) H_RB
    std::vector<ComplexMatrix> d_cascade; // per user D_k with H_k = F_R D_k F_B^H
    std::vector<RbPath> rb_paths;
    std::vector<std::vector<RuPath>> ru_paths;

    std::size_t n_users() const { return h_ru.size(); }
};

// Deterministic construction from explicit paths. The path gains are scaled
// by sqrt(N_R N_B / |rb_paths|) and sqrt(N_R / |ru_paths[k]|).
ChannelRealization build_channel(const SteeringDictionary& dict, std::vector<RbPath> rb_paths,
                                 std::vector<std::vector<RuPath>> ru_paths);

// Draws grid indices uniformly without replacement within each channel and
// gains CN(0, 1/L_RB), CN(0, 1/L_RU).
ChannelRealization sample_channel(const SystemConfig& cfg, const SteeringDictionary& dict, Rng& rng);

// Angular-domain cascade of one user. Khatri-Rao column (i, j) of
// conj(F_R) . F_R equals F_R(:, (j - i) mod G_R) / sqrt(N_R), so row m of
// D_k accumulates conj(d_ru[i]) * D_RB[j, :] / sqrt(N_R) over (j - i) = m.
ComplexMatrix merge_cascade(const ComplexMatrix& d_ru_k, const ComplexMatrix& d_rb, std::size_t n_ris);

// Text fixture format, see README ("Realization files").
void write_realization(std::ostream& os, const ChannelRealization& ch);
ChannelRealization read_realization(std::istream& is);

} // namespace blindris::channel

#endif
