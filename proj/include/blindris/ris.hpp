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

#ifndef BLINDRIS_RIS_HPP
#define BLINDRIS_RIS_HPP

#include "blindris/linalg.hpp"
#include "blindris/random.hpp"

#include <iosfwd>
#include <string_view>
#include <vector>

namespace blindris::ris {

using linalg::ComplexMatrix;

enum class ScheduleOrigin { random, optimized, file };

std::string_view origin_name(ScheduleOrigin o);

// N_R x J unit-modulus matrix; column j holds the RIS reflection
// coefficients used during block j.
struct PhaseSchedule {
    ComplexMatrix psi;
    ScheduleOrigin origin = ScheduleOrigin::random;

    std::size_t n_ris() const { return psi.rows(); }
    std::size_t n_blocks() const { return psi.cols(); }
};

// Phases i.i.d. uniform on (0, 2pi].
PhaseSchedule random_schedule(std::size_t n_ris, std::size_t n_blocks, Rng& rng);

// Max normalized inner product over distinct column pairs. Throws
// DegenerateInputError for fewer than two columns or a zero column.
double mutual_coherence(const ComplexMatrix& a);

// Psi^T F_R (J x G_R), the RIS-side factor of the sensing matrix.
ComplexMatrix ris_operand(const ComplexMatrix& psi, const ComplexMatrix& f_ris);

struct ObjectiveValue {
    double value = 0.0;
    ComplexMatrix euclid_grad; // d value / d conj(Psi), N_R x J
};

// ||A^H A - xi I||_F^2 with A = Psi^T F_R, and its Wirtinger gradient
// 2 conj(F_R) (A E)^T where E = A^H A - xi I.
ObjectiveValue design_objective(const ComplexMatrix& psi, const ComplexMatrix& f_ris, double xi);
double design_value(const ComplexMatrix& psi, const ComplexMatrix& f_ris, double xi);

// tr(A^H A) / G_R, the xi minimizing the objective for a fixed Psi.
double optimal_xi(const ComplexMatrix& psi, const ComplexMatrix& f_ris);

// Projection onto the tangent space of the complex circle manifold at psi.
ComplexMatrix tangent_projection(const ComplexMatrix& grad, const ComplexMatrix& psi);

// Entrywise z / |z|. Zero entries map to 1.
ComplexMatrix retract(const ComplexMatrix& psi);

struct OptimizerOptions {
    std::size_t max_iters = 500;
    double tol = 1e-6;
    double initial_step = 1.0;
    double shrink = 0.5;
    double sufficient_decrease = 1e-4;
    std::size_t max_backtracks = 60;
};

struct OptimizationResult {
    PhaseSchedule schedule;
    std::vector<double> trace; // objective at (Psi_t, xi*(Psi_t)), t = 0..iterations
    std::size_t iterations = 0;
    bool converged = false;
};

// Alternates the closed-form xi update with one Riemannian gradient step on
// the unit-modulus manifold (Armijo backtracking, normalization retraction).
// Each line search starts from twice the previous accepted step, capped at
// initial_step. Throws NumericalError on a non-finite objective.
OptimizationResult optimize_schedule(const ComplexMatrix& f_ris, const PhaseSchedule& init,
                                     const OptimizerOptions& opts = {});

// J lines, each with N_R phases in radians.
void write_schedule(std::ostream& os, const PhaseSchedule& s);
PhaseSchedule read_schedule(std::istream& is);

} // namespace blindris::ris

#endif
