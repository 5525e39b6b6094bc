/*
   Copyright 2026 The fkpp-qsd Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <Eigen/Dense>

#include "fkpp/params.hpp"

namespace fkpp {

/// Principal eigen-pair of a killed two-particle difference chain.
struct LatticeEigen {
    double kappa = 0.0;
    /// Positive eigenvector indexed by site difference j = 0..L-1, scaled to
    /// 1 at the antipode j = L/2 (or its nearest site).
    Eigen::VectorXd profile;
};

/**
 * Continuous-time lattice dual: the difference of two walkers jumps +-1 at
 * rate alpha L^2 each way and is killed at rate gamma L at zero.
 */
LatticeEigen lattice_dual_spectrum(const ModelParams& params, int L);

/**
 * Discrete-time stepping-stone engine: the neutral two-point function
 * E[(1 - u_a) u_b] evolves by killing with probability 1/M at a = b,
 * then by two independent migration moves. kappa = -log(mu) / delta.
 */
LatticeEigen stepping_stone_spectrum(const ModelParams& params, int L, int M);

} // namespace fkpp
