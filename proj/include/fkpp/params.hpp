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

#include <cmath>
#include <string>

#include "fkpp/errors.hpp"

namespace fkpp {

/// Diffusion alpha, selection beta, noise gamma. Negative beta is the
/// mirror image of positive beta under u -> 1 - u.
struct ModelParams {
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 1.0;

    void validate() const
    {
        if (!(std::isfinite(alpha) && alpha > 0.0))
            throw DomainError("alpha must be positive and finite, got " + std::to_string(alpha));
        if (!(std::isfinite(gamma) && gamma > 0.0))
            throw DomainError("gamma must be positive and finite, got " + std::to_string(gamma));
        if (!std::isfinite(beta))
            throw DomainError("beta must be finite, got " + std::to_string(beta));
    }

    /// The ratio gamma/alpha that fixes the two-particle eigenproblem.
    double ratio() const { return gamma / alpha; }
};

} // namespace fkpp
