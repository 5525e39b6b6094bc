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

#include "fkpp/circle.hpp"

#include <cmath>

namespace fkpp {

double local_time_window_mean(double d, double delta, double two_alpha)
{
    if (!(delta > 0.0)) throw DomainError("local time window needs delta > 0");
    if (!(two_alpha > 0.0)) throw DomainError("local time window needs positive diffusivity");
    if (!(d >= 0.0)) throw DomainError("local time window needs d >= 0");

    // Tanaka on the line: E L^0_T = E|X_T| - |a| for X_0 = a, variance T.
    // The circle adds one term per image a = |d + k|.
    const double T = two_alpha * delta;
    const double root = std::sqrt(T);
    const double head = std::sqrt(2.0 * T / boost::math::constants::pi<double>());
    auto term = [&](double a) {
        return head * std::exp(-a * a / (2.0 * T)) - a * std::erfc(a / (root * std::sqrt(2.0)));
    };
    double sum = term(d);
    // Terms fall off like exp(-a^2 / 2T); stop once they are below e^-60.
    const double reach = d + 11.0 * root + 1.0;
    for (int k = 1; k <= reach; ++k) sum += term(std::abs(d + k)) + term(std::abs(d - k));
    return sum;
}

} // namespace fkpp
