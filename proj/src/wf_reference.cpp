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

#include "fkpp/wf_reference.hpp"

#include <algorithm>
#include <cmath>

#include "fkpp/errors.hpp"
#include "fkpp/fkpp_engine.hpp"

namespace fkpp {

double wf_spectrum(int n, double gamma)
{
    if (n < 2) throw DomainError("WF spectrum is indexed by n >= 2");
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    return -gamma * n * (n - 1) / 2.0;
}

double wf_survival_asymptotic(double x, double t, double gamma)
{
    if (!(x > 0.0 && x < 1.0)) throw DomainError("survival asymptotic needs 0 < x < 1");
    return 6.0 * x * (1.0 - x) * std::exp(-gamma * t);
}

KingmanState kingman_step(KingmanState state, double gamma, RngStream& rng)
{
    if (state.block_count <= 1) return state;
    const double n = state.block_count;
    state.time += rng.exponential() / (gamma * n * (n - 1) / 2.0);
    --state.block_count;
    return state;
}

KingmanState kingman_run(KingmanState state, double gamma, double t, RngStream& rng)
{
    while (state.block_count > 1) {
        const KingmanState next = kingman_step(state, gamma, rng);
        if (next.time > t) break;
        state = next;
    }
    state.time = t;
    return state;
}

WfSample wf_simulate(double x0, const WfParams& params, RngStream& rng, double t, int M_wf)
{
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("WF start must lie in [0, 1]");
    const ModelParams p{1.0, params.beta, params.gamma};
    const SteppingStone engine(p, 1, M_wf);
    LatticeField f = make_field(profiles::constant(x0), 1, M_wf);
    WfSample s;
    if (f.absorbed()) {
        s.absorbed = true;
        s.tau = 0.0;
        s.value = f.value(0);
        return s;
    }
    const RunResult r = engine.run_to_fixation(f, rng, t);
    s.absorbed = r.outcome.tau_fix.has_value();
    s.tau = r.outcome.tau_fix;
    s.value = r.final_field.value(0);
    return s;
}

double ks_distance_uniform(std::vector<double> sample)
{
    if (sample.empty()) throw DomainError("KS distance needs a nonempty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double x = std::clamp(sample[i], 0.0, 1.0);
        d = std::max({d, (i + 1) / n - x, x - i / n});
    }
    return d;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, int bins)
{
    if (bins < 1) throw DomainError("histogram needs at least one bin");
    std::vector<HistogramBin> h(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) {
        h[b].left = static_cast<double>(b) / bins;
        h[b].right = static_cast<double>(b + 1) / bins;
    }
    if (values.empty()) return h;
    for (double v : values) {
        int b = static_cast<int>(v * bins);
        b = std::clamp(b, 0, bins - 1);
        h[b].mass += 1.0;
    }
    for (auto& bin : h) bin.mass /= static_cast<double>(values.size());
    return h;
}

} // namespace fkpp
