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

#include "fkpp/dual.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace fkpp {

DualConfiguration DualConfiguration::pair(CirclePoint green, CirclePoint red)
{
    DualConfiguration z;
    z.greens = {green};
    z.reds = {red};
    return z;
}

DualConfiguration DualConfiguration::colorblind_points(std::vector<CirclePoint> points)
{
    DualConfiguration z;
    z.greens = std::move(points);
    return z;
}

namespace {

std::vector<double> sorted_checkpoints(const DualOptions& o)
{
    std::vector<double> c = o.checkpoints;
    std::sort(c.begin(), c.end());
    return c;
}

bool should_stop(StopRule rule, const DualOutcome& out)
{
    switch (rule) {
    case StopRule::AtKilling:
        return out.tau_partial.has_value();
    case StopRule::AtMeet:
        return out.tau_meet.has_value() || out.tau_partial.has_value();
    case StopRule::AtTau1:
        return out.tau_one.has_value();
    default:
        return false;
    }
}

void require_start(const DualConfiguration& z)
{
    if (z.killed) throw StateError("dual run cannot start from a killed configuration");
    if (z.size() == 0) throw StateError("dual run needs at least one particle");
}

/// Site-indexed particle system with incremental co-location bookkeeping.
class LatticeState {
public:
    LatticeState(int L, const DualConfiguration& z, const LatticeDual& engine)
        : L_(L), occ_(L, 0), crowded_at_(L, -1)
    {
        for (const auto& x : z.greens) add(engine.site_of(x), false);
        for (const auto& x : z.reds) add(engine.site_of(x), true);
        had_reds_ = !z.reds.empty();
    }

    int n() const { return static_cast<int>(pos_.size()); }
    int n_red() const { return n_red_; }
    long pairs() const { return pairs_; }
    bool had_reds() const { return had_reds_; }

    void add(int s, bool red)
    {
        pos_.push_back(s);
        red_.push_back(red);
        n_red_ += red;
        enter(s);
    }

    void remove(int i)
    {
        leave(pos_[i]);
        n_red_ -= red_[i];
        pos_[i] = pos_.back();
        red_[i] = red_.back();
        pos_.pop_back();
        red_.pop_back();
    }

    void jump(int i, bool up)
    {
        const int s = pos_[i];
        const int t = up ? (s + 1 == L_ ? 0 : s + 1) : (s == 0 ? L_ - 1 : s - 1);
        leave(s);
        pos_[i] = t;
        enter(t);
    }

    /// Jump when every site holds at most one particle. Returns true when the
    /// move lands on an occupied site.
    bool jump_sparse(int i, bool up)
    {
        const int s = pos_[i];
        const int t = up ? (s + 1 == L_ ? 0 : s + 1) : (s == 0 ? L_ - 1 : s - 1);
        if (occ_[t] != 0) {
            jump(i, up);
            return true;
        }
        occ_[s] = 0;
        occ_[t] = 1;
        pos_[i] = t;
        return false;
    }

    void branch(int i) { add(pos_[i], red_[i]); }

    void coalesce(RngStream& rng)
    {
        // Site with probability C(occ, 2) / pairs, then a uniform pair there.
        long r = static_cast<long>(rng.uniform() * static_cast<double>(pairs_));
        int site = crowded_.back();
        for (int s : crowded_) {
            const long w = static_cast<long>(occ_[s]) * (occ_[s] - 1) / 2;
            if (r < w) {
                site = s;
                break;
            }
            r -= w;
        }
        members_.clear();
        for (int i = 0; i < n(); ++i)
            if (pos_[i] == site) members_.push_back(i);
        const int c = static_cast<int>(members_.size());
        const int a = static_cast<int>(rng.below(static_cast<std::uint32_t>(c)));
        int b = static_cast<int>(rng.below(static_cast<std::uint32_t>(c - 1)));
        if (b >= a) ++b;
        const int ia = members_[a];
        const int ib = members_[b];
        int victim;
        if (red_[ia] != red_[ib])
            victim = red_[ia] ? ia : ib;
        else
            victim = rng.uniform() < 0.5 ? ia : ib;
        remove(victim);
    }

    DualConfiguration configuration(double t, bool killed) const
    {
        DualConfiguration z;
        z.time = t;
        z.killed = killed;
        for (int i = 0; i < n(); ++i) {
            const CirclePoint x(static_cast<double>(pos_[i]) / L_);
            (red_[i] ? z.reds : z.greens).push_back(x);
        }
        return z;
    }

private:
    void enter(int s)
    {
        pairs_ += occ_[s];
        if (++occ_[s] == 2) {
            crowded_at_[s] = static_cast<int>(crowded_.size());
            crowded_.push_back(s);
        }
    }

    void leave(int s)
    {
        if (occ_[s]-- == 2) {
            const int at = crowded_at_[s];
            const int last = crowded_.back();
            crowded_[at] = last;
            crowded_at_[last] = at;
            crowded_.pop_back();
            crowded_at_[s] = -1;
        }
        pairs_ -= occ_[s];
    }

    int L_;
    std::vector<int> pos_;
    std::vector<std::uint8_t> red_;
    std::vector<int> occ_;
    std::vector<int> crowded_;
    std::vector<int> crowded_at_;
    std::vector<int> members_;
    long pairs_ = 0;
    int n_red_ = 0;
    bool had_reds_ = false;
};

/// Records the hitting times that depend on the current state.
void note_state(const LatticeState& st, double t, DualOutcome& out)
{
    if (st.n() == 2 && st.pairs() == 1) {
        if (!out.tau_one) out.tau_one = t;
        if (st.had_reds() && st.n_red() == 1 && !out.tau_meet) out.tau_meet = t;
    }
    if (st.had_reds() && st.n_red() == 0 && !out.tau_partial) out.tau_partial = t;
}

} // namespace

LatticeDual::LatticeDual(const ModelParams& params, int L) : params_(params), L_(L)
{
    params_.validate();
    if (params_.beta < 0.0) throw DomainError("dual branching rate beta must be >= 0");
    if (L < 2) throw DomainError("lattice dual needs L >= 2");
}

int LatticeDual::site_of(CirclePoint x) const
{
    long s = std::lround(x.coordinate() * L_);
    return static_cast<int>(s % L_);
}

DualConfiguration LatticeDual::step(const DualConfiguration& z, RngStream& rng) const
{
    if (z.killed || z.size() == 0) return z;
    LatticeState st(L_, z, *this);
    const double jump = params_.alpha * L_ * L_;
    const double coal = params_.gamma * L_ * static_cast<double>(st.pairs());
    const double per = jump + params_.beta;
    const double R = st.n() * per + coal;
    const double t = z.time + rng.exponential() / R;
    const double u = rng.uniform() * R;
    if (u < st.n() * jump) {
        const int i = static_cast<int>(rng.below(static_cast<std::uint32_t>(st.n())));
        st.jump(i, rng.uniform() < 0.5);
    } else if (u < st.n() * per) {
        st.branch(static_cast<int>(rng.below(static_cast<std::uint32_t>(st.n()))));
    } else {
        st.coalesce(rng);
    }
    return st.configuration(t, st.had_reds() && st.n_red() == 0);
}

DualOutcome LatticeDual::run(const DualConfiguration& z0, double t_max, RngStream& rng,
                             const DualOptions& options) const
{
    require_start(z0);
    LatticeState st(L_, z0, *this);
    DualOutcome out;
    const std::vector<double> cps = sorted_checkpoints(options);
    std::size_t next_cp = 0;
    double t = z0.time;

    const double jump = params_.alpha * L_ * L_;
    const double beta = params_.beta;
    const double per = jump + beta;
    const double branch_frac = beta / per;
    const double pair_rate = options.coalescence ? params_.gamma * L_ : 0.0;

    auto record = [&]() {
        while (next_cp < cps.size() && cps[next_cp] <= t) {
            out.series.push_back({cps[next_cp], st.n() - st.n_red(), st.n_red()});
            if (options.record_configurations)
                out.configurations.push_back(st.configuration(cps[next_cp], out.tau_partial.has_value()));
            ++next_cp;
        }
    };

    note_state(st, t, out);
    record();
    bool stopped = should_stop(options.stop, out);

    while (!stopped && t < t_max) {
        const double horizon = next_cp < cps.size() ? std::min(cps[next_cp], t_max) : t_max;
        bool structural = false;
        if (st.pairs() == 0 || pair_rate == 0.0) {
            // No co-located pair: constant total rate until the next branch or meeting.
            const int n = st.n();
            // Bounded batches keep the Poisson mean finite for open-ended runs.
            const double span = std::min(horizon - t, 1e6 / (n * per));
            const long K = rng.poisson(n * per * span);
            long j = 0;
            while (j < K) {
                ++j;
                const std::uint64_t r = rng();
                const int i = static_cast<int>(((r >> 32) * static_cast<std::uint64_t>(n)) >> 32);
                bool hit = false;
                if (beta > 0.0 && rng.uniform() < branch_frac) {
                    st.branch(i);
                    hit = true;
                } else if (st.pairs() == 0) {
                    if (st.jump_sparse(i, (r & 1u) != 0)) hit = pair_rate > 0.0;
                } else {
                    st.jump(i, (r & 1u) != 0);
                }
                if (hit) {
                    structural = true;
                    break;
                }
            }
            if (structural) {
                // Time of the j-th of K uniform event times on [t, horizon].
                t += span * rng.beta(static_cast<double>(j), static_cast<double>(K - j + 1));
            } else {
                t = span < horizon - t ? t + span : horizon;
            }
        } else {
            const double R = st.n() * per + pair_rate * static_cast<double>(st.pairs());
            const double dt = rng.exponential() / R;
            if (t + dt >= horizon) {
                t = horizon;
            } else {
                t += dt;
                structural = true;
                const double u = rng.uniform() * R;
                if (u < st.n() * jump) {
                    const std::uint64_t r = rng();
                    const int i = static_cast<int>(((r >> 32) * static_cast<std::uint64_t>(st.n())) >> 32);
                    st.jump(i, (r & 1u) != 0);
                } else if (u < st.n() * per) {
                    st.branch(static_cast<int>(rng.below(static_cast<std::uint32_t>(st.n()))));
                } else {
                    st.coalesce(rng);
                }
            }
        }
        if (structural) {
            note_state(st, t, out);
            stopped = should_stop(options.stop, out);
        }
        if (!stopped) record();
    }
    if (out.tau_meet && out.tau_partial) assert(*out.tau_meet <= *out.tau_partial);
    out.final_state = st.configuration(t, out.tau_partial.has_value());
    return out;
}

ContinuousDual::ContinuousDual(const ModelParams& params, double delta)
    : params_(params), delta_(delta)
{
    params_.validate();
    if (params_.beta < 0.0) throw DomainError("dual branching rate beta must be >= 0");
    if (!(delta > 0.0)) throw DomainError("continuous dual needs delta > 0");
    // Beyond 13 sqrt(alpha delta) the window local time is below e^-40.
    cutoff_ = std::min(0.5, 13.0 * std::sqrt(params_.alpha * delta_));
    const int n = 4096;
    table_step_ = cutoff_ / n;
    table_.resize(n + 1);
    const double scale = params_.gamma / (2.0 * params_.alpha);
    for (int i = 0; i <= n; ++i) {
        const double lt = local_time_window_mean(i * table_step_, delta_, 2.0 * params_.alpha);
        table_[i] = -std::expm1(-scale * lt);
    }
}

double ContinuousDual::pair_probability(double d) const
{
    if (d >= cutoff_) return cutoff_ < 0.5 ? 0.0 : table_.back();
    const double x = d / table_step_;
    const auto i = static_cast<std::size_t>(x);
    const double f = x - static_cast<double>(i);
    return table_[i] * (1.0 - f) + table_[i + 1] * f;
}

void ContinuousDual::advance(std::vector<double>& x, std::vector<std::uint8_t>& red,
                             RngStream& rng) const
{
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<char> alive(n, 1);
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t i = order[a];
        for (std::size_t k = 1; k < n && alive[i]; ++k) {
            const std::size_t j = order[(a + k) % n];
            const double gap = CirclePoint::canonical(x[j] - x[i]);
            // Each unordered pair is visited once, from the end with the shorter forward gap.
            if (gap >= cutoff_ || gap >= 0.5) break;
            if (!alive[j]) continue;
            if (rng.uniform() < pair_probability(gap)) {
                std::size_t victim;
                if (red[i] != red[j])
                    victim = red[i] ? i : j;
                else
                    victim = rng.uniform() < 0.5 ? i : j;
                alive[victim] = 0;
            }
        }
    }
    std::vector<double> nx;
    std::vector<std::uint8_t> nr;
    const double births = params_.beta * delta_;
    const double p0 = std::exp(-births);
    for (std::size_t i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        nx.push_back(x[i]);
        nr.push_back(red[i]);
        if (births > 0.0) {
            // Poisson(beta delta) offspring by inversion.
            double u = rng.uniform();
            double term = p0;
            int k = 0;
            while (u >= term) {
                u -= term;
                ++k;
                term *= births / k;
            }
            for (int b = 0; b < k; ++b) {
                nx.push_back(x[i]);
                nr.push_back(red[i]);
            }
        }
    }
    const double sd = std::sqrt(params_.alpha * delta_);
    for (double& v : nx) v = CirclePoint::canonical(v + sd * rng.normal());
    x.swap(nx);
    red.swap(nr);
}

namespace {

void split(const DualConfiguration& z, std::vector<double>& x, std::vector<std::uint8_t>& red)
{
    for (const auto& g : z.greens) {
        x.push_back(g.coordinate());
        red.push_back(0);
    }
    for (const auto& r : z.reds) {
        x.push_back(r.coordinate());
        red.push_back(1);
    }
}

DualConfiguration join(const std::vector<double>& x, const std::vector<std::uint8_t>& red, double t,
                       bool killed)
{
    DualConfiguration z;
    z.time = t;
    z.killed = killed;
    for (std::size_t i = 0; i < x.size(); ++i) (red[i] ? z.reds : z.greens).push_back(CirclePoint(x[i]));
    return z;
}

} // namespace

DualConfiguration ContinuousDual::step(const DualConfiguration& z, RngStream& rng) const
{
    if (z.killed || z.size() == 0) return z;
    std::vector<double> x;
    std::vector<std::uint8_t> red;
    split(z, x, red);
    const bool had_reds = !z.reds.empty();
    advance(x, red, rng);
    const bool killed = had_reds && std::count(red.begin(), red.end(), 1) == 0;
    return join(x, red, z.time + delta_, killed);
}

DualOutcome ContinuousDual::run(const DualConfiguration& z0, double t_max, RngStream& rng,
                                const DualOptions& options) const
{
    require_start(z0);
    if (!options.coalescence)
        throw UnsupportedError("coalescence can only be disabled on the lattice engine");
    DualOutcome out;
    const std::vector<double> cps = sorted_checkpoints(options);
    std::size_t next_cp = 0;
    std::vector<double> x;
    std::vector<std::uint8_t> red;
    split(z0, x, red);
    const bool had_reds = !z0.reds.empty();
    const double meet = std::sqrt(params_.alpha * delta_);
    const double t0 = z0.time;
    const long total = std::lround((t_max - t0) / delta_);
    double t = t0;
    auto n_red = [&]() { return static_cast<int>(std::count(red.begin(), red.end(), 1)); };

    auto note = [&]() {
        if (x.size() == 2 && geodesic_distance(CirclePoint(x[0]), CirclePoint(x[1])) < meet) {
            if (!out.tau_one) out.tau_one = t;
            if (had_reds && n_red() == 1 && !out.tau_meet) out.tau_meet = t;
        }
        if (had_reds && n_red() == 0 && !out.tau_partial) out.tau_partial = t;
    };
    auto record = [&](long s) {
        while (next_cp < cps.size() && std::lround((cps[next_cp] - t0) / delta_) <= s) {
            const int r = n_red();
            out.series.push_back({cps[next_cp], static_cast<int>(x.size()) - r, r});
            if (options.record_configurations)
                out.configurations.push_back(join(x, red, cps[next_cp], out.tau_partial.has_value()));
            ++next_cp;
        }
    };
    note();
    record(0);
    bool stopped = should_stop(options.stop, out);
    for (long s = 1; s <= total && !stopped; ++s) {
        advance(x, red, rng);
        t = t0 + s * delta_;
        note();
        stopped = should_stop(options.stop, out);
        if (!stopped) record(s);
    }
    out.final_state = join(x, red, t, out.tau_partial.has_value());
    return out;
}

double phi_bar(const DualConfiguration& z, const EigenSolution& eigen)
{
    if (z.killed) return 0.0;
    if (z.greens.size() == 1 && z.reds.size() == 1)
        return right_efn_two_particle(geodesic_distance(z.greens[0], z.reds[0]), eigen);
    throw UnsupportedError("phi_bar has a closed form only for one green and one red");
}

std::vector<MartingalePoint> martingale_functional(const std::vector<DualOutcome>& paths,
                                                   const EigenSolution& eigen,
                                                   const std::vector<double>& checkpoints)
{
    std::vector<MartingalePoint> out;
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        const double t = checkpoints[c];
        const double w = std::exp(eigen.kappa * t);
        double sum = 0.0;
        double sum2 = 0.0;
        for (const auto& p : paths) {
            double v;
            if (c < p.configurations.size())
                v = w * phi_bar(p.configurations[c], eigen);
            else if (p.tau_partial && *p.tau_partial <= t)
                v = 0.0;
            else
                throw StateError("path has no configuration recorded at a checkpoint");
            sum += v;
            sum2 += v * v;
        }
        const double n = static_cast<double>(paths.size());
        const double mean = sum / n;
        const double var = n > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1)) : 0.0;
        out.push_back({t, mean, std::sqrt(var / n)});
    }
    return out;
}

} // namespace fkpp
