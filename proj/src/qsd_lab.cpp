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

#include "fkpp/qsd_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "fkpp/ensemble.hpp"

namespace fkpp {

MeanStderr mean_stderr(const std::vector<double>& values)
{
    MeanStderr r;
    const double n = static_cast<double>(values.size());
    if (values.empty()) return r;
    double s = 0.0;
    for (double v : values) s += v;
    r.mean = s / n;
    if (values.size() < 2) return r;
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.stderr = std::sqrt(ss / (n - 1) / n);
    return r;
}

double eval_D(const LatticeField& f, const std::vector<CirclePoint>& points)
{
    double d = 1.0;
    for (const auto& x : points) d *= 1.0 - f.at(x);
    return d;
}

double eval_E(const LatticeField& f, const DualConfiguration& z)
{
    if (z.killed || z.reds.empty()) return 0.0;
    return eval_D(f, z.greens) * (1.0 - eval_D(f, z.reds));
}

// ---------------------------------------------------------------- survival

SurvivalCurve survival_from_times(const std::vector<std::optional<double>>& taus,
                                  const std::vector<double>& checkpoints)
{
    SurvivalCurve c;
    c.replica_count = static_cast<long>(taus.size());
    if (taus.empty()) throw DomainError("survival curve needs at least one replica");
    std::vector<double> finite;
    for (const auto& t : taus)
        if (t) finite.push_back(*t);
    std::sort(finite.begin(), finite.end());
    std::vector<double> cps = checkpoints;
    std::sort(cps.begin(), cps.end());
    const double n = static_cast<double>(c.replica_count);
    const double z = 1.959963984540054;
    for (double t : cps) {
        const long dead = std::upper_bound(finite.begin(), finite.end(), t) - finite.begin();
        const long alive = c.replica_count - dead;
        const double p = alive / n;
        const double denom = 1.0 + z * z / n;
        const double centre = (p + z * z / (2.0 * n)) / denom;
        const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
        c.times.push_back(t);
        c.survivors.push_back(alive);
        c.surviving_fraction.push_back(p);
        c.ci_low.push_back(std::max(0.0, centre - half));
        c.ci_high.push_back(std::min(1.0, centre + half));
    }
    return c;
}

SurvivalRun survival_curve(const LatticeField& u0, const ModelParams& params,
                           const std::vector<double>& checkpoints, long replicas,
                           const EnsembleOptions& options)
{
    if (replicas < 1) throw DomainError("survival curve needs replicas >= 1");
    if (checkpoints.empty()) throw DomainError("survival curve needs checkpoints");
    const double t_max = *std::max_element(checkpoints.begin(), checkpoints.end());
    const SteppingStone engine(params, u0.sites(), u0.M, u0.circumference);
    struct One {
        std::optional<double> tau;
        AbsorbedSide side = AbsorbedSide::None;
    };
    auto runs = run_indexed<One>(static_cast<std::size_t>(replicas), options.workers, [&](std::size_t r) {
        RngStream rng(options.seed, stream_id(StreamTag::SpdeReplica, r, options.case_index));
        One o;
        if (u0.absorbed()) {
            o.tau = u0.time;
            o.side = u0.absorbed_side();
            return o;
        }
        const RunResult res = engine.run_to_fixation(u0, rng, t_max);
        o.tau = res.outcome.tau_fix;
        o.side = res.outcome.side;
        return o;
    });
    SurvivalRun out;
    for (const auto& o : runs) {
        out.tau.push_back(o.tau);
        out.side.push_back(o.side);
    }
    out.curve = survival_from_times(out.tau, checkpoints);
    return out;
}

FitWindow default_window(const std::vector<std::optional<double>>& taus)
{
    if (taus.empty()) throw DomainError("fit window needs absorption times");
    std::vector<double> all;
    all.reserve(taus.size());
    for (const auto& t : taus) all.push_back(t ? *t : std::numeric_limits<double>::infinity());
    std::sort(all.begin(), all.end());
    auto q = [&](double p) {
        const std::size_t k = static_cast<std::size_t>(std::ceil(p * all.size()));
        return all[std::max<std::size_t>(k, 1) - 1];
    };
    FitWindow w{q(0.5), q(0.99)};
    if (!std::isfinite(w.t_hi)) {
        double last = 0.0;
        for (double t : all)
            if (std::isfinite(t)) last = t;
        w.t_hi = last;
    }
    return w;
}

RateFit fit_rate(const SurvivalCurve& curve, FitWindow window)
{
    std::vector<double> t, y, v;
    const double n = static_cast<double>(curve.replica_count);
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        const double ti = curve.times[i];
        const double p = curve.surviving_fraction[i];
        if (ti < window.t_lo || ti > window.t_hi) continue;
        if (curve.survivors[i] < 30 || !(p < 1.0)) continue;
        t.push_back(ti);
        y.push_back(std::log(p));
        v.push_back((1.0 - p) / (n * p));
    }
    if (t.size() < 4) {
        std::ostringstream os;
        os << "fit window [" << window.t_lo << ", " << window.t_hi << "] has " << t.size()
           << " checkpoints with >= 30 survivors; need 4";
        throw FitWindowError(os.str());
    }
    const Eigen::Index k = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd C(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) C(i, j) = v[static_cast<std::size_t>(std::min(i, j))];
    Eigen::MatrixXd X(k, 2);
    Eigen::VectorXd Y(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = -t[static_cast<std::size_t>(i)];
        Y(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(C);
    const Eigen::MatrixXd CiX = ldlt.solve(X);
    const Eigen::Matrix2d info = X.transpose() * CiX;
    const Eigen::Vector2d coef = info.ldlt().solve(CiX.transpose() * Y);
    const Eigen::Matrix2d cov = info.inverse();
    RateFit r;
    r.log_intercept = coef(0);
    r.kappa_hat = coef(1);
    r.stderr = std::sqrt(std::max(0.0, cov(1, 1)));
    r.points = static_cast<int>(k);
    return r;
}

// ------------------------------------------------------------ Fleming-Viot

namespace {

struct BatchAccumulator {
    std::vector<double> sum;
    long count = 0;
};

} // namespace

FlemingViotResult fleming_viot(const LatticeField& u0, const ModelParams& params,
                               const FlemingViotOptions& fv, const EnsembleOptions& options)
{
    if (fv.n_replicas < 100) throw DomainError("Fleming-Viot needs n_replicas >= 100");
    if (u0.absorbed()) throw StateError("Fleming-Viot needs a non-absorbed initial field");
    if (fv.batches < 2) throw DomainError("Fleming-Viot needs at least two batches");
    const SteppingStone engine(params, u0.sites(), u0.M, u0.circumference);
    const int L = u0.sites();
    const int N = fv.n_replicas;
    const long chunk_steps = std::max(1L, engine.steps_for(fv.sample_interval));
    const double chunk_time = chunk_steps * engine.dt();
    const long chunks = std::max(2L, static_cast<long>(std::ceil(fv.horizon / chunk_time)));
    const double burn = fv.burn_in < 0.0 ? 0.5 * fv.horizon : fv.burn_in;
    const long burn_chunks = std::min(chunks - 1, static_cast<long>(std::floor(burn / chunk_time)));
    const long samples = chunks - burn_chunks;
    const int B = static_cast<int>(std::min<long>(fv.batches, samples));
    if (B < 2) throw DomainError("Fleming-Viot horizon too short for two batches after burn-in");

    std::vector<int> probe_site;
    for (double x : fv.probes) probe_site.push_back(u0.site_of(CirclePoint(x).coordinate() * u0.circumference));
    std::vector<int> offsets;
    FlemingViotResult out;
    for (double d : fv.distances) {
        if (!(d >= 0.0 && d <= 0.5)) throw DomainError("two-point distances must lie in [0, 1/2]");
        const int j = static_cast<int>(std::lround(d * L));
        offsets.push_back(j);
        out.lattice_distance.push_back(static_cast<double>(j) / L);
    }
    const std::size_t n_one = probe_site.size();
    const std::size_t n_two = offsets.size();
    // Layout: one-point, two-point, mean, mean^2.
    const std::size_t n_fun = n_one + n_two + 2;

    std::vector<LatticeField> fields(static_cast<std::size_t>(N), u0);
    RngStream driver(options.seed, stream_id(StreamTag::FlemingViotDriver, 0, options.case_index));
    std::vector<BatchAccumulator> batch(static_cast<std::size_t>(B));
    for (auto& b : batch) b.sum.assign(n_fun, 0.0);
    std::vector<double> batch_deaths(static_cast<std::size_t>(B), 0.0);
    std::vector<double> batch_exposure(static_cast<std::size_t>(B), 0.0);

    for (long c = 0; c < chunks; ++c) {
        auto steps = run_indexed<long>(static_cast<std::size_t>(N), options.workers, [&](std::size_t i) {
            RngStream rng(options.seed,
                          stream_id(StreamTag::FlemingViotReplica,
                                    static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(N) + i,
                                    options.case_index));
            return engine.advance(fields[i], rng, chunk_steps);
        });
        std::vector<int> dead;
        std::vector<int> alive;
        double exposure = 0.0;
        for (int i = 0; i < N; ++i) {
            exposure += steps[static_cast<std::size_t>(i)] * engine.dt();
            (fields[static_cast<std::size_t>(i)].absorbed() ? dead : alive).push_back(i);
        }
        if (alive.empty()) {
            std::ostringstream os;
            os << "all " << N << " Fleming-Viot replicas absorbed in chunk " << c
               << "; raise n_replicas or shorten sample_interval";
            throw EnsembleCollapse(os.str());
        }
        for (int i : dead) {
            const int donor = alive[driver.below(static_cast<std::uint32_t>(alive.size()))];
            fields[static_cast<std::size_t>(i)] = fields[static_cast<std::size_t>(donor)];
        }
        const double t_now = (c + 1) * chunk_time;
        for (auto& f : fields) f.time = t_now;
        out.replacements += static_cast<long>(dead.size());
        if (c < burn_chunks) continue;

        const long s = c - burn_chunks;
        const auto b = static_cast<std::size_t>(s * B / samples);
        batch_deaths[b] += static_cast<double>(dead.size());
        batch_exposure[b] += exposure;
        std::vector<double> acc(n_fun, 0.0);
        for (const auto& f : fields) {
            const Eigen::VectorXd u = f.values();
            for (std::size_t p = 0; p < n_one; ++p) acc[p] += u(probe_site[p]);
            for (std::size_t q = 0; q < n_two; ++q) {
                const int j = offsets[q];
                double g = 0.0;
                for (int i = 0; i < L; ++i) {
                    const double a = 1.0 - u(i);
                    g += a * (u((i + j) % L) + u((i - j % L + L) % L));
                }
                acc[n_one + q] += g / (2.0 * L);
            }
            const double m = u.mean();
            acc[n_one + n_two] += m;
            acc[n_one + n_two + 1] += m * m;
        }
        for (std::size_t k = 0; k < n_fun; ++k) batch[b].sum[k] += acc[k] / N;
        ++batch[b].count;
    }

    auto batch_estimate = [&](auto value_of) {
        std::vector<double> vals;
        for (const auto& b : batch) vals.push_back(value_of(b));
        return mean_stderr(vals);
    };
    for (std::size_t p = 0; p < n_one; ++p) {
        const auto e = batch_estimate([&](const BatchAccumulator& b) { return b.sum[p] / b.count; });
        std::ostringstream id;
        id << "mean_u@" << fv.probes[p];
        out.one_point.push_back({id.str(), e.mean, e.stderr, Conditioning::FvStationary});
    }
    for (std::size_t q = 0; q < n_two; ++q) {
        const auto e = batch_estimate([&](const BatchAccumulator& b) { return b.sum[n_one + q] / b.count; });
        std::ostringstream id;
        id << "two_point@" << out.lattice_distance[q];
        out.two_point.push_back({id.str(), e.mean, e.stderr, Conditioning::FvStationary});
    }
    const auto vm = batch_estimate([&](const BatchAccumulator& b) {
        const double m = b.sum[n_one + n_two] / b.count;
        return b.sum[n_one + n_two + 1] / b.count - m * m;
    });
    out.var_mean = {"var_spatial_mean", vm.mean, vm.stderr, Conditioning::FvStationary};
    std::vector<double> rates;
    double deaths = 0.0;
    double exposure = 0.0;
    for (int b = 0; b < B; ++b) {
        rates.push_back(batch_deaths[static_cast<std::size_t>(b)] / batch_exposure[static_cast<std::size_t>(b)]);
        deaths += batch_deaths[static_cast<std::size_t>(b)];
        exposure += batch_exposure[static_cast<std::size_t>(b)];
    }
    out.kappa_hat = deaths / exposure;
    out.kappa_stderr = mean_stderr(rates).stderr;
    return out;
}

// ---------------------------------------------------------- entrance moment

std::vector<int> lattice_sites(const SiteSet& F, int L)
{
    if (L < 2) throw DomainError("lattice_sites needs L >= 2");
    std::vector<int> sites;
    std::set<int> seen;
    auto push = [&](int s) {
        if (seen.insert(s).second) sites.push_back(s);
    };
    if (const auto* ps = std::get_if<PointSet>(&F)) {
        if (ps->points.empty()) throw DomainError("point set F must be nonempty");
        for (const auto& x : ps->points) push(static_cast<int>(std::lround(x.coordinate() * L) % L));
    } else if (const auto* arc = std::get_if<Arc>(&F)) {
        if (!(arc->length > 0.0)) throw DomainError("arc F needs positive length");
        for (int i = 0; i < L; ++i) {
            const double off = CirclePoint::canonical(static_cast<double>(i) / L - arc->from);
            if (off < arc->length || arc->length >= 1.0) push(i);
        }
        if (sites.empty()) push(static_cast<int>(std::lround(CirclePoint::canonical(arc->from) * L) % L));
    } else {
        for (int i = 0; i < L; ++i) push(i);
    }
    // Reorder by the base-2 radical inverse so prefixes spread over F.
    const std::size_t K = sites.size();
    std::vector<int> ordered;
    std::vector<char> used(K, 0);
    for (std::uint64_t k = 0; ordered.size() < K; ++k) {
        double v = 0.0;
        double f = 0.5;
        for (std::uint64_t m = k; m; m >>= 1, f *= 0.5)
            if (m & 1u) v += f;
        const auto idx = std::min(K - 1, static_cast<std::size_t>(v * static_cast<double>(K)));
        if (!used[idx]) {
            used[idx] = 1;
            ordered.push_back(sites[idx]);
        }
    }
    return ordered;
}

EntranceEstimate entrance_moment(const SiteSet& F, const std::vector<int>& n_grid,
                                 const ModelParams& params, const EigenSolution& eigen,
                                 const EntranceOptions& entrance, const EnsembleOptions& options)
{
    if (params.beta != 0.0) throw UnsupportedError("entrance moments are defined for beta = 0");
    if (n_grid.empty()) throw DomainError("entrance moment needs an n grid");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 2) throw DomainError("entrance moment needs n >= 2");
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw DomainError("n grid must increase");
    }
    if (entrance.replicas < 2) throw DomainError("entrance moment needs replicas >= 2");
    const std::vector<int> sites = lattice_sites(F, entrance.L);
    const LatticeDual engine(params, entrance.L);
    DualOptions dopt;
    dopt.stop = StopRule::AtTau1;

    EntranceEstimate est;
    for (std::size_t level = 0; level < n_grid.size(); ++level) {
        const int n = n_grid[level];
        std::vector<CirclePoint> pts;
        for (int k = 0; k < n; ++k)
            pts.emplace_back(static_cast<double>(sites[static_cast<std::size_t>(k) % sites.size()]) / entrance.L);
        const DualConfiguration z0 = DualConfiguration::colorblind_points(pts);
        auto vals = run_indexed<double>(static_cast<std::size_t>(entrance.replicas), options.workers,
                                        [&](std::size_t r) {
                                            RngStream rng(options.seed,
                                                          stream_id(StreamTag::EntranceReplica, r,
                                                                    options.case_index * 64 + level));
                                            const DualOutcome o =
                                                engine.run(z0, std::numeric_limits<double>::infinity(), rng, dopt);
                                            if (!o.tau_one) throw StateError("tau_1 not reached");
                                            return std::exp(eigen.kappa * *o.tau_one);
                                        });
        std::vector<double> sorted = vals;
        std::sort(sorted.begin(), sorted.end());
        const auto qi = static_cast<std::size_t>(
            std::ceil(entrance.truncation_quantile * static_cast<double>(sorted.size())));
        const double cap = sorted[std::min(sorted.size(), std::max<std::size_t>(qi, 1)) - 1];
        double total = 0.0;
        double excess = 0.0;
        for (double& v : vals) {
            total += v;
            if (v > cap) {
                excess += v - cap;
                v = cap;
            }
        }
        const MeanStderr ms = mean_stderr(vals);
        EntranceLevel lv;
        lv.n = n;
        lv.value = ms.mean;
        lv.stderr = ms.stderr;
        lv.discarded_mass = excess / total;
        lv.flagged = lv.discarded_mass > entrance.flag_threshold;
        est.levels.push_back(lv);
    }
    est.value = est.levels.back().value;
    est.stderr = est.levels.back().stderr;
    est.trend = est.levels.size() > 1 ? est.value - est.levels[est.levels.size() - 2].value : 0.0;
    est.flagged = std::any_of(est.levels.begin(), est.levels.end(), [](const EntranceLevel& l) { return l.flagged; });
    return est;
}

// ------------------------------------------------------------ duality check

namespace {

struct SideEstimates {
    MeanStderr lhs, rhs, cb_lhs, cb_rhs;
};

std::vector<CirclePoint> all_points(const DualConfiguration& z)
{
    std::vector<CirclePoint> p = z.greens;
    p.insert(p.end(), z.reds.begin(), z.reds.end());
    return p;
}

SideEstimates duality_sides(const Profile& u0, const DualConfiguration& z0, double t,
                            const ModelParams& params, int L, int M, long rs, long rd,
                            const EnsembleOptions& options, std::uint64_t level)
{
    const LatticeField f0 = make_field(u0, L, M);
    const SteppingStone engine(params, L, M);
    const long steps = engine.steps_for(t);
    const std::vector<CirclePoint> pts = all_points(z0);
    const std::uint64_t cs = options.case_index * 8 + level;

    struct Pair {
        double e = 0.0;
        double d = 0.0;
    };
    auto spde = run_indexed<Pair>(static_cast<std::size_t>(rs), options.workers, [&](std::size_t r) {
        RngStream rng(options.seed, stream_id(StreamTag::SpdeReplica, r, cs));
        LatticeField f = f0;
        engine.advance(f, rng, steps);
        return Pair{eval_E(f, z0), eval_D(f, pts)};
    });

    // The dual runs for the same lattice time the SPDE does.
    const double t_lattice = steps * engine.dt();
    const LatticeDual dual(params, L);
    DualOptions kill;
    kill.stop = StopRule::AtKilling;
    kill.checkpoints = {t_lattice};
    kill.record_configurations = true;
    DualOptions blind;
    blind.stop = StopRule::Never;
    blind.checkpoints = {t_lattice};
    blind.record_configurations = true;
    const DualConfiguration zb = DualConfiguration::colorblind_points(pts);
    auto duals = run_indexed<Pair>(static_cast<std::size_t>(rd), options.workers, [&](std::size_t r) {
        Pair p;
        RngStream rng(options.seed, stream_id(StreamTag::DualReplica, r, cs));
        const DualOutcome o = dual.run(z0, t_lattice, rng, kill);
        if (!o.configurations.empty() && !o.configurations[0].killed) p.e = eval_E(f0, o.configurations[0]);
        RngStream rng2(options.seed, stream_id(StreamTag::DualReplica, r + static_cast<std::size_t>(rd), cs));
        const DualOutcome ob = dual.run(zb, t_lattice, rng2, blind);
        p.d = eval_D(f0, ob.configurations.at(0).greens);
        return p;
    });

    auto collect = [](const std::vector<Pair>& v, bool first) {
        std::vector<double> x;
        x.reserve(v.size());
        for (const auto& p : v) x.push_back(first ? p.e : p.d);
        return mean_stderr(x);
    };
    return {collect(spde, true), collect(duals, true), collect(spde, false), collect(duals, false)};
}

double zscore(double diff, double var)
{
    if (var <= 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(diff) / std::sqrt(var);
}

} // namespace

DualityReport duality_check(const Profile& u0, const DualConfiguration& z0, double t,
                            const ModelParams& params, const DualityOptions& duality,
                            const EnsembleOptions& options)
{
    params.validate();
    if (params.beta < 0.0) throw DomainError("duality check needs beta >= 0");
    if (z0.greens.empty() || z0.reds.empty()) throw StateError("duality check needs both colors in z0");
    if (!(t >= 0.0)) throw DomainError("duality check needs t >= 0");
    const int L = duality.L;
    const int M = duality.M > 0 ? duality.M : default_deme_size(params, L);
    const SideEstimates s =
        duality_sides(u0, z0, t, params, L, M, duality.replicas_spde, duality.replicas_dual, options, 0);
    DualityReport r;
    r.lhs = s.lhs.mean;
    r.lhs_stderr = s.lhs.stderr;
    r.rhs = s.rhs.mean;
    r.rhs_stderr = s.rhs.stderr;
    r.colorblind_lhs = s.cb_lhs.mean;
    r.colorblind_lhs_stderr = s.cb_lhs.stderr;
    r.colorblind_rhs = s.cb_rhs.mean;
    r.colorblind_rhs_stderr = s.cb_rhs.stderr;
    const double var = r.lhs_stderr * r.lhs_stderr + r.rhs_stderr * r.rhs_stderr;
    if (duality.bias_budget && t > 0.0 && L >= 8) {
        const SideEstimates h = duality_sides(u0, z0, t, params, L / 2, M, duality.replicas_spde,
                                              duality.replicas_dual, options, 1);
        r.bias = std::abs((s.lhs.mean - s.rhs.mean) - (h.lhs.mean - h.rhs.mean));
    }
    r.z_score = zscore(r.lhs - r.rhs, var);
    r.z_budgeted = zscore(r.lhs - r.rhs, var + r.bias * r.bias);
    r.colorblind_z = zscore(r.colorblind_lhs - r.colorblind_rhs,
                            r.colorblind_lhs_stderr * r.colorblind_lhs_stderr +
                                r.colorblind_rhs_stderr * r.colorblind_rhs_stderr);
    return r;
}

// ------------------------------------------------------------ girsanov check

double girsanov_lower_factor(double beta, double gamma, double t)
{
    return std::exp(-(beta / gamma + beta * beta * t / (8.0 * gamma)));
}

double girsanov_upper_factor(double beta, double gamma)
{
    return std::exp(beta / gamma);
}

GirsanovReport girsanov_check(const LatticeField& u0, const ModelParams& params, double t,
                              long replicas, const EnsembleOptions& options)
{
    params.validate();
    if (params.beta < 0.0) throw DomainError("girsanov check needs beta >= 0");
    if (!(t > 0.0)) throw DomainError("girsanov check needs t > 0");
    ModelParams neutral = params;
    neutral.beta = 0.0;
    EnsembleOptions o0 = options;
    o0.case_index = options.case_index * 2;
    EnsembleOptions ob = options;
    ob.case_index = options.case_index * 2 + 1;
    const SurvivalRun r0 = survival_curve(u0, neutral, {t}, replicas, o0);
    const SurvivalRun rb = params.beta == 0.0 ? r0 : survival_curve(u0, params, {t}, replicas, ob);
    const double n = static_cast<double>(replicas);
    GirsanovReport g;
    g.p_zero = r0.curve.surviving_fraction[0];
    g.p_beta = rb.curve.surviving_fraction[0];
    g.p_zero_stderr = std::sqrt(g.p_zero * (1.0 - g.p_zero) / n);
    g.p_beta_stderr = std::sqrt(g.p_beta * (1.0 - g.p_beta) / n);
    g.lower_factor = girsanov_lower_factor(params.beta, params.gamma, t);
    g.upper_factor = girsanov_upper_factor(params.beta, params.gamma);
    auto z = [&](double excess, double factor) {
        const double se = std::sqrt(g.p_beta_stderr * g.p_beta_stderr +
                                    factor * factor * g.p_zero_stderr * g.p_zero_stderr);
        return se > 0.0 ? excess / se : (excess > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    };
    g.z_lower = z(g.lower_factor * g.p_zero - g.p_beta, g.lower_factor);
    g.z_upper = z(g.p_beta - g.upper_factor * g.p_zero, g.upper_factor);
    g.pass = g.z_lower <= 3.0 && g.z_upper <= 3.0;
    return g;
}

} // namespace fkpp
