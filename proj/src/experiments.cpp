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

#include "fkpp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <json.hpp>

#include "fkpp/csv.hpp"
#include "fkpp/ensemble.hpp"
#include "fkpp/errors.hpp"
#include "fkpp/lattice_spectrum.hpp"
#include "fkpp/qsd_lab.hpp"
#include "fkpp/spectral.hpp"
#include "fkpp/wf_reference.hpp"

#ifndef FKPP_QSD_VERSION
#define FKPP_QSD_VERSION "unknown"
#endif

namespace fkpp {

namespace {

namespace fs = std::filesystem;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Output {
public:
    explicit Output(const ExperimentConfig& cfg)
        : dir_(cfg.output_dir),
          meta_("fkpp-qsd experiment=" + std::string(to_string(cfg.experiment)) +
                " config_hash=" + config_hash(cfg) + " seed=" + std::to_string(cfg.seed))
    {
        fs::create_directories(dir_);
    }

    std::ofstream open(const std::string& name)
    {
        std::ofstream f(dir_ / name, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + (dir_ / name).string());
        result.files.push_back(name);
        return f;
    }

    const std::string& meta() const { return meta_; }
    const fs::path& dir() const { return dir_; }

    ExperimentResult result;

private:
    fs::path dir_;
    std::string meta_;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

EnsembleOptions ensemble(const ExperimentConfig& cfg, std::uint64_t case_index)
{
    return {cfg.seed, cfg.workers, case_index};
}

double analytic_kappa(const ModelParams& p)
{
    return p.beta == 0.0 ? fixation_rate(p).kappa : kNaN;
}

// ------------------------------------------------------------------ runners

void analytics_table(const ExperimentConfig& cfg, Output& out)
{
    const auto& a = cfg.analytics;
    const std::vector<double> alphas = a.alpha_grid.empty() ? std::vector<double>{cfg.params.alpha} : a.alpha_grid;
    const std::vector<double> gammas = a.gamma_grid.empty() ? std::vector<double>{cfg.params.gamma} : a.gamma_grid;
    auto f = out.open("analytics.csv");
    write_analytics_table(f, alphas, gammas, out.meta());
    out.result.summary.push_back(std::to_string(alphas.size() * gammas.size()) + " grid points");
}

void write_survival(Output& out, const SurvivalCurve& c)
{
    auto f = out.open("survival.csv");
    CsvWriter w(f, out.meta(), {"t", "fraction", "ci_low", "ci_high"});
    for (std::size_t i = 0; i < c.times.size(); ++i)
        w.row(c.times[i], c.surviving_fraction[i], c.ci_low[i], c.ci_high[i]);
}

void write_trajectories(Output& out, const SurvivalRun& run, double mean_u0)
{
    auto f = out.open("trajectories.csv");
    CsvWriter w(f, out.meta(), {"replica", "tau_fix", "absorbed_side", "mean_u0"});
    for (std::size_t r = 0; r < run.tau.size(); ++r)
        w.row(r, run.tau[r] ? *run.tau[r] : kNaN, to_string(run.side[r]), mean_u0);
}

void write_snapshots(const ExperimentConfig& cfg, Output& out, const LatticeField& u0,
                     const SteppingStone& engine, double t_max)
{
    const auto& e = cfg.ensemble;
    if (e.snapshot_times.empty() || e.snapshot_replicas <= 0) return;
    const long n = std::min<long>(e.snapshot_replicas, e.replicas);
    for (long r = 0; r < n; ++r) {
        // Same stream as replica r of the ensemble, so this is the same path.
        RngStream rng(cfg.seed, stream_id(StreamTag::SpdeReplica, static_cast<std::uint64_t>(r), 0));
        const RunResult res = engine.run_to_fixation(u0, rng, t_max, e.snapshot_times);
        auto f = out.open("snapshots_" + std::to_string(r) + ".csv");
        CsvWriter w(f, out.meta(), {"t", "site_index", "u"});
        for (const auto& s : res.snapshots)
            for (Eigen::Index i = 0; i < s.u.size(); ++i) w.row(s.t, static_cast<long>(i), s.u(i));
    }
}

void survival_experiment(const ExperimentConfig& cfg, Output& out, bool fit)
{
    const int L = cfg.resolution.L;
    const int M = cfg.deme_size();
    const LatticeField u0 = make_field(to_profile(cfg.initial), L, M);
    const std::vector<double> cps = cfg.ensemble.checkpoint_times();
    const SurvivalRun run = survival_curve(u0, cfg.params, cps, cfg.ensemble.replicas, ensemble(cfg, 0));
    write_survival(out, run.curve);
    write_trajectories(out, run, u0.mean());
    const SteppingStone engine(cfg.params, L, M);
    write_snapshots(cfg, out, u0, engine, cps.back());

    const FitWindow window = default_window(run.tau);
    const RateFit rf = fit_rate(run.curve, window);
    const double exact = analytic_kappa(cfg.params);
    if (fit) {
        auto f = out.open("rates.csv");
        CsvWriter w(f, out.meta(), {"method", "kappa_hat", "stderr", "kappa_analytic"});
        w.row("survival-fit", rf.kappa_hat, rf.stderr, exact);
        if (cfg.params.beta == 0.0 && L >= 2 && L <= 1024) {
            // Exact two-point decay rate of this very chain: the discretization reference.
            const LatticeEigen se = stepping_stone_spectrum(cfg.params, L, M);
            w.row("stepping-stone-exact", se.kappa, 0.0, exact);
        }
    } else {
        // Sandwich shape: P(tau > t) e^{kappa_hat t} stays within [c, C] on the fit window.
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (std::size_t i = 0; i < run.curve.times.size(); ++i) {
            const double t = run.curve.times[i];
            if (t < window.t_lo || t > window.t_hi || run.curve.survivors[i] < 30) continue;
            const double s = run.curve.surviving_fraction[i] * std::exp(rf.kappa_hat * t);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        auto f = out.open("sandwich.csv");
        CsvWriter w(f, out.meta(), {"t_lo", "t_hi", "kappa_hat", "c_lower", "c_upper"});
        w.row(window.t_lo, window.t_hi, rf.kappa_hat, lo, hi);
    }
    out.result.summary.push_back(fmt("kappa_hat = %.5f +- %.5f (two-particle value %.5f)", rf.kappa_hat, rf.stderr, exact));
}

void qsd_twopoint(const ExperimentConfig& cfg, Output& out)
{
    const int L = cfg.resolution.L;
    const int M = cfg.deme_size();
    const LatticeField u0 = make_field(to_profile(cfg.initial), L, M);
    const auto& c = cfg.fleming_viot;
    FlemingViotOptions fo;
    fo.n_replicas = c.replicas;
    fo.horizon = c.horizon;
    fo.burn_in = c.burn_in;
    fo.sample_interval = c.sample_interval;
    fo.batches = c.batches;
    fo.probes = c.probes;
    fo.distances = c.distances;
    const FlemingViotResult fv = fleming_viot(u0, cfg.params, fo, ensemble(cfg, 0));

    EigenSolution eigen = fixation_rate(cfg.params);
    EntranceOptions eo;
    eo.L = cfg.entrance_sites();
    eo.replicas = cfg.entrance.replicas;
    eo.truncation_quantile = cfg.entrance.truncation_quantile;
    const EntranceEstimate es = entrance_moment(WholeCircle{}, cfg.entrance_grid(), cfg.params, eigen, eo, ensemble(cfg, 1));
    eigen = mstar_from_entrance(eigen, es.value, es.stderr);

    {
        auto f = out.open("entrance.csv");
        CsvWriter w(f, out.meta(), {"n", "value", "stderr", "discarded_mass", "flagged"});
        for (const auto& l : es.levels) w.row(l.n, l.value, l.stderr, l.discarded_mass, l.flagged);
    }
    {
        auto f = out.open("qsd_onepoint.csv");
        CsvWriter w(f, out.meta(), {"x", "estimate", "stderr", "analytic"});
        for (std::size_t i = 0; i < fv.one_point.size(); ++i)
            w.row(c.probes[i], fv.one_point[i].value, fv.one_point[i].stderr, 0.5);
    }
    {
        auto f = out.open("qsd_twopoint.csv");
        CsvWriter w(f, out.meta(), {"d", "estimate", "stderr", "analytic", "analytic_stderr"});
        for (std::size_t i = 0; i < fv.two_point.size(); ++i) {
            const double d = fv.lattice_distance[i];
            const double a = right_efn_two_particle(d, eigen);
            w.row(d, fv.two_point[i].value, fv.two_point[i].stderr, a, a / *eigen.M_star * eigen.M_star_stderr);
        }
    }
    {
        auto f = out.open("rates.csv");
        CsvWriter w(f, out.meta(), {"method", "kappa_hat", "stderr", "kappa_analytic"});
        w.row("fleming-viot", fv.kappa_hat, fv.kappa_stderr, eigen.kappa);
    }
    out.result.summary.push_back(fmt("M* = %.5f +- %.5f from E_S = %.4f", *eigen.M_star, eigen.M_star_stderr, es.value));
    out.result.summary.push_back(fmt("Fleming-Viot kappa_hat = %.4f +- %.4f", fv.kappa_hat, fv.kappa_stderr));
}

void duality_experiment(const ExperimentConfig& cfg, Output& out)
{
    const auto& d = cfg.duality;
    DualityOptions opt;
    opt.L = d.L;
    opt.M = d.M;
    opt.replicas_spde = d.replicas_spde;
    opt.replicas_dual = d.replicas_dual;
    opt.bias_budget = d.bias_budget;
    auto f = out.open("duality.csv");
    CsvWriter w(f, out.meta(),
                {"case_id", "lhs", "rhs", "z", "lhs_stderr", "rhs_stderr", "bias", "z_raw", "colorblind_lhs",
                 "colorblind_rhs", "colorblind_z"});
    int over = 0;
    const auto battery = duality_battery();
    for (std::size_t k = 0; k < battery.size(); ++k) {
        const auto& c = battery[k];
        ModelParams p = cfg.params;
        p.beta = c.beta;
        const DualityReport r = duality_check(to_profile(c.u0), c.z0, c.t, p, opt, ensemble(cfg, k));
        w.row(c.id, r.lhs, r.rhs, r.z_budgeted, r.lhs_stderr, r.rhs_stderr, r.bias, r.z_score, r.colorblind_lhs,
              r.colorblind_rhs, r.colorblind_z);
        if (r.z_budgeted > 3.0) ++over;
    }
    auto g = out.open("duality_t0.csv");
    CsvWriter w0(g, out.meta(), {"case_id", "lhs", "rhs", "abs_diff"});
    for (std::size_t k = 0; k < battery.size(); k += 2) {
        const auto& c = battery[k];
        ModelParams p = cfg.params;
        p.beta = c.beta;
        DualityOptions o0 = opt;
        o0.replicas_spde = 16;
        o0.replicas_dual = 16;
        o0.bias_budget = false;
        const DualityReport r = duality_check(to_profile(c.u0), c.z0, 0.0, p, o0, ensemble(cfg, 100 + k));
        w0.row(c.id.substr(0, c.id.rfind('-')) + "-t0", r.lhs, r.rhs, std::abs(r.lhs - r.rhs));
    }
    out.result.summary.push_back(std::to_string(over) + " of " + std::to_string(battery.size()) +
                                 " cases with z > 3 after the bias budget");
}

void wf_experiment(const ExperimentConfig& cfg, Output& out)
{
    const auto& c = cfg.wf;
    const double gamma = cfg.params.gamma;
    const ModelParams p{1.0, cfg.params.beta, gamma};
    const SteppingStone engine(p, 1, c.deme_size);
    const LatticeField f0 = make_field(profiles::constant(c.x0), 1, c.deme_size);
    std::vector<double> checkpoints;
    double t_end = c.histogram_time;
    for (double t : c.times) t_end = std::max(t_end, t);
    for (int i = 1; i <= 200; ++i) checkpoints.push_back(t_end * i / 200.0);
    for (double t : c.times) checkpoints.push_back(t);
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

    struct One {
        std::optional<double> tau;
        double at_hist = 0.0;
    };
    auto runs = run_indexed<One>(static_cast<std::size_t>(c.replicas), cfg.workers, [&](std::size_t r) {
        RngStream rng(cfg.seed, stream_id(StreamTag::SpdeReplica, r, 0));
        const RunResult res = engine.run_to_fixation(f0, rng, t_end, {c.histogram_time});
        return One{res.outcome.tau_fix, res.snapshots.at(0).u(0)};
    });
    std::vector<std::optional<double>> taus;
    std::vector<double> survivors;
    for (const auto& o : runs) {
        taus.push_back(o.tau);
        if (!o.tau || *o.tau > c.histogram_time) survivors.push_back(o.at_hist);
    }
    const SurvivalCurve curve = survival_from_times(taus, checkpoints);
    {
        auto f = out.open("wf_survival.csv");
        CsvWriter w(f, out.meta(), {"x0", "t", "survival_fraction", "ci_low", "ci_high", "scaled", "asymptotic"});
        for (std::size_t i = 0; i < curve.times.size(); ++i) {
            const double t = curve.times[i];
            const double e = std::exp(gamma * t);
            w.row(c.x0, t, curve.surviving_fraction[i], curve.ci_low[i], curve.ci_high[i],
                  curve.surviving_fraction[i] * e, cfg.params.beta == 0.0 ? wf_survival_asymptotic(c.x0, t, gamma) : kNaN);
        }
    }
    {
        auto f = out.open("wf_histogram.csv");
        CsvWriter w(f, out.meta(), {"bin_left", "bin_right", "mass"});
        for (const auto& b : histogram(survivors, c.bins)) w.row(b.left, b.right, b.mass);
    }
    const RateFit rf = fit_rate(curve, default_window(taus));
    const double ks = survivors.empty() ? kNaN : ks_distance_uniform(survivors);
    {
        auto f = out.open("rates.csv");
        CsvWriter w(f, out.meta(), {"method", "kappa_hat", "stderr", "kappa_analytic"});
        const double exact = cfg.params.beta == 0.0 ? -wf_spectrum(2, gamma) : kNaN;
        w.row("survival-fit", rf.kappa_hat, rf.stderr, exact);
        // The chain's own rate: the two-lineage coalescence probability is 1/M per step.
        const double discrete = -gamma * c.deme_size * std::log1p(-1.0 / c.deme_size);
        w.row("binomial-chain-exact", discrete, 0.0, exact);
    }
    {
        auto f = out.open("wf_summary.csv");
        CsvWriter w(f, out.meta(), {"metric", "value"});
        w.row("ks_distance_uniform", ks);
        w.row("survivors_at_histogram_time", static_cast<long>(survivors.size()));
        w.row("deme_size", c.deme_size);
    }
    out.result.summary.push_back(fmt("kappa_hat = %.4f +- %.4f, KS = %.4f", rf.kappa_hat, rf.stderr, ks));
}

void martingale_experiment(const ExperimentConfig& cfg, Output& out)
{
    const auto& c = cfg.martingale;
    EigenSolution eigen = fixation_rate(cfg.params);
    // phi_bar is M* cos(...); the check is on ratios, so any M* > 0 works and 1 keeps it readable.
    eigen.M_star = 1.0;
    const LatticeDual dual(cfg.params, c.L);
    // Snap to lattice sites so phi_bar(z0) is the value the walk starts from.
    const CirclePoint g(std::round(CirclePoint(c.green).coordinate() * c.L) / c.L);
    const CirclePoint r(std::round(CirclePoint(c.red).coordinate() * c.L) / c.L);
    const DualConfiguration z0 = DualConfiguration::pair(g, r);
    std::vector<double> cps = c.checkpoints;
    std::sort(cps.begin(), cps.end());
    DualOptions opt;
    opt.stop = StopRule::AtKilling;
    opt.checkpoints = cps;
    opt.record_configurations = true;
    const auto paths = run_indexed<DualOutcome>(static_cast<std::size_t>(c.paths), cfg.workers, [&](std::size_t i) {
        RngStream rng(cfg.seed, stream_id(StreamTag::DualReplica, i, 0));
        return dual.run(z0, cps.back(), rng, opt);
    });
    const auto pts = martingale_functional(paths, eigen, cps);
    const double target = phi_bar(z0, eigen);
    {
        auto f = out.open("martingale.csv");
        CsvWriter w(f, out.meta(), {"t", "mean", "stderr", "target"});
        for (const auto& p : pts) w.row(p.t, p.mean, p.stderr, target);
    }
    {
        auto f = out.open("dual_runs.csv");
        CsvWriter w(f, out.meta(), {"run_id", "tau_partial", "tau_meet", "final_green_count"});
        for (std::size_t i = 0; i < paths.size(); ++i) {
            const auto& p = paths[i];
            w.row(i, p.tau_partial ? *p.tau_partial : kNaN, p.tau_meet ? *p.tau_meet : kNaN,
                  p.final_state.greens.size());
        }
    }
    if (c.count_series_runs > 0) {
        auto f = out.open("dual_counts.csv");
        CsvWriter w(f, out.meta(), {"run_id", "t", "n_green", "n_red"});
        const std::size_t n = std::min<std::size_t>(paths.size(), static_cast<std::size_t>(c.count_series_runs));
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& s : paths[i].series) w.row(i, s.t, s.n_green, s.n_red);
    }
    out.result.summary.push_back(fmt("target phi(z0) = %.5f at distance %.4f", target, geodesic_distance(g, r)));
}

void local_fixation_experiment(const ExperimentConfig& cfg, Output& out)
{
    const EigenSolution eigen = fixation_rate(cfg.params);
    EntranceOptions eo;
    eo.L = cfg.entrance_sites();
    eo.replicas = cfg.entrance.replicas;
    eo.truncation_quantile = cfg.entrance.truncation_quantile;
    const auto grid = cfg.entrance_grid();
    const EntranceEstimate es = entrance_moment(WholeCircle{}, grid, cfg.params, eigen, eo, ensemble(cfg, 0));
    std::vector<double> lengths = cfg.local_fixation.arc_lengths;
    std::sort(lengths.begin(), lengths.end());
    auto f = out.open("local_fixation.csv");
    CsvWriter w(f, out.meta(), {"arc_length", "E_F", "E_F_stderr", "p_not_fixed", "p_zero_on_F", "flagged"});
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        const EntranceEstimate ef =
            lengths[k] >= 1.0 ? es
                              : entrance_moment(Arc{0.0, lengths[k]}, grid, cfg.params, eigen, eo, ensemble(cfg, 1 + k));
        const double ef_value = std::min(ef.value, es.value);
        const LocalFixation lf = local_fixation_prob(std::max(1.0, ef_value), es.value);
        w.row(lengths[k], ef.value, ef.stderr, lf.not_fixed, lf.zero_on_F, ef.flagged);
    }
    if (lengths.empty() || lengths.back() < 1.0) {
        const LocalFixation whole = local_fixation_prob(es.value, es.value);
        w.row(1.0, es.value, es.stderr, whole.not_fixed, whole.zero_on_F, es.flagged);
    }
    out.result.summary.push_back(fmt("E_S = %.4f +- %.4f", es.value, es.stderr));
}

void girsanov_experiment(const ExperimentConfig& cfg, Output& out)
{
    const LatticeField u0 = make_field(to_profile(cfg.initial), cfg.resolution.L, cfg.deme_size());
    const GirsanovReport g = girsanov_check(u0, cfg.params, cfg.girsanov.t, cfg.girsanov.replicas, ensemble(cfg, 0));
    auto f = out.open("girsanov.csv");
    CsvWriter w(f, out.meta(),
                {"beta", "gamma", "t", "p_zero", "p_zero_stderr", "p_beta", "p_beta_stderr", "lower_bound",
                 "upper_bound", "z_lower", "z_upper", "pass"});
    w.row(cfg.params.beta, cfg.params.gamma, cfg.girsanov.t, g.p_zero, g.p_zero_stderr, g.p_beta, g.p_beta_stderr,
          g.lower_factor * g.p_zero, g.upper_factor * g.p_zero, g.z_lower, g.z_upper, g.pass);
    out.result.summary.push_back(std::string("bracket ") + (g.pass ? "holds" : "violated") +
                                 fmt(": %.4f <= %.4f <= %.4f", g.lower_factor * g.p_zero, g.p_beta, g.upper_factor * g.p_zero));
}

} // namespace

void write_analytics_table(std::ostream& out, const std::vector<double>& alphas, const std::vector<double>& gammas,
                           const std::string& meta)
{
    CsvWriter w(out, meta, {"alpha", "gamma", "theta_star", "kappa", "lambda", "A"});
    for (double g : gammas)
        for (double a : alphas) {
            const EigenSolution e = fixation_rate(ModelParams{a, 0.0, g});
            w.row(a, g, e.theta_star, e.kappa, e.lambda, e.A);
        }
}

std::vector<DualityCase> duality_battery()
{
    struct Base {
        const char* id;
        InitialCondition u0;
        std::vector<double> greens;
        std::vector<double> reds;
    };
    InitialCondition step;
    step.profile = "step";
    step.edge = 0.5;
    InitialCondition band;
    band.profile = "indicator";
    band.from = 0.25;
    band.to = 0.75;
    InitialCondition narrow;
    narrow.profile = "step";
    narrow.edge = 0.25;
    const std::vector<Base> bases = {
        {"step-2g1r", step, {0.125, 0.375}, {0.625}},
        {"band-1g2r", band, {0.5}, {0.125, 0.875}},
        {"narrow-1g3r", narrow, {0.125}, {0.375, 0.625, 0.875}},
    };
    std::vector<DualityCase> out;
    for (const auto& b : bases)
        for (double beta : {0.0, 1.0})
            for (double t : {0.05, 0.2}) {
                DualityCase c;
                c.id = std::string(b.id) + (beta == 0.0 ? "-b0" : "-b1") + (t < 0.1 ? "-t005" : "-t02");
                c.u0 = b.u0;
                for (double x : b.greens) c.z0.greens.emplace_back(x);
                for (double y : b.reds) c.z0.reds.emplace_back(y);
                c.beta = beta;
                c.t = t;
                out.push_back(c);
            }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    Output out(cfg);
    {
        auto f = out.open("config.yaml");
        f << echo_config(cfg);
    }
    switch (cfg.experiment) {
    case Experiment::AnalyticsTable:
        analytics_table(cfg, out);
        break;
    case Experiment::FixationRate:
        survival_experiment(cfg, out, true);
        break;
    case Experiment::SurvivalCurve:
        survival_experiment(cfg, out, false);
        break;
    case Experiment::QsdTwoPoint:
        qsd_twopoint(cfg, out);
        break;
    case Experiment::DualityCheck:
        duality_experiment(cfg, out);
        break;
    case Experiment::WfReference:
        wf_experiment(cfg, out);
        break;
    case Experiment::MartingaleCheck:
        martingale_experiment(cfg, out);
        break;
    case Experiment::LocalFixation:
        local_fixation_experiment(cfg, out);
        break;
    case Experiment::GirsanovCheck:
        girsanov_experiment(cfg, out);
        break;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::ordered_json m;
    m["experiment"] = std::string(to_string(cfg.experiment));
    m["config_hash"] = config_hash(cfg);
    m["seed"] = cfg.seed;
    m["config"] = echo_config(cfg);
    m["workers"] = resolve_workers(cfg.workers);
    m["output_dir"] = cfg.output_dir;
    m["versions"] = {
        {"fkpp_qsd", FKPP_QSD_VERSION},
        {"compiler", __VERSION__},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"boost", BOOST_LIB_VERSION},
    };
    m["wall_time_seconds"] = wall;
    m["files"] = out.result.files;
    m["summary"] = out.result.summary;
    {
        std::ofstream f(out.dir() / "run_manifest.json", std::ios::binary);
        f << m.dump(2) << '\n';
    }
    out.result.files.push_back("run_manifest.json");
    return out.result;
}

} // namespace fkpp
