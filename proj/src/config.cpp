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

#include "fkpp/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "fkpp/errors.hpp"

namespace fkpp {

namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 9> kExperimentNames{{
    {Experiment::AnalyticsTable, "analytics-table"},
    {Experiment::FixationRate, "fixation-rate"},
    {Experiment::SurvivalCurve, "survival-curve"},
    {Experiment::QsdTwoPoint, "qsd-twopoint"},
    {Experiment::DualityCheck, "duality-check"},
    {Experiment::WfReference, "wf-reference"},
    {Experiment::MartingaleCheck, "martingale-check"},
    {Experiment::LocalFixation, "local-fixation"},
    {Experiment::GirsanovCheck, "girsanov-check"},
}};

// Allowed keys per section; "" is the top level.
const std::map<std::string, std::vector<std::string>>& schema()
{
    static const std::map<std::string, std::vector<std::string>> s{
        {"",
         {"experiment", "seed", "output_dir", "workers", "alpha", "beta", "gamma", "alpha_grid",
          "gamma_grid", "resolution", "ensemble", "initial", "fleming_viot", "entrance", "duality", "wf",
          "martingale", "local_fixation", "girsanov"}},
        {"alpha_grid", {"min", "max", "count"}},
        {"gamma_grid", {"min", "max", "count"}},
        {"resolution", {"L", "M"}},
        {"ensemble",
         {"replicas", "horizon", "checkpoints", "checkpoint_list", "snapshot_times", "snapshot_replicas"}},
        {"initial", {"profile", "value", "edge", "from", "to"}},
        {"fleming_viot",
         {"replicas", "horizon", "burn_in", "sample_interval", "batches", "probes", "distances"}},
        {"entrance", {"L", "replicas", "n_grid", "truncation_quantile"}},
        {"duality", {"L", "M", "replicas_spde", "replicas_dual", "bias_budget"}},
        {"wf", {"deme_size", "x0", "replicas", "histogram_time", "bins", "times"}},
        {"martingale", {"L", "paths", "checkpoints", "green", "red", "count_series_runs"}},
        {"local_fixation", {"arc_lengths"}},
        {"girsanov", {"t", "replicas"}},
    };
    return s;
}

std::size_t edit_distance(std::string_view a, std::string_view b)
{
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::string qualified(const std::string& section, const std::string& key)
{
    return section.empty() ? key : section + "." + key;
}

void check_keys(const YAML::Node& node, const std::string& section)
{
    const auto& allowed = schema().at(section);
    for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
        std::string best;
        std::size_t best_d = std::string::npos;
        for (const auto& a : allowed) {
            const std::size_t d = edit_distance(key, a);
            if (d < best_d) {
                best_d = d;
                best = a;
            }
        }
        std::string msg = "unknown key '" + qualified(section, key) + "'";
        if (best_d <= std::max<std::size_t>(2, key.size() / 3)) msg += "; did you mean '" + qualified(section, best) + "'?";
        throw ConfigError(msg);
    }
}

template <class T>
void read(const YAML::Node& parent, const std::string& section, const char* key, T& out)
{
    const YAML::Node n = parent[key];
    if (!n) return;
    try {
        out = n.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("key '" + qualified(section, key) + "' has the wrong type");
    }
}

std::vector<double> logspace(double lo, double hi, int count)
{
    std::vector<double> v;
    if (count == 1) return {lo};
    for (int i = 0; i < count; ++i)
        v.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1)));
    return v;
}

std::vector<double> read_grid(const YAML::Node& parent, const char* key)
{
    const YAML::Node n = parent[key];
    if (!n) return {};
    if (n.IsSequence()) {
        std::vector<double> v;
        read(parent, "", key, v);
        return v;
    }
    if (!n.IsMap()) throw ConfigError(std::string("key '") + key + "' must be a list or {min, max, count}");
    check_keys(n, key);
    double lo = 0.0, hi = 0.0;
    int count = 0;
    read(n, key, "min", lo);
    read(n, key, "max", hi);
    read(n, key, "count", count);
    if (!(lo > 0.0 && hi >= lo && count >= 1))
        throw ConfigError(std::string("key '") + key + "' needs 0 < min <= max and count >= 1");
    return logspace(lo, hi, count);
}

YAML::Node section(const YAML::Node& root, const char* name)
{
    const YAML::Node n = root[name];
    if (!n) return n;
    if (!n.IsMap()) throw ConfigError(std::string("key '") + name + "' must be a mapping");
    check_keys(n, name);
    return n;
}

void require(bool ok, const std::string& key, const std::string& constraint)
{
    if (!ok) throw ConfigError("key '" + key + "': " + constraint);
}

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

template <class T>
YAML::Emitter& emit_list(YAML::Emitter& out, const std::vector<T>& v)
{
    out << YAML::Flow << YAML::BeginSeq;
    for (const auto& x : v) {
        if constexpr (std::is_floating_point_v<T>)
            out << num(x);
        else
            out << x;
    }
    return out << YAML::EndSeq;
}

bool needs_neutral(Experiment e)
{
    return e == Experiment::QsdTwoPoint || e == Experiment::MartingaleCheck || e == Experiment::LocalFixation ||
           e == Experiment::AnalyticsTable;
}

} // namespace

std::string_view to_string(Experiment e)
{
    for (const auto& [k, name] : kExperimentNames)
        if (k == e) return name;
    return "unknown";
}

std::optional<Experiment> experiment_from_string(std::string_view name)
{
    for (const auto& [k, n] : kExperimentNames)
        if (n == name) return k;
    return std::nullopt;
}

Profile to_profile(const InitialCondition& ic)
{
    if (ic.profile == "step") return profiles::step(ic.edge);
    if (ic.profile == "constant") return profiles::constant(ic.value);
    if (ic.profile == "indicator") return profiles::indicator(ic.from, ic.to);
    throw ConfigError("key 'initial.profile': must be step, constant or indicator");
}

std::vector<double> EnsembleConfig::checkpoint_times() const
{
    if (!checkpoint_list.empty()) {
        std::vector<double> c = checkpoint_list;
        std::sort(c.begin(), c.end());
        return c;
    }
    std::vector<double> c;
    for (int i = 1; i <= checkpoints; ++i) c.push_back(horizon * i / checkpoints);
    return c;
}

int ExperimentConfig::deme_size() const
{
    return resolution.M > 0 ? resolution.M : default_deme_size(params, resolution.L);
}

int ExperimentConfig::entrance_sites() const
{
    return entrance.L > 0 ? entrance.L : resolution.L;
}

std::vector<int> ExperimentConfig::entrance_grid() const
{
    if (!entrance.n_grid.empty()) return entrance.n_grid;
    const int L = entrance_sites();
    return {L, 2 * L, 4 * L, 8 * L};
}

void validate(const ExperimentConfig& c)
{
    try {
        c.params.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("model parameters: ") + e.what());
    }
    if (needs_neutral(c.experiment) && c.params.beta != 0.0)
        throw ConfigError("key 'beta': experiment " + std::string(to_string(c.experiment)) +
                          " has closed forms only for beta = 0");
    require(c.resolution.L >= 1, "resolution.L", "must be >= 1");
    require(c.resolution.M >= 0, "resolution.M", "must be >= 1 (or 0 for the default)");
    if (c.resolution.M > 0) check_stability(c.params, c.resolution.L, c.resolution.M);
    require(c.workers >= 0, "workers", "must be >= 0");

    const auto& e = c.ensemble;
    require(e.horizon > 0.0, "ensemble.horizon", "must be positive");
    require(e.checkpoints >= 1, "ensemble.checkpoints", "must be >= 1");
    for (double t : e.checkpoint_list) require(t >= 0.0, "ensemble.checkpoint_list", "times must be >= 0");
    require(e.snapshot_replicas >= 0, "ensemble.snapshot_replicas", "must be >= 0");
    if (c.experiment == Experiment::FixationRate || c.experiment == Experiment::SurvivalCurve)
        require(e.replicas >= 1000, "ensemble.replicas", "must be >= 1000");

    const auto& ic = c.initial;
    require(ic.profile == "step" || ic.profile == "constant" || ic.profile == "indicator", "initial.profile",
            "must be step, constant or indicator");
    require(ic.value >= 0.0 && ic.value <= 1.0, "initial.value", "must lie in [0, 1]");

    for (double a : c.analytics.alpha_grid) require(a > 0.0 && std::isfinite(a), "alpha_grid", "entries must be positive");
    for (double g : c.analytics.gamma_grid) require(g > 0.0 && std::isfinite(g), "gamma_grid", "entries must be positive");

    const auto& fv = c.fleming_viot;
    require(fv.replicas >= 100, "fleming_viot.replicas", "must be >= 100");
    require(fv.horizon > 0.0, "fleming_viot.horizon", "must be positive");
    require(fv.sample_interval > 0.0, "fleming_viot.sample_interval", "must be positive");
    require(fv.batches >= 2, "fleming_viot.batches", "must be >= 2");
    for (double d : fv.distances) require(d >= 0.0 && d <= 0.5, "fleming_viot.distances", "must lie in [0, 1/2]");

    const auto& en = c.entrance;
    require(en.L >= 0, "entrance.L", "must be >= 2 (or 0 to follow resolution.L)");
    require(en.replicas >= 2, "entrance.replicas", "must be >= 2");
    require(en.truncation_quantile > 0.0 && en.truncation_quantile <= 1.0, "entrance.truncation_quantile",
            "must lie in (0, 1]");
    for (std::size_t i = 0; i < en.n_grid.size(); ++i)
        require(en.n_grid[i] >= 2 && (i == 0 || en.n_grid[i] > en.n_grid[i - 1]), "entrance.n_grid",
                "must be increasing with entries >= 2");

    const auto& du = c.duality;
    require(du.L >= 2, "duality.L", "must be >= 2");
    if (du.M > 0) check_stability(c.params, du.L, du.M);
    require(du.replicas_spde >= 1 && du.replicas_dual >= 1, "duality.replicas_spde", "must be >= 1");
    if (c.experiment == Experiment::DualityCheck)
        require(c.params.beta >= 0.0, "beta", "the dual needs beta >= 0");

    const auto& wf = c.wf;
    require(wf.deme_size >= 2, "wf.deme_size", "must be >= 2");
    require(wf.x0 > 0.0 && wf.x0 < 1.0, "wf.x0", "must lie in (0, 1)");
    require(wf.replicas >= 1000, "wf.replicas", "must be >= 1000");
    require(wf.histogram_time > 0.0, "wf.histogram_time", "must be positive");
    require(wf.bins >= 1, "wf.bins", "must be >= 1");

    const auto& ma = c.martingale;
    require(ma.L >= 2, "martingale.L", "must be >= 2");
    require(ma.paths >= 1, "martingale.paths", "must be >= 1");
    require(!ma.checkpoints.empty(), "martingale.checkpoints", "must be nonempty");
    require(ma.count_series_runs >= 0, "martingale.count_series_runs", "must be >= 0");

    for (std::size_t i = 0; i < c.local_fixation.arc_lengths.size(); ++i) {
        const double l = c.local_fixation.arc_lengths[i];
        require(l > 0.0 && l <= 1.0, "local_fixation.arc_lengths", "must lie in (0, 1]");
    }
    require(c.girsanov.t > 0.0, "girsanov.t", "must be positive");
    require(c.girsanov.replicas >= 1000, "girsanov.replicas", "must be >= 1000");
    if (c.experiment == Experiment::GirsanovCheck)
        require(c.params.beta >= 0.0, "beta", "the Girsanov bracket is stated for beta >= 0");
}

ExperimentConfig parse_config(const std::string& text)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (!root.IsMap()) throw ConfigError("config must be a mapping");
    check_keys(root, "");

    ExperimentConfig c;
    std::string name;
    read(root, "", "experiment", name);
    if (name.empty()) throw ConfigError("missing key 'experiment'");
    const auto ex = experiment_from_string(name);
    if (!ex) {
        std::string list;
        for (const auto& [k, n] : kExperimentNames) list += (list.empty() ? "" : ", ") + std::string(n);
        throw ConfigError("key 'experiment': unknown experiment '" + name + "' (one of " + list + ")");
    }
    c.experiment = *ex;
    read(root, "", "seed", c.seed);
    read(root, "", "output_dir", c.output_dir);
    read(root, "", "workers", c.workers);
    read(root, "", "alpha", c.params.alpha);
    read(root, "", "beta", c.params.beta);
    read(root, "", "gamma", c.params.gamma);
    c.analytics.alpha_grid = read_grid(root, "alpha_grid");
    c.analytics.gamma_grid = read_grid(root, "gamma_grid");

    if (auto n = section(root, "resolution")) {
        read(n, "resolution", "L", c.resolution.L);
        read(n, "resolution", "M", c.resolution.M);
    }
    if (auto n = section(root, "ensemble")) {
        auto& e = c.ensemble;
        read(n, "ensemble", "replicas", e.replicas);
        read(n, "ensemble", "horizon", e.horizon);
        read(n, "ensemble", "checkpoints", e.checkpoints);
        read(n, "ensemble", "checkpoint_list", e.checkpoint_list);
        read(n, "ensemble", "snapshot_times", e.snapshot_times);
        read(n, "ensemble", "snapshot_replicas", e.snapshot_replicas);
    }
    if (auto n = section(root, "initial")) {
        auto& i = c.initial;
        read(n, "initial", "profile", i.profile);
        read(n, "initial", "value", i.value);
        read(n, "initial", "edge", i.edge);
        read(n, "initial", "from", i.from);
        read(n, "initial", "to", i.to);
    }
    if (auto n = section(root, "fleming_viot")) {
        auto& f = c.fleming_viot;
        read(n, "fleming_viot", "replicas", f.replicas);
        read(n, "fleming_viot", "horizon", f.horizon);
        read(n, "fleming_viot", "burn_in", f.burn_in);
        read(n, "fleming_viot", "sample_interval", f.sample_interval);
        read(n, "fleming_viot", "batches", f.batches);
        read(n, "fleming_viot", "probes", f.probes);
        read(n, "fleming_viot", "distances", f.distances);
    }
    if (auto n = section(root, "entrance")) {
        auto& e = c.entrance;
        read(n, "entrance", "L", e.L);
        read(n, "entrance", "replicas", e.replicas);
        read(n, "entrance", "n_grid", e.n_grid);
        read(n, "entrance", "truncation_quantile", e.truncation_quantile);
    }
    if (auto n = section(root, "duality")) {
        auto& d = c.duality;
        read(n, "duality", "L", d.L);
        read(n, "duality", "M", d.M);
        read(n, "duality", "replicas_spde", d.replicas_spde);
        read(n, "duality", "replicas_dual", d.replicas_dual);
        read(n, "duality", "bias_budget", d.bias_budget);
    }
    if (auto n = section(root, "wf")) {
        auto& w = c.wf;
        read(n, "wf", "deme_size", w.deme_size);
        read(n, "wf", "x0", w.x0);
        read(n, "wf", "replicas", w.replicas);
        read(n, "wf", "histogram_time", w.histogram_time);
        read(n, "wf", "bins", w.bins);
        read(n, "wf", "times", w.times);
    }
    if (auto n = section(root, "martingale")) {
        auto& m = c.martingale;
        read(n, "martingale", "L", m.L);
        read(n, "martingale", "paths", m.paths);
        read(n, "martingale", "checkpoints", m.checkpoints);
        read(n, "martingale", "green", m.green);
        read(n, "martingale", "red", m.red);
        read(n, "martingale", "count_series_runs", m.count_series_runs);
    }
    if (auto n = section(root, "local_fixation")) read(n, "local_fixation", "arc_lengths", c.local_fixation.arc_lengths);
    if (auto n = section(root, "girsanov")) {
        read(n, "girsanov", "t", c.girsanov.t);
        read(n, "girsanov", "replicas", c.girsanov.replicas);
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string echo_config(const ExperimentConfig& c)
{
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "experiment" << YAML::Value << std::string(to_string(c.experiment));
    out << YAML::Key << "seed" << YAML::Value << c.seed;
    out << YAML::Key << "alpha" << YAML::Value << num(c.params.alpha);
    out << YAML::Key << "beta" << YAML::Value << num(c.params.beta);
    out << YAML::Key << "gamma" << YAML::Value << num(c.params.gamma);
    auto key = [&](const char* k) -> YAML::Emitter& { return out << YAML::Key << k << YAML::Value; };
    auto ensemble = [&] {
        key("ensemble") << YAML::BeginMap;
        key("replicas") << c.ensemble.replicas;
        key("horizon") << num(c.ensemble.horizon);
        if (c.ensemble.checkpoint_list.empty()) key("checkpoints") << c.ensemble.checkpoints;
        else emit_list(key("checkpoint_list"), c.ensemble.checkpoint_list);
        if (!c.ensemble.snapshot_times.empty()) {
            emit_list(key("snapshot_times"), c.ensemble.snapshot_times);
            key("snapshot_replicas") << c.ensemble.snapshot_replicas;
        }
        out << YAML::EndMap;
    };
    auto resolution = [&] {
        key("resolution") << YAML::BeginMap;
        key("L") << c.resolution.L;
        key("M") << c.deme_size();
        out << YAML::EndMap;
    };
    auto initial = [&] {
        key("initial") << YAML::BeginMap;
        key("profile") << c.initial.profile;
        if (c.initial.profile == "constant") key("value") << num(c.initial.value);
        if (c.initial.profile == "step") key("edge") << num(c.initial.edge);
        if (c.initial.profile == "indicator") {
            key("from") << num(c.initial.from);
            key("to") << num(c.initial.to);
        }
        out << YAML::EndMap;
    };
    auto entrance = [&] {
        key("entrance") << YAML::BeginMap;
        key("L") << c.entrance_sites();
        key("replicas") << c.entrance.replicas;
        emit_list(key("n_grid"), c.entrance_grid());
        key("truncation_quantile") << num(c.entrance.truncation_quantile);
        out << YAML::EndMap;
    };

    switch (c.experiment) {
    case Experiment::AnalyticsTable:
        emit_list(key("alpha_grid"), c.analytics.alpha_grid.empty() ? std::vector<double>{c.params.alpha}
                                                                     : c.analytics.alpha_grid);
        emit_list(key("gamma_grid"), c.analytics.gamma_grid.empty() ? std::vector<double>{c.params.gamma}
                                                                     : c.analytics.gamma_grid);
        break;
    case Experiment::FixationRate:
    case Experiment::SurvivalCurve:
        resolution();
        initial();
        ensemble();
        break;
    case Experiment::QsdTwoPoint: {
        resolution();
        initial();
        const auto& f = c.fleming_viot;
        key("fleming_viot") << YAML::BeginMap;
        key("replicas") << f.replicas;
        key("horizon") << num(f.horizon);
        key("burn_in") << num(f.burn_in < 0.0 ? 0.5 * f.horizon : f.burn_in);
        key("sample_interval") << num(f.sample_interval);
        key("batches") << f.batches;
        emit_list(key("probes"), f.probes);
        emit_list(key("distances"), f.distances);
        out << YAML::EndMap;
        entrance();
        break;
    }
    case Experiment::DualityCheck: {
        const auto& d = c.duality;
        key("duality") << YAML::BeginMap;
        key("L") << d.L;
        key("M") << (d.M > 0 ? d.M : default_deme_size(c.params, d.L));
        key("replicas_spde") << d.replicas_spde;
        key("replicas_dual") << d.replicas_dual;
        key("bias_budget") << d.bias_budget;
        out << YAML::EndMap;
        break;
    }
    case Experiment::WfReference: {
        const auto& w = c.wf;
        key("wf") << YAML::BeginMap;
        key("deme_size") << w.deme_size;
        key("x0") << num(w.x0);
        key("replicas") << w.replicas;
        key("histogram_time") << num(w.histogram_time);
        key("bins") << w.bins;
        emit_list(key("times"), w.times);
        out << YAML::EndMap;
        break;
    }
    case Experiment::MartingaleCheck: {
        const auto& m = c.martingale;
        key("martingale") << YAML::BeginMap;
        key("L") << m.L;
        key("paths") << m.paths;
        emit_list(key("checkpoints"), m.checkpoints);
        key("green") << num(m.green);
        key("red") << num(m.red);
        key("count_series_runs") << m.count_series_runs;
        out << YAML::EndMap;
        break;
    }
    case Experiment::LocalFixation:
        key("local_fixation") << YAML::BeginMap;
        emit_list(key("arc_lengths"), c.local_fixation.arc_lengths);
        out << YAML::EndMap;
        entrance();
        break;
    case Experiment::GirsanovCheck:
        resolution();
        initial();
        key("girsanov") << YAML::BeginMap;
        key("t") << num(c.girsanov.t);
        key("replicas") << c.girsanov.replicas;
        out << YAML::EndMap;
        break;
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::string config_hash(const ExperimentConfig& cfg)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : echo_config(cfg)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace fkpp
