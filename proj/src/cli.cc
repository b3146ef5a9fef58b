// Copyright 2026 The effchsh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "effchsh/cli.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "effchsh/adversary.h"
#include "effchsh/bounds.h"
#include "effchsh/estimator.h"
#include "effchsh/model_io.h"
#include "effchsh/qm.h"
#include "effchsh/sampler.h"

namespace effchsh::cli {

namespace {

using nlohmann::json;

constexpr const char *kStandardQuad = "0,45,22.5,67.5";

struct CommonOptions {
    std::string out;
    std::string manifest;
    std::string format = "json";
    int verbosity = 0;
    unsigned workers = 0;
};

void add_common(CLI::App *cmd, CommonOptions &opts, bool with_format) {
    cmd->add_option("--out", opts.out, "Output path");
    cmd->add_option("--manifest", opts.manifest, "Manifest path (default: <out>.manifest.json)");
    cmd->add_option("--workers", opts.workers, "Worker threads; 0 = all cores. Never changes results");
    cmd->add_flag_function(
        "-v,--verbose", [&opts](std::int64_t count) { opts.verbosity = static_cast<int>(count); },
        "More detail; repeat for per-lambda output");
    if (with_format) {
        cmd->add_option("--format", opts.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    }
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("cannot write " + path);
    }
    f << content;
    if (!f) {
        throw InputError("error while writing " + path);
    }
}

std::string render(const json &doc, const std::string &format) {
    if (format == "csv") {
        std::ostringstream os;
        os << "key,value\n";
        const json flat = doc.flatten();
        for (const auto &[key, value] : flat.items()) {
            std::string v = value.is_string() ? value.get<std::string>() : value.dump();
            if (v.find_first_of(",\"\n") != std::string::npos) {
                std::string quoted = "\"";
                for (char c : v) {
                    quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
                }
                v = quoted + "\"";
            }
            os << key << ',' << v << '\n';
        }
        return os.str();
    }
    return doc.dump(2) + "\n";
}

/// Arguments as recorded in a manifest: execution-only flags removed.
std::vector<std::string> replayable_args(const std::vector<std::string> &args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string &a = args[i];
        if (a == "--workers" || a == "--manifest") {
            ++i;
            continue;
        }
        if (a.rfind("--workers=", 0) == 0 || a.rfind("--manifest=", 0) == 0) {
            continue;
        }
        out.push_back(a);
    }
    return out;
}

void write_manifest(const CommonOptions &opts, const std::vector<std::string> &args, const std::string &command,
                    const json &inputs, const std::vector<std::string> &outputs) {
    std::string path = opts.manifest;
    if (path.empty() && !opts.out.empty()) {
        path = opts.out + ".manifest.json";
    }
    if (path.empty()) {
        return;
    }
    json m;
    m["schema_version"] = 1;
    m["tool"] = "effchsh";
    m["tool_version"] = kToolVersion;
    m["command"] = command;
    m["args"] = replayable_args(args);
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    write_file(path, m.dump(2) + "\n");
}

/// "0.1,0.3,0.5" or "start:stop:step" (inclusive of stop within rounding).
std::vector<double> parse_list(const std::string &text, const std::string &name) {
    std::vector<double> values;
    auto number = [&](const std::string &s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception &) {
            throw InputError(name + ": cannot parse '" + s + "'");
        }
        if (used != s.size()) {
            throw InputError(name + ": cannot parse '" + s + "'");
        }
        return v;
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string p;
        while (std::getline(ss, p, ':')) {
            parts.push_back(p);
        }
        if (parts.size() != 3) {
            throw InputError(name + ": range must be start:stop:step");
        }
        double start = number(parts[0]);
        double stop = number(parts[1]);
        double step = number(parts[2]);
        if (!(step > 0.0)) {
            throw InputError(name + ": step must be positive");
        }
        for (long k = 0;; ++k) {
            double v = start + static_cast<double>(k) * step;
            if (v > stop + 1e-9 * step) {
                break;
            }
            values.push_back(v);
        }
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) {
                values.push_back(number(item));
            }
        }
    }
    if (values.empty()) {
        throw InputError(name + ": empty range");
    }
    return values;
}

json quad_json(const SettingsQuad &q) {
    auto d = q.to_degrees();
    return {d[0], d[1], d[2], d[3]};
}

// verify-bounds ---------------------------------------------------------------

struct VerifyOptions {
    std::string model;
    std::string quad = kStandardQuad;
    std::string mode = "solution1";
};

int cmd_verify_bounds(const VerifyOptions &o, const CommonOptions &c, const std::vector<std::string> &args,
                      std::ostream &out) {
    json doc = read_json_file(o.model);
    LoadedModel loaded = model_from_json(doc);
    SettingsQuad quad = parse_quad(o.quad);
    EffectiveCorrelationMode mode = parse_mode(o.mode);
    InequalityReport report = compute_U_eff(loaded.model, quad, mode);
    json j = to_json(report, c.verbosity);
    j["model"] = loaded.description;
    j["projected"] = loaded.projected;
    std::string text = render(j, c.format);
    out << text;
    std::vector<std::string> outputs;
    if (!c.out.empty()) {
        write_file(c.out, text);
        outputs.push_back(c.out);
    }
    write_manifest(c, args, "verify-bounds", {{"model", doc}, {"quad_deg", quad_json(quad)}, {"mode", mode_name(mode)}},
                   outputs);
    return report.theorem_breach() ? kTheoremBreach : kOk;
}

// simulate --------------------------------------------------------------------

struct QmFlags {
    std::optional<double> eta, eta1, eta2, f, f1, f2, f12, F;

    bool any() const { return eta || eta1 || eta2 || f || f1 || f2 || f12 || F; }

    QMModelParams resolve() const {
        if (f12 && (f || f1 || f2)) {
            throw InputError("--f12 cannot be combined with --f, --f1 or --f2");
        }
        double e = eta.value_or(1.0);
        double ff = f12 ? std::sqrt(*f12) : f.value_or(1.0);
        try {
            return QMModelParams(eta1.value_or(e), eta2.value_or(e), f1.value_or(ff), f2.value_or(ff), F.value_or(1.0));
        } catch (const DomainError &err) {
            throw InputError(err.what());
        }
    }
};

void add_qm_flags(CLI::App *cmd, QmFlags &q) {
    cmd->add_option("--eta", q.eta, "Detector efficiency, both photons");
    cmd->add_option("--eta1", q.eta1, "Detector efficiency, photon 1");
    cmd->add_option("--eta2", q.eta2, "Detector efficiency, photon 2");
    cmd->add_option("--f", q.f, "Collimator factor per photon, both photons");
    cmd->add_option("--f1", q.f1, "Collimator factor, photon 1");
    cmd->add_option("--f2", q.f2, "Collimator factor, photon 2");
    cmd->add_option("--f12", q.f12, "Pair collimator factor f1*f2 (split evenly)");
    cmd->add_option("--F", q.F, "Correlation strength");
}

struct SimulateOptions {
    std::string model;
    QmFlags qm;
    std::string quad = kStandardQuad;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateOptions &o, const CommonOptions &c, const std::vector<std::string> &args,
                 std::ostream &out) {
    if (c.out.empty()) {
        throw InputError("simulate needs --out PREFIX (writes PREFIX.csv and PREFIX.json)");
    }
    if (o.model.empty() == !o.qm.any()) {
        throw InputError("simulate needs exactly one source: --model FILE or QM flags (--eta, --f, --F, ...)");
    }
    SettingsQuad quad = parse_quad(o.quad);
    std::optional<ExperimentPlan> plan;
    try {
        plan.emplace(quad, o.trials, o.seed);
    } catch (const DomainError &e) {
        throw InputError(e.what());
    }

    json source_desc;
    json model_doc;
    std::optional<LoadedSource> loaded;
    if (!o.model.empty()) {
        model_doc = read_json_file(o.model);
        loaded.emplace(source_from_json(model_doc));
        source_desc = model_doc;
    } else {
        QMModelParams p = o.qm.resolve();
        loaded.emplace(p);
        source_desc = to_json(p);
        source_desc["kind"] = "qm";
    }
    ExperimentResult result = std::visit(
        [&](const auto &src) {
            using T = std::decay_t<decltype(src)>;
            if constexpr (std::is_same_v<T, LoadedModel>) {
                return run_experiment(Source(std::cref(src.model)), *plan, c.workers);
            } else {
                return run_experiment(Source(src), *plan, c.workers);
            }
        },
        *loaded);

    std::ostringstream csv;
    write_counts_csv(csv, result.records);
    std::string csv_path = c.out + ".csv";
    std::string sidecar_path = c.out + ".json";
    write_file(csv_path, csv.str());
    write_file(sidecar_path, sidecar_json(result, *plan, source_desc).dump(2) + "\n");
    out << "wrote " << csv_path << " and " << sidecar_path << "\n";
    write_manifest(c, args, "simulate",
                   {{"source", source_desc},
                    {"quad_deg", quad_json(quad)},
                    {"trials_per_pair", o.trials},
                    {"seed", o.seed}},
                   {csv_path, sidecar_path});
    return kOk;
}

// analyze ---------------------------------------------------------------------

struct AnalyzeOptions {
    std::string counts;
    std::string sidecar;
};

int cmd_analyze(const AnalyzeOptions &o, const CommonOptions &c, const std::vector<std::string> &args,
                std::ostream &out) {
    std::ifstream in(o.counts);
    if (!in) {
        throw InputError("cannot open " + o.counts);
    }
    std::array<CountsRecord, 4> recs = read_counts_csv(in);
    if (!o.sidecar.empty()) {
        apply_sidecar(recs, read_json_file(o.sidecar));
    }
    json j = analysis_json(recs);
    std::string text = render(j, c.format);
    out << text;
    std::vector<std::string> outputs;
    if (!c.out.empty()) {
        write_file(c.out, text);
        outputs.push_back(c.out);
    }
    json inputs = {{"counts", o.counts}};
    if (!o.sidecar.empty()) {
        inputs["sidecar"] = o.sidecar;
    }
    write_manifest(c, args, "analyze", inputs, outputs);
    return kOk;
}

// qm-predict ------------------------------------------------------------------

struct PredictOptions {
    QmFlags qm;
    std::string params_file;
    std::string quad = kStandardQuad;
};

int cmd_qm_predict(const PredictOptions &o, const CommonOptions &c, const std::vector<std::string> &args,
                   std::ostream &out) {
    std::optional<QMModelParams> params;
    json params_doc;
    if (!o.params_file.empty()) {
        if (o.qm.any()) {
            throw InputError("use either --params or QM flags, not both");
        }
        params_doc = read_json_file(o.params_file);
        LoadedSource src = source_from_json(params_doc);
        if (!std::holds_alternative<QMModelParams>(src)) {
            throw InputError(o.params_file + " does not hold QM parameters (kind \"qm\")");
        }
        params.emplace(std::get<QMModelParams>(src));
    } else {
        params.emplace(o.qm.resolve());
    }
    SettingsQuad quad = parse_quad(o.quad);

    json j;
    j["schema_version"] = 1;
    j["params"] = to_json(*params);
    j["eta2_f12"] = params->pair_detection();
    j["quad_deg"] = quad_json(quad);
    json per = json::object();
    double u = 0.0;
    for (PairIndex p : kAllPairs) {
        Angle a = quad.first(p);
        Angle b = quad.second(p);
        json probs = {{"++", qm_joint_prob(*params, a, b, 1, 1)},
                      {"+-", qm_joint_prob(*params, a, b, 1, -1)},
                      {"-+", qm_joint_prob(*params, a, b, -1, 1)},
                      {"--", qm_joint_prob(*params, a, b, -1, -1)}};
        double sum = 0.0;
        for (const auto &[_, v] : probs.items()) {
            sum += v.get<double>();
        }
        double e = qm_correlation(*params, a, b);
        u += kChshSigns[static_cast<std::size_t>(p)] * e;
        per[pair_label(p)] = {{"a_deg", a.deg()},
                              {"b_deg", b.deg()},
                              {"P", probs},
                              {"coincidence_sum", sum},
                              {"E", e},
                              {"E_eff", qm_effective_correlation(*params, a, b)}};
    }
    j["per_pair"] = per;
    double u_eff = qm_ueff(*params, quad);
    j["U"] = u;
    j["U_eff"] = u_eff;
    j["abs_U_eff_le_2"] = std::fabs(u_eff) <= 2.0;
    // Doubled physical separation of (a, b); the closed form assumes the
    // equal-separation geometry.
    double phi = 2.0 * std::fabs(quad.a.rad() - quad.b.rad());
    j["violation"] = {{"phi", phi}, {"lhs", violation_lhs(params->F(), phi)}, {"F_sqrt2_le_1", params->F() * std::sqrt(2.0) <= 1.0}};
    j["appendix_bound"] = qm_appendix_bound(*params);
    j["epsilon_QM"] = qm_epsilon_identity(*params, u_eff);

    std::string text = render(j, c.format);
    out << text;
    std::vector<std::string> outputs;
    if (!c.out.empty()) {
        write_file(c.out, text);
        outputs.push_back(c.out);
    }
    write_manifest(c, args, "qm-predict", {{"params", to_json(*params)}, {"quad_deg", quad_json(quad)}}, outputs);
    return kOk;
}

// adversary-search ------------------------------------------------------------

struct AdversaryOptions {
    std::string family;
    std::string quad = kStandardQuad;
    std::string mode = "solution1";
    int restarts = 20;
    int max_evals = 2000;
    std::uint64_t seed = 0;
    std::size_t grid = kDefaultAdversaryGrid;
    std::vector<std::string> freeze;
};

int cmd_adversary(const AdversaryOptions &o, const CommonOptions &c, const std::vector<std::string> &args,
                  std::ostream &out) {
    AdversaryFamily family = family_by_name(o.family);
    json frozen = json::object();
    for (const std::string &f : o.freeze) {
        auto eq = f.find('=');
        if (eq == std::string::npos) {
            throw InputError("--freeze expects name=value, got '" + f + "'");
        }
        std::string name = f.substr(0, eq);
        double value = 0.0;
        try {
            value = std::stod(f.substr(eq + 1));
        } catch (const std::exception &) {
            throw InputError("--freeze: cannot parse value in '" + f + "'");
        }
        try {
            family = family.freeze(name, value);
        } catch (const DomainError &e) {
            throw InputError(e.what());
        }
        frozen[name] = value;
    }
    SearchConfig cfg{family};
    cfg.quad = parse_quad(o.quad);
    cfg.mode = parse_mode(o.mode);
    cfg.restarts = o.restarts;
    cfg.max_evals = o.max_evals;
    cfg.seed = o.seed;
    cfg.grid = o.grid;
    cfg.workers = c.workers;
    try {
        cfg.validate();
    } catch (const DomainError &e) {
        throw InputError(e.what());
    }
    AdversaryResult res = search(cfg);
    json j = to_json(res);
    j["frozen"] = frozen;
    std::string text = j.dump(2) + "\n";
    out << text;
    std::vector<std::string> outputs;
    if (!c.out.empty()) {
        write_file(c.out, text);
        outputs.push_back(c.out);
    }
    write_manifest(c, args, "adversary-search",
                   {{"family", o.family},
                    {"frozen", frozen},
                    {"quad_deg", quad_json(cfg.quad)},
                    {"mode", mode_name(cfg.mode)},
                    {"restarts", o.restarts},
                    {"max_evals", o.max_evals},
                    {"seed", o.seed},
                    {"lambda_grid", o.grid}},
                   outputs);
    return kOk;
}

// sweep -----------------------------------------------------------------------

struct SweepOptions {
    std::string eta;
    std::string f12;
    std::string F;
    std::string quad = kStandardQuad;
    std::uint64_t trials = 0;
    std::uint64_t min_coincidences = 100000;
    std::uint64_t seed = 0;
};

int cmd_sweep(const SweepOptions &o, const CommonOptions &c, const std::vector<std::string> &args, std::ostream &out) {
    std::vector<double> etas = parse_list(o.eta, "--eta");
    std::vector<double> f12s = parse_list(o.f12, "--f12");
    std::vector<double> Fs = parse_list(o.F, "--F");
    SettingsQuad quad = parse_quad(o.quad);

    std::ostringstream csv;
    csv.precision(17);
    csv << "eta,f12,F,trials_per_pair,seed,U_eff_exact,U_eff_sampled,U_eff_stderr,eps_QM,eps_total_sampled,U_sampled,"
           "appendix_bound\n";
    std::uint64_t row = 0;
    for (double eta : etas) {
        for (double f12 : f12s) {
            for (double F : Fs) {
                std::optional<QMModelParams> params;
                try {
                    params.emplace(QMModelParams::symmetric(eta, f12, F));
                } catch (const DomainError &e) {
                    throw InputError(e.what());
                }
                std::uint64_t trials = o.trials;
                if (trials == 0) {
                    trials = static_cast<std::uint64_t>(
                        std::ceil(static_cast<double>(o.min_coincidences) / params->pair_detection()));
                }
                // One independent stream family per grid row.
                std::uint64_t row_seed = CounterRng::substream(o.seed, row, 0).key();
                ExperimentPlan plan(quad, std::max<std::uint64_t>(trials, 1), row_seed);
                ExperimentResult res = run_experiment(Source(*params), plan, c.workers);
                double exact = qm_ueff(*params, quad);
                UEffEstimate est = u_eff_from_counts(res.records);
                EpsilonReport eps = epsilon_decomposition(res.records);
                csv << eta << ',' << f12 << ',' << F << ',' << plan.trials_per_pair() << ',' << row_seed << ','
                    << exact << ',' << est.u_eff << ',' << est.std_error << ',' << qm_epsilon_identity(*params, exact)
                    << ',' << eps.eps_total << ',' << eps.U << ',' << qm_appendix_bound(*params) << '\n';
                ++row;
            }
        }
    }
    std::vector<std::string> outputs;
    if (!c.out.empty()) {
        write_file(c.out, csv.str());
        outputs.push_back(c.out);
    } else {
        out << csv.str();
    }
    write_manifest(c, args, "sweep",
                   {{"eta", etas},
                    {"f12", f12s},
                    {"F", Fs},
                    {"quad_deg", quad_json(quad)},
                    {"trials_per_pair", o.trials},
                    {"min_coincidences", o.min_coincidences},
                    {"seed", o.seed}},
                   outputs);
    return kOk;
}

int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// replay ----------------------------------------------------------------------

struct ReplayOptions {
    std::string manifest;
    std::string out;
};

int cmd_replay(const ReplayOptions &o, const CommonOptions &c, std::ostream &out, std::ostream &err) {
    json m = read_json_file(o.manifest);
    if (!m.contains("args") || !m.at("args").is_array()) {
        throw InputError(o.manifest + ": not a manifest (no 'args' array)");
    }
    std::vector<std::string> args;
    for (const auto &a : m.at("args")) {
        args.push_back(a.get<std::string>());
    }
    if (!args.empty() && args.front() == "replay") {
        throw InputError("refusing to replay a replay manifest");
    }
    if (!o.out.empty()) {
        bool replaced = false;
        for (std::size_t i = 0; i + 1 < args.size(); ++i) {
            if (args[i] == "--out") {
                args[i + 1] = o.out;
                replaced = true;
            }
        }
        for (auto &a : args) {
            if (a.rfind("--out=", 0) == 0) {
                a = "--out=" + o.out;
                replaced = true;
            }
        }
        if (!replaced) {
            args.push_back("--out");
            args.push_back(o.out);
        }
    }
    if (c.workers != 0) {
        args.push_back("--workers");
        args.push_back(std::to_string(c.workers));
    }
    return dispatch(args, out, err);
}

int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Efficiency-robust CHSH analysis: SLHV bounds, QM predictions, simulation, loophole search"};
    app.name("effchsh");
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    CommonOptions common;

    VerifyOptions verify;
    auto *verify_cmd = app.add_subcommand("verify-bounds", "Exact U, M, U_eff and verdicts for a model file");
    verify_cmd->add_option("--model", verify.model, "Model JSON file")->required();
    verify_cmd->add_option("--quad", verify.quad, "a,a',b,b' in degrees");
    verify_cmd->add_option("--mode", verify.mode, "solution1 | solution2 | solution3");
    add_common(verify_cmd, common, true);

    SimulateOptions sim;
    auto *sim_cmd = app.add_subcommand("simulate", "Monte Carlo counts from a model or QM parameters");
    sim_cmd->add_option("--model", sim.model, "Model or QM parameter JSON file");
    add_qm_flags(sim_cmd, sim.qm);
    sim_cmd->add_option("--quad", sim.quad, "a,a',b,b' in degrees");
    sim_cmd->add_option("--trials", sim.trials, "Emitted pairs per setting pair")->required();
    sim_cmd->add_option("--seed", sim.seed, "RNG seed");
    add_common(sim_cmd, common, false);

    AnalyzeOptions analyze;
    auto *analyze_cmd = app.add_subcommand("analyze", "Effective correlations, U_eff and epsilon from counts");
    analyze_cmd->add_option("--counts", analyze.counts, "Counts CSV")->required();
    analyze_cmd->add_option("--sidecar", analyze.sidecar, "Simulation sidecar JSON with emitted totals");
    add_common(analyze_cmd, common, true);

    PredictOptions predict;
    auto *predict_cmd = app.add_subcommand("qm-predict", "Phenomenological QM prediction with efficiencies");
    add_qm_flags(predict_cmd, predict.qm);
    predict_cmd->add_option("--params", predict.params_file, "QM parameter JSON file");
    predict_cmd->add_option("--quad", predict.quad, "a,a',b,b' in degrees");
    add_common(predict_cmd, common, true);

    AdversaryOptions adv;
    auto *adv_cmd = app.add_subcommand("adversary-search", "Search a parametric SLHV family for |U_eff| > 2");
    adv_cmd->add_option("--family", adv.family, "threshold-detection | modulated-p0")->required();
    adv_cmd->add_option("--quad", adv.quad, "a,a',b,b' in degrees");
    adv_cmd->add_option("--mode", adv.mode, "Effective-correlation mode for the objective");
    adv_cmd->add_option("--restarts", adv.restarts, "Random restarts");
    adv_cmd->add_option("--max-evals", adv.max_evals, "Objective evaluations per restart");
    adv_cmd->add_option("--seed", adv.seed, "RNG seed");
    adv_cmd->add_option("--grid", adv.grid, "Lambda grid points");
    adv_cmd->add_option("--freeze", adv.freeze, "Pin a parameter: name=value (repeatable)");
    add_common(adv_cmd, common, false);

    SweepOptions sweep;
    auto *sweep_cmd = app.add_subcommand("sweep", "Exact and sampled U_eff over an (eta, f12, F) grid");
    sweep_cmd->add_option("--eta", sweep.eta, "List a,b,c or range start:stop:step")->required();
    sweep_cmd->add_option("--f12", sweep.f12, "List or range")->required();
    sweep_cmd->add_option("--F", sweep.F, "List or range")->required();
    sweep_cmd->add_option("--quad", sweep.quad, "a,a',b,b' in degrees");
    sweep_cmd->add_option("--trials", sweep.trials, "Fixed pairs per setting; 0 scales with efficiency");
    sweep_cmd->add_option("--min-coincidences", sweep.min_coincidences,
                          "Target coincidences per setting when --trials is 0");
    sweep_cmd->add_option("--seed", sweep.seed, "RNG seed");
    add_common(sweep_cmd, common, false);

    ReplayOptions replay;
    auto *replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay_cmd->add_option("--manifest", replay.manifest, "Manifest JSON")->required();
    replay_cmd->add_option("--out", replay.out, "Override the recorded output path");
    replay_cmd->add_option("--workers", common.workers, "Worker threads");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion &) {
        out << kToolVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "effchsh: " << e.what() << "\n";
        return kInputError;
    }

    if (*verify_cmd) {
        return cmd_verify_bounds(verify, common, args, out);
    }
    if (*sim_cmd) {
        return cmd_simulate(sim, common, args, out);
    }
    if (*analyze_cmd) {
        return cmd_analyze(analyze, common, args, out);
    }
    if (*predict_cmd) {
        return cmd_qm_predict(predict, common, args, out);
    }
    if (*adv_cmd) {
        return cmd_adversary(adv, common, args, out);
    }
    if (*sweep_cmd) {
        return cmd_sweep(sweep, common, args, out);
    }
    if (*replay_cmd) {
        return cmd_replay(replay, common, out, err);
    }
    return kInputError;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    try {
        return dispatch(args, out, err);
    } catch (const Error &e) {
        err << "effchsh: " << e.what() << "\n";
        return kInputError;
    } catch (const nlohmann::json::exception &e) {
        err << "effchsh: malformed JSON input: " << e.what() << "\n";
        return kInputError;
    }
}

}  // namespace effchsh::cli
