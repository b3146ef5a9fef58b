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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <boost/rational.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"

#include "effchsh/adversary.h"
#include "effchsh/bounds.h"
#include "effchsh/cli.h"
#include "effchsh/estimator.h"
#include "effchsh/qm.h"
#include "effchsh/sampler.h"
#include "support/random_models.h"

namespace {

using namespace effchsh;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome_ {
    bool pass = true;
    std::string detail;
};

std::string fmt(double x, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

// ---------------------------------------------------------------------------
Outcome_ ac1_vertex_table() {
    using R = boost::rational<long long>;
    auto t0 = Clock::now();
    Outcome_ o;
    const std::vector<std::pair<R, R>> points = {{R(1), R(1)}, {R(3, 5), R(1, 2)}, {R(1, 4), R(3, 4)},
                                                 {R(0), R(2, 3)}, {R(7, 8), R(1, 8)}};
    for (auto [ra, rb] : points) {
        double a = static_cast<double>(ra.numerator()) / static_cast<double>(ra.denominator());
        double b = static_cast<double>(rb.numerator()) / static_cast<double>(rb.denominator());
        auto rows = enumerate_vertices(a, b);
        R bound = R(2) * ra * rb;
        double bound_d = static_cast<double>(bound.numerator()) / static_cast<double>(bound.denominator());
        double max_abs = 0.0;
        bool ok = rows.size() == 16;
        for (const VertexRow &row : rows) {
            const auto &s = row.signs;
            R x = s[0] * ra, xp = s[1] * ra, y = s[2] * rb, yp = s[3] * rb;
            R exact = x * y - x * yp + xp * y + xp * yp;
            ok = ok && (exact == bound || exact == -bound);
            ok = ok && std::fabs(row.u_value) == bound_d;
            max_abs = std::max(max_abs, std::fabs(row.u_value));
        }
        ok = ok && max_abs == bound_d;
        o.pass = o.pass && ok;
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    o.pass = o.pass && secs < 1.0;
    o.detail = "16 rows, u = +-2ab exactly at 5 rational points incl. (1,1), (3/5,1/2); " + fmt(secs, 3) + " s (< 1 s)";
    return o;
}

// ---------------------------------------------------------------------------
Outcome_ ac2_solution_suites() {
    auto t0 = Clock::now();
    Outcome_ o;
    std::mt19937_64 g(2);
    const std::array<std::pair<testing::Assumption, EffectiveCorrelationMode>, 3> cases = {
        std::pair{testing::Assumption::SolutionI, EffectiveCorrelationMode::SolutionI},
        std::pair{testing::Assumption::SolutionII, EffectiveCorrelationMode::SolutionII},
        std::pair{testing::Assumption::General, EffectiveCorrelationMode::SolutionIII}};
    std::ostringstream detail;
    for (auto [kind, mode] : cases) {
        double worst = 0.0;
        long evaluations = 0;
        long failures = 0;
        for (int i = 0; i < 1000; ++i) {
            SLHVModel m = testing::random_model(g, kind);
            for (int k = 0; k < 50; ++k) {
                InequalityReport r = compute_U_eff(m, testing::random_quad(g), mode);
                ++evaluations;
                worst = std::max(worst, std::fabs(r.U_eff));
                if (!r.assumption_passed || std::fabs(r.U_eff) > 2.0 + 1e-9) {
                    ++failures;
                }
            }
        }
        o.pass = o.pass && failures == 0;
        detail << mode_name(mode) << " max|U_eff|=" << fmt(worst, 12) << " (" << evaluations << " evals, "
               << failures << " fail); ";
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    o.pass = o.pass && secs < 120.0;
    detail << fmt(secs, 3) << " s (< 120 s)";
    o.detail = detail.str();
    return o;
}

// ---------------------------------------------------------------------------
Outcome_ ac3_qm_violation() {
    auto t0 = Clock::now();
    Outcome_ o;
    SettingsQuad q = SettingsQuad::standard();
    double max_dev = 0.0;
    for (double F : {0.0, 0.5, 1.0 / std::numbers::sqrt2, 0.9, 0.95, 1.0}) {
        max_dev = std::max(max_dev, std::fabs(qm_ueff(QMModelParams::perfect(F), q) - 2 * std::numbers::sqrt2 * F));
    }
    QMModelParams params(0.75, 0.75, 0.9, 0.9, 0.95);
    double exact = qm_ueff(params, q);
    ExperimentResult res = run_experiment(Source(params), ExperimentPlan(q, 1000000, 3), 0);
    UEffEstimate est = u_eff_from_counts(res.records);
    double z = std::fabs(est.u_eff - exact) / est.std_error;
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    o.pass = max_dev <= 1e-12 && std::fabs(exact - 2.68701) < 5e-6 && z <= 4.0 && secs < 30.0;
    o.detail = "exact=" + fmt(exact, 8) + " (|dev from 2sqrt2 F| max " + fmt(max_dev, 3) + "), MC=" +
               fmt(est.u_eff, 6) + " +- " + fmt(est.std_error, 3) + " (" + fmt(z, 3) + " sigma); " + fmt(secs, 3) +
               " s (< 30 s)";
    return o;
}

// ---------------------------------------------------------------------------
struct SweepRun {
    double eta, f12;
    QMModelParams params;
    double exact;
    UEffEstimate est;
    EpsilonReport eps;
    std::uint64_t min_coincidences;
};

std::vector<SweepRun> efficiency_sweep() {
    std::vector<SweepRun> runs;
    std::uint64_t seed = 100;
    for (double eta : {0.1, 0.3, 0.5, 0.75, 1.0}) {
        for (double f12 : {0.25, 0.5, 1.0}) {
            QMModelParams p = QMModelParams::symmetric(eta, f12, 0.95);
            // A 2% margin keeps the realized coincidence count above 1e5.
            auto n = static_cast<std::uint64_t>(std::ceil(1.02e5 / p.pair_detection()));
            ExperimentResult res = run_experiment(Source(p), ExperimentPlan(SettingsQuad::standard(), n, seed++), 0);
            UEffEstimate est = u_eff_from_counts(res.records);
            std::uint64_t min_c = UINT64_MAX;
            for (const auto &pp : est.per_pair) {
                min_c = std::min(min_c, pp.coincidences);
            }
            runs.push_back({eta, f12, p, qm_ueff(p, SettingsQuad::standard()), est,
                            epsilon_decomposition(res.records), min_c});
        }
    }
    return runs;
}

Outcome_ ac4_efficiency_independence(const std::vector<SweepRun> &runs, double secs) {
    Outcome_ o;
    bool bitwise = true;
    double worst_z = 0.0;
    std::uint64_t min_c = UINT64_MAX;
    for (const SweepRun &a : runs) {
        bitwise = bitwise && a.exact == runs.front().exact;
        min_c = std::min(min_c, a.min_coincidences);
        for (const SweepRun &b : runs) {
            double s = std::hypot(a.est.std_error, b.est.std_error);
            worst_z = std::max(worst_z, std::fabs(a.est.u_eff - b.est.u_eff) / s);
        }
    }
    o.pass = bitwise && worst_z <= 4.0 && min_c >= 100000;
    o.detail = "15 (eta, f12) points: exact U_eff " + std::string(bitwise ? "bitwise constant" : "NOT constant") + " = " +
               fmt(runs.front().exact, 17) + "; worst pairwise gap " + fmt(worst_z, 3) +
               " sigma (<= 4); min coincidences " + std::to_string(min_c) + "; " + fmt(secs, 3) + " s";
    return o;
}

Outcome_ ac5_appendix_identities(const std::vector<SweepRun> &runs) {
    Outcome_ o;
    SettingsQuad q = SettingsQuad::standard();
    double worst_identity = 0.0;
    double worst_eps_qm = 0.0;
    int realistic = 0;
    int u_ok = 0;
    int bound_ok = 0;
    std::string excluded;
    for (const SweepRun &r : runs) {
        worst_identity = std::max(worst_identity, std::fabs(r.eps.U - (r.eps.U_eff - r.eps.eps_total)));
        double u_exact = 0.0;
        for (PairIndex p : kAllPairs) {
            u_exact += kChshSigns[static_cast<std::size_t>(p)] * qm_correlation(r.params, q.first(p), q.second(p));
        }
        worst_eps_qm = std::max(worst_eps_qm, std::fabs((r.exact - u_exact) - qm_epsilon_identity(r.params, r.exact)));
        // Statements about actual runs cover lossy detection, eta^2 f12 <= 1/(sqrt2 F).
        if (r.params.pair_detection() <= 1.0 / (std::numbers::sqrt2 * r.params.F())) {
            ++realistic;
            u_ok += std::fabs(r.eps.U) <= 2.0;
            bound_ok += std::fabs(r.eps.U_eff) <= qm_appendix_bound(r.params) &&
                        std::fabs(r.exact) <= qm_appendix_bound(r.params);
        } else {
            excluded += " (eta=" + fmt(r.eta) + ", f12=" + fmt(r.f12) + ": U=" + fmt(r.eps.U, 5) + ")";
        }
    }
    o.pass = worst_identity <= 1e-12 && worst_eps_qm <= 1e-12 && realistic > 0 && u_ok == realistic &&
             bound_ok == realistic;
    o.detail = "|U - (U_eff - eps)| max " + fmt(worst_identity, 3) + "; eps_QM identity max dev " +
               fmt(worst_eps_qm, 3) + "; |U| <= 2 in " + std::to_string(u_ok) + "/" + std::to_string(realistic) +
               " lossy runs; 2/(eta^2 f12) bound held in " + std::to_string(bound_ok) + "/" +
               std::to_string(realistic) + "; perfect-detection point outside scope:" +
               (excluded.empty() ? " none" : excluded);
    return o;
}

// ---------------------------------------------------------------------------
Outcome_ ac6_detection_loophole() {
    auto t0 = Clock::now();
    Outcome_ o;
    SearchConfig open{threshold_detection_family()};
    open.workers = 0;
    AdversaryResult found = search(open);

    SearchConfig slice{threshold_detection_family().freeze("theta1", 0.0).freeze("theta2", 0.0)};
    slice.workers = 0;
    AdversaryResult sliced = search(slice);
    SearchConfig smooth{modulated_p0_family().freeze("c1", 0.0)};
    smooth.workers = 0;
    AdversaryResult smoothed = search(smooth);
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();

    bool loophole = found.best_abs_u_eff > 2.0 && found.best_abs_u_eff >= 2.05 && !found.solution1.passed;
    bool converse = sliced.best_abs_u_eff <= 2.0 + 1e-9 && smoothed.best_abs_u_eff <= 2.0 + 1e-9 &&
                    sliced.soundness_violations == 0 && smoothed.soundness_violations == 0 &&
                    found.soundness_violations == 0;
    o.pass = loophole && converse && secs < 300.0;
    std::ostringstream d;
    d << "threshold best |U_eff|=" << fmt(found.best_abs_u_eff, 8) << " at (" << fmt(found.best_parameters[0], 4)
      << ", " << fmt(found.best_parameters[1], 4) << "), solution1 "
      << (found.solution1.passed ? "passes" : "fails (dev " + fmt(found.solution1.deviation, 3) + ")")
      << "; theta=0 slice max " << fmt(sliced.best_abs_u_eff, 12) << ", c1=0 slice max "
      << fmt(smoothed.best_abs_u_eff, 12) << " (<= 2 + 1e-9); " << fmt(secs, 3) << " s (< 300 s)";
    o.detail = d.str();
    return o;
}

// ---------------------------------------------------------------------------
std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int cli(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = cli::run(args, out, err);
    if (code != 0) {
        std::cerr << "  command failed: " << err.str();
    }
    return code;
}

Outcome_ ac7_reproducibility(const fs::path &source) {
    auto t0 = Clock::now();
    Outcome_ o;
    fs::path dir = fs::temp_directory_path() / "effchsh_acceptance_replay";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto at = [&](const std::string &name) { return (dir / name).string(); };
    std::string model = (source / "data/models/threshold_adversary.json").string();
    std::string qm = (source / "data/qm/default.json").string();

    // (name, args, output suffixes relative to --out)
    struct Job {
        std::string name;
        std::vector<std::string> args;
        std::vector<std::string> suffixes;
    };
    std::vector<Job> jobs = {
        {"sim_slhv", {"simulate", "--model", model, "--trials", "300000", "--seed", "11"}, {".csv", ".json"}},
        {"sim_qm", {"simulate", "--model", qm, "--trials", "300000", "--seed", "12"}, {".csv", ".json"}},
        {"verify.json", {"verify-bounds", "--model", model, "-vv"}, {""}},
        {"predict.json", {"qm-predict", "--params", qm}, {""}},
        {"adversary.json",
         {"adversary-search", "--family", "modulated-p0", "--restarts", "6", "--max-evals", "300", "--grid", "360"},
         {""}},
        {"sweep.csv",
         {"sweep", "--eta", "0.3,0.75", "--f12", "0.5,1", "--F", "0.95", "--min-coincidences", "20000", "--seed", "9"},
         {""}},
    };
    int files = 0;
    int identical = 0;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const Job job = jobs[j];
        std::vector<std::string> args = job.args;
        args.insert(args.end(), {"--out", at(job.name), "--workers", "3"});
        if (cli(args) != 0) {
            o.pass = false;
            continue;
        }
        if (job.name == "sim_qm") {
            // Analysis of the simulated counts is a run of its own.
            jobs.push_back({"analysis.json",
                            {"analyze", "--counts", at("sim_qm.csv"), "--sidecar", at("sim_qm.json")},
                            {""}});
        }
        std::string manifest = at(job.name) + ".manifest.json";
        for (unsigned w : {1u, 4u, 8u}) {
            std::string replay_out = at(job.name + ".replay" + std::to_string(w));
            if (cli({"replay", "--manifest", manifest, "--out", replay_out, "--workers", std::to_string(w)}) != 0) {
                o.pass = false;
                continue;
            }
            for (const std::string &suffix : job.suffixes) {
                ++files;
                identical += slurp(at(job.name) + suffix) == slurp(replay_out + suffix) &&
                             !slurp(at(job.name) + suffix).empty();
            }
        }
    }
    fs::remove_all(dir);
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    o.pass = o.pass && files > 0 && identical == files;
    o.detail = std::to_string(jobs.size()) + " runs replayed at 1/4/8 workers: " + std::to_string(identical) + "/" +
               std::to_string(files) + " output files byte-identical; " + fmt(secs, 3) + " s";
    return o;
}

}  // namespace

int main() {
    const char *env = std::getenv("EFFCHSH_SOURCE_DIR");
    fs::path source = env ? fs::path(env) : fs::current_path();
    int failures = 0;
    auto report = [&](int id, const std::string &title, const std::function<Outcome_()> &fn) {
        Outcome_ o;
        try {
            o = fn();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::cout << "AC" << id << " " << (o.pass ? "PASS" : "FAIL") << "  " << title << ": " << o.detail << std::endl;
    };
    report(1, "vertex table", ac1_vertex_table);
    report(2, "solution theorems", ac2_solution_suites);
    report(3, "QM violation", ac3_qm_violation);
    std::vector<SweepRun> runs;
    double sweep_secs = 0.0;
    report(4, "efficiency independence", [&] {
        auto t0 = Clock::now();
        runs = efficiency_sweep();
        sweep_secs = std::chrono::duration<double>(Clock::now() - t0).count();
        return ac4_efficiency_independence(runs, sweep_secs);
    });
    report(5, "appendix identities", [&] {
        if (runs.empty()) {
            runs = efficiency_sweep();
        }
        return ac5_appendix_identities(runs);
    });
    report(6, "detection loophole", ac6_detection_loophole);
    report(7, "reproducibility", [&] { return ac7_reproducibility(source); });
    std::cout << (failures == 0 ? "ALL ACCEPTANCE CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAIL")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
