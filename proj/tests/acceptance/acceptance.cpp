// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The emschart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "commands.hpp"
#include "features.hpp"
#include "io.hpp"
#include "oracles.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace emschart;
namespace fs = std::filesystem;

namespace
{
    using Clock = std::chrono::steady_clock;

    double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

    struct Verdict
    {
        int id = 0;
        bool pass = true;
        std::vector<std::string> notes;

        void require(bool ok, const std::string &what)
        {
            pass = pass && ok;
            notes.push_back((ok ? "ok " : "FAILED ") + what);
        }
        void note(const std::string &what) { notes.push_back(what); }
    };

    std::string num(double v, int digits = 4)
    {
        std::ostringstream s;
        s.precision(digits);
        s << v;
        return s.str();
    }

    void print(const Verdict &v, double seconds)
    {
        std::cout << "criterion " << v.id << ": " << (v.pass ? "PASS" : "FAIL") << " (" << num(seconds, 3) << " s)";
        for (const auto &n : v.notes)
            std::cout << "; " << n;
        std::cout << std::endl;
    }

    // ---- 1. numerics ---------------------------------------------------------

    Verdict numerics()
    {
        Verdict v{1};
        std::mt19937_64 rng(2024);
        std::normal_distribution<double> g;
        double log_err = 0.0;
        for (int t = 0; t < 100; ++t)
        {
            CMatrix A(8, 8);
            for (Eigen::Index i = 0; i < A.size(); ++i)
                A(i) = Complex(g(rng), g(rng));
            const CMatrix R = A * A.adjoint() + 0.1 * CMatrix::Identity(8, 8);
            log_err = std::max(log_err, (hermitian_exp(hermitian_log(R)) - R).norm() / R.norm());
        }
        v.require(log_err < 1e-10, "exp(log R) rel err " + num(log_err) + " < 1e-10");

        double kl = 0.0;
        for (std::uint64_t s = 0; s < 20; ++s)
            kl = std::max(kl, oracle::kl_gradient_error(s));
        v.require(kl < 1e-4, "KL gradient rel err " + num(kl) + " < 1e-4");

        double ae = 0.0;
        for (std::uint64_t s = 0; s < 5; ++s)
            ae = std::max(ae, oracle::ae_gradient_error(oracle::small_ae_spec(), s));
        v.require(ae < 1e-4, "AE backprop rel err " + num(ae) + " < 1e-4");

        int mismatches = 0;
        for (std::uint64_t s = 0; s < 50; ++s)
        {
            std::mt19937_64 r(500 + s);
            const Eigen::MatrixXd d = oracle::random_distances(10, r);
            const Eigen::MatrixXd dz = oracle::random_distances(10, r, 2);
            for (int kappa : {2, 3})
            {
                mismatches += trustworthiness_from_distances(d, dz, kappa).values != oracle::brute_trustworthiness(d, dz, kappa);
                mismatches += continuity_from_distances(d, dz, kappa).values != oracle::brute_continuity(d, dz, kappa);
            }
        }
        v.require(mismatches == 0, "TW/CT brute-force mismatches " + std::to_string(mismatches) + " of 200");

        double gap = 0.0;
        for (std::uint64_t s = 0; s < 20; ++s)
        {
            std::mt19937_64 r(900 + s);
            const Eigen::MatrixXd d = oracle::random_distances(60, r);
            for (double perplexity : {5.0, 15.0, 30.0})
            {
                std::vector<double> row;
                for (Eigen::Index j = 1; j < d.cols(); ++j)
                    row.push_back(d(0, j));
                const auto cal = calibrate_sigma(row, perplexity);
                gap = std::max(gap, oracle::entropy_gap_bits(conditional_row(row, cal.beta), perplexity));
            }
        }
        v.require(gap < 1e-4, "perplexity entropy gap " + num(gap) + " bits < 1e-4");
        return v;
    }

    // ---- 2. structure --------------------------------------------------------

    bool same_files(const fs::path &a, const fs::path &b, std::vector<std::string> &names)
    {
        bool same = true;
        for (const auto &e : fs::directory_iterator(a))
        {
            const auto ext = e.path().extension();
            if (ext != ".csv" && ext != ".bin")
                continue;
            names.push_back(e.path().filename().string());
            same = same && io::read_file(e.path()) == io::read_file(b / e.path().filename());
        }
        return same && !names.empty();
    }

    Verdict structure(const ExperimentConfig &cfg, const Experiment &ex, const fs::path &work)
    {
        Verdict v{2};
        const SearchSpace space = codebook_space(ex.ctx);
        std::set<std::vector<int>> seen;
        const auto r = exhaustive_search(space, [&](const std::vector<int> &idx) {
            seen.insert(idx);
            return ConfigResult{};
        });
        v.require(space.total() == 121 && r.table.size() == 121 && seen.size() == 121,
                  "exhaustive search enumerates " + std::to_string(seen.size()) + " configurations (121)");

        const std::size_t expect_anchors = static_cast<std::size_t>(std::ceil(cfg.anchors.supervision * static_cast<double>(ex.grid_points) - 1e-9));
        v.require(ex.anchor_indices.size() == expect_anchors && prepare_experiment(cfg).anchor_indices == ex.anchor_indices,
                  std::to_string(ex.anchor_indices.size()) + " anchors, reproducible");

        bool anchors_exact = true, range_ok = true;
        double mass = 0.0;
        for (const auto &channels : {ex.ctx.direct, codebook_channels(ex.ctx, specular_indices(ex.ctx)), codebook_channels(ex.ctx, {0, 10})})
        {
            const ChartRun run = run_chart(ex.ctx, channels, ChartMethod::tsne, true);
            for (std::size_t a = 0; a < ex.ctx.anchors.size(); ++a)
                anchors_exact = anchors_exact &&
                                run.embedding.row(ex.ctx.anchors.indices[a]) == ex.ctx.anchors.coordinates.row(static_cast<Eigen::Index>(a));
            const double perplexity = std::min(ex.ctx.chart.tsne.perplexity, 0.5 * static_cast<double>(ex.ctx.size()));
            mass = std::max(mass, std::abs(joint_p(run.dissimilarity, perplexity).sum() - 1.0));
            mass = std::max(mass, std::abs(student_q(run.embedding).sum() - 1.0));
            for (const auto *vals : {&run.report.tw, &run.report.ct})
                for (double x : *vals)
                    range_ok = range_ok && x >= 0.0 && x <= 1.0;
        }
        v.require(anchors_exact, "anchor rows bit-exact in 3 t-SNE charts");
        v.require(mass < 1e-12, "|sum P - 1|, |sum Q - 1| max " + num(mass) + " < 1e-12");
        v.require(range_ok, "TW, CT in [0, 1]");

        std::vector<std::string> names;
        for (const char *run : {"a", "b"})
        {
            cmd_simulate(cfg, work / "determinism" / run);
            cmd_chart(cfg, work / "determinism" / run);
        }
        const bool same = same_files(work / "determinism" / "a", work / "determinism" / "b", names);
        v.require(same, std::to_string(names.size()) + " simulate/chart artifacts byte-identical across reruns");
        return v;
    }

    // ---- 3. directional reproduction ------------------------------------------

    const ScenarioRow &baseline(const OptimizeResult &r, const std::string &name)
    {
        for (const auto &b : r.baselines)
            if (b.name == name)
                return b;
        throw std::runtime_error("missing baseline " + name);
    }

    void directional(Verdict &v, const std::string &method, const OptimizeResult &r)
    {
        const auto &none = baseline(r, "no_ems");
        const auto &spec = baseline(r, "specular");
        const auto &best = r.best;
        const double drop = 1.0 - best.le_q90 / none.le_q90;
        v.require(drop >= 0.25, method + ": best " + num(best.le_q90) + " m vs no-EMS " + num(none.le_q90) + " m q90 LE, drop " + num(100 * drop, 3) +
                                    "% >= 25%");
        v.require(-best.tw_mean <= -spec.tw_mean && -spec.tw_mean <= -none.tw_mean,
                  method + ": mean -TW best " + num(-best.tw_mean) + " <= specular " + num(-spec.tw_mean) + " <= no-EMS " + num(-none.tw_mean));
        v.require(-best.ct_mean <= -spec.ct_mean && -spec.ct_mean <= -none.ct_mean,
                  method + ": mean -CT best " + num(-best.ct_mean) + " <= specular " + num(-spec.ct_mean) + " <= no-EMS " + num(-none.ct_mean));
        double worst = 0.0;
        int over = 0;
        for (const auto &row : r.search.table)
        {
            worst = std::max(worst, row.objective);
            over += row.objective > 1.05 * none.le_q90;
        }
        v.require(over == 0, method + ": worst codebook q90 LE " + num(worst) + " m, " + std::to_string(over) + " of " + std::to_string(r.search.table.size()) +
                                 " above 1.05 x no-EMS");
    }

    // ---- 4. trade-off ---------------------------------------------------------

    Verdict tradeoff(const OptimizeResult &r)
    {
        Verdict v{4};
        const auto &ris = baseline(r, "idealized_ris");
        const auto &rnd = baseline(r, "random");
        std::string snrs;
        double top = -1e300;
        for (const auto *row : {&baseline(r, "no_ems"), &baseline(r, "specular"), &rnd, &r.best})
        {
            top = std::max(top, row->median_snr_db);
            snrs += row->name + " " + num(row->median_snr_db) + ", ";
        }
        v.require(ris.median_snr_db > top, "median SNR dB: " + snrs + "idealized_ris " + num(ris.median_snr_db) + " is highest");
        v.require(ris.le_q90 > r.best.le_q90, "q90 LE idealized_ris " + num(ris.le_q90) + " m > best " + num(r.best.le_q90) + " m");
        v.require(rnd.median_snr_db < r.best.median_snr_db, "median SNR random " + num(rnd.median_snr_db) + " < best " + num(r.best.median_snr_db));
        v.require(rnd.le_q90 > r.best.le_q90, "q90 LE random " + num(rnd.le_q90) + " m > best " + num(r.best.le_q90) + " m");
        return v;
    }

    // ---- 5. trajectory --------------------------------------------------------

    Verdict trajectory(const ExperimentConfig &cfg, const std::vector<int> &best, const fs::path &work)
    {
        Verdict v{5};
        Scenario sc;
        sc.name = "codebook";
        sc.indices = best;
        const auto none = cmd_evaluate_trajectory(cfg, work / "trajectory", Scenario::parse("no_ems"));
        const auto with = cmd_evaluate_trajectory(cfg, work / "trajectory", sc);
        const double d0 = none.dropout.fraction, d1 = with.dropout.fraction;
        const std::string what = "dropout >" + num(cfg.trajectory.threshold_m) + " m over " + std::to_string(none.le.size()) + " points: no-EMS " + num(d0) +
                                 ", best " + num(d1);
        if (d0 >= 0.08)
            v.require(d1 <= 0.25 * d0, what + " (<= 1/4 required)");
        else
        {
            v.require(d1 < d0, what + " (strict inequality)");
            v.note("no-EMS dropout below 8%: criterion reduced to strict inequality");
        }
        return v;
    }

    // ---- 6. supervision sensitivity -------------------------------------------

    Verdict sensitivity(const ExperimentConfig &cfg, const OptimizeResult &ae15)
    {
        Verdict v{6};
        ExperimentConfig c30 = cfg;
        c30.anchors.supervision = 0.30;
        const Experiment ex30 = prepare_experiment(c30);
        const auto none30 = score_scenario(ex30.ctx, "no_ems", ex30.ctx.direct, ChartMethod::ae, MetricKind::le, cfg.run.alpha);
        const auto best30 = score_scenario(ex30.ctx, "best", codebook_channels(ex30.ctx, ae15.best.indices), ChartMethod::ae, MetricKind::le, cfg.run.alpha);
        const double gap_none = baseline(ae15, "no_ems").le_mean - none30.le_mean;
        const double gap_best = ae15.best.le_mean - best30.le_mean;
        v.require(gap_none > gap_best, "AE mean LE 15%->30%: no-EMS " + num(baseline(ae15, "no_ems").le_mean) + " -> " + num(none30.le_mean) + " (gap " +
                                           num(gap_none) + "), best " + num(ae15.best.le_mean) + " -> " + num(best30.le_mean) + " (gap " + num(gap_best) + ")");
        return v;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"emschart acceptance run"};
    std::string config_path = EMSCHART_DEFAULT_CONFIG;
    std::string work = (fs::temp_directory_path() / "emschart_acceptance").string();
    bool keep = false;
    app.add_option("--config", config_path, "experiment config")->check(CLI::ExistingFile);
    app.add_option("--work", work, "scratch directory for run artifacts");
    app.add_flag("--keep", keep, "reuse cached objectives from an earlier run in --work");
    CLI11_PARSE(app, argc, argv);

    if (!keep)
        fs::remove_all(work);
    fs::create_directories(work);
    const ExperimentConfig cfg = load_config(config_path);
    bool all = true;
    auto run = [&](auto &&body) {
        const auto t0 = Clock::now();
        Verdict v;
        try
        {
            v = body();
        }
        catch (const std::exception &e)
        {
            v.pass = false;
            v.note(std::string("error: ") + e.what());
        }
        const double s = since(t0);
        all = all && v.pass;
        print(v, s);
        return s;
    };

    {
        const auto t0 = Clock::now();
        Verdict v = numerics();
        const double s = since(t0);
        v.require(s < 60.0, "runtime " + num(s, 3) + " s < 60 s");
        all = all && v.pass;
        print(v, s);
    }

    const Experiment ex = prepare_experiment(cfg);
    run([&] {
        const auto t0 = Clock::now();
        Verdict v = structure(cfg, ex, work);
        v.require(since(t0) < 60.0, "runtime " + num(since(t0), 3) + " s < 60 s");
        return v;
    });

    OptimizeResult tsne, ae;
    double opt_tsne_s = 0.0;
    run([&] {
        Verdict v{3};
        ExperimentConfig c = cfg;
        c.method.name = ChartMethod::tsne;
        auto t0 = Clock::now();
        tsne = cmd_optimize(c, fs::path(work) / "optimize_tsne");
        opt_tsne_s = since(t0);
        directional(v, "tsne", tsne);
        c.method.name = ChartMethod::ae;
        ae = cmd_optimize(c, fs::path(work) / "optimize_ae");
        directional(v, "ae", ae);
        v.note("t-SNE best " + tsne.best.name + "(" + std::to_string(tsne.best.indices.at(0)) + "," + std::to_string(tsne.best.indices.at(1)) + "), AE best (" +
               std::to_string(ae.best.indices.at(0)) + "," + std::to_string(ae.best.indices.at(1)) + ")");
        return v;
    });

    run([&] {
        if (tsne.search.table.empty())
            throw std::runtime_error("t-SNE search did not complete");
        Verdict v = tradeoff(tsne);
        v.note("t-SNE charts, search took " + num(opt_tsne_s, 3) + " s");
        return v;
    });

    run([&] {
        if (tsne.search.table.empty())
            throw std::runtime_error("t-SNE search did not complete");
        return trajectory(cfg, tsne.best.indices, work);
    });

    run([&] {
        if (ae.search.table.empty())
            throw std::runtime_error("AE search did not complete");
        return sensitivity(cfg, ae);
    });

    std::cout << (all ? "acceptance: all criteria pass" : "acceptance: at least one criterion fails") << std::endl;
    return all ? 0 : 1;
}
