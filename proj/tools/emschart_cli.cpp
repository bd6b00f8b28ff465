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

#include <emschart/emschart.h>

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace
{
    struct Flags
    {
        std::string config;
        std::string out = "out";
        std::optional<std::uint64_t> seed;
        std::optional<std::string> method;
        std::optional<double> supervision;
        std::optional<double> alpha;
        std::optional<unsigned> threads;
        std::optional<std::string> scenario;
    };

    void add_run_flags(CLI::App *cmd, Flags &f, bool with_scenario)
    {
        cmd->add_option("--config", f.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
        cmd->add_option("--seed", f.seed, "Run seed");
        cmd->add_option("--method", f.method, "Chart method")->check(CLI::IsMember({"tsne", "ae"}));
        cmd->add_option("--supervision", f.supervision, "Anchored fraction of the grid, in (0, 1)");
        cmd->add_option("--alpha", f.alpha, "Objective quantile, in (0, 1)");
        cmd->add_option("--threads", f.threads, "Worker threads (0: all cores)");
        if (with_scenario)
            cmd->add_option("--scenario", f.scenario, "no_ems | specular | random | idealized_ris | best | codebook:i,j");
    }

    int fail(emschart_status st)
    {
        std::fprintf(stderr, "emschart: %s: %s\n", emschart_status_name(st), emschart_last_error());
        return static_cast<int>(st);
    }

    // Opens a session with the overrides applied; returns a non-zero exit code on failure.
    int open_session(const Flags &f, emschart_session **s)
    {
        emschart_status st = emschart_session_open(f.config.c_str(), s);
        if (st != EMSCHART_OK)
            return fail(st);
        if (f.seed && (st = emschart_set_seed(*s, *f.seed)) != EMSCHART_OK)
            return fail(st);
        if (f.method && (st = emschart_set_method(*s, f.method->c_str())) != EMSCHART_OK)
            return fail(st);
        if (f.supervision && (st = emschart_set_supervision(*s, *f.supervision)) != EMSCHART_OK)
            return fail(st);
        if (f.alpha && (st = emschart_set_alpha(*s, *f.alpha)) != EMSCHART_OK)
            return fail(st);
        if (f.threads && (st = emschart_set_threads(*s, *f.threads)) != EMSCHART_OK)
            return fail(st);
        if (f.scenario && (st = emschart_set_scenario(*s, f.scenario->c_str())) != EMSCHART_OK)
            return fail(st);
        return 0;
    }

    int run(const Flags &f, emschart_status (*command)(emschart_session *, const char *))
    {
        emschart_session *s = nullptr;
        int rc = open_session(f, &s);
        if (rc == 0)
        {
            const emschart_status st = command(s, f.out.c_str());
            if (st != EMSCHART_OK)
                rc = fail(st);
        }
        emschart_session_close(s);
        return rc;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Channel charting with static electromagnetic skins"};
    app.set_version_flag("--version", std::string(emschart_version()));
    app.require_subcommand(1);

    Flags sim_f, chart_f, opt_f, traj_f, cfg_f;
    add_run_flags(app.add_subcommand("simulate", "Channels, covariances and dissimilarities for one scenario"), sim_f, true);
    add_run_flags(app.add_subcommand("chart", "Embed simulate artifacts and score the chart"), chart_f, false);
    add_run_flags(app.add_subcommand("optimize", "Codebook search plus baseline scenarios"), opt_f, false);
    add_run_flags(app.add_subcommand("evaluate-trajectory", "Localize the configured trajectory"), traj_f, true);
    auto *show = app.add_subcommand("show-config", "Print the effective config");
    add_run_flags(show, cfg_f, false);

    std::vector<std::string> runs;
    std::string report_out = "report";
    auto *report = app.add_subcommand("report", "CDF plots and summary table over run directories");
    report->add_option("--runs", runs, "Run directories")->required()->expected(1, -1);
    report->add_option("--out", report_out, "Output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("simulate"))
        return run(sim_f, emschart_simulate);
    if (app.got_subcommand("chart"))
        return run(chart_f, emschart_chart);
    if (app.got_subcommand("optimize"))
        return run(opt_f, emschart_optimize);
    if (app.got_subcommand("evaluate-trajectory"))
        return run(traj_f, emschart_evaluate_trajectory);
    if (app.got_subcommand("show-config"))
    {
        emschart_session *s = nullptr;
        int rc = open_session(cfg_f, &s);
        const char *text = nullptr;
        if (rc == 0)
        {
            const emschart_status st = emschart_effective_config(s, &text);
            if (st != EMSCHART_OK)
                rc = fail(st);
            else
                std::fputs(text, stdout);
        }
        emschart_session_close(s);
        return rc;
    }
    std::vector<const char *> dirs;
    for (const auto &r : runs)
        dirs.push_back(r.c_str());
    const emschart_status st = emschart_report(dirs.data(), dirs.size(), report_out.c_str());
    return st == EMSCHART_OK ? 0 : fail(st);
}
