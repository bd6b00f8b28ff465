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

#include "commands.hpp"
#include "errors.hpp"
#include "io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <regex>

using namespace emschart;
namespace fs = std::filesystem;

namespace
{
    ExperimentConfig toy() { return load_config(fs::path(EMSCHART_CONFIG_DIR) / "toy.json"); }

    fs::path fresh_dir(const std::string &name)
    {
        const fs::path d = fs::temp_directory_path() / ("emschart_cmd_" + name);
        fs::remove_all(d);
        return d;
    }

    std::vector<double> polyline_heights(const std::string &svg)
    {
        std::vector<double> ys;
        const std::regex line(R"re(<polyline[^>]*points="([^"]*)")re");
        const auto begin = std::sregex_iterator(svg.begin(), svg.end(), line);
        for (auto it = begin; it != std::sregex_iterator(); ++it)
        {
            std::stringstream ss((*it)[1].str());
            std::string pair;
            while (ss >> pair)
                ys.push_back(std::stod(pair.substr(pair.find(',') + 1)));
            ys.push_back(std::nan(""));
        }
        return ys;
    }
} // namespace

TEST_SUITE("commands")
{
    TEST_CASE("git blob hashes")
    {
        CHECK(io::git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
        CHECK(io::git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    }

    TEST_CASE("scenario names")
    {
        CHECK(Scenario::parse("no_ems").name == "no_ems");
        const Scenario c = Scenario::parse("codebook:3,0");
        CHECK(c.indices == std::vector<int>{3, 0});
        CHECK(c.to_string() == "codebook_3_0");
        CHECK_THROWS_AS(Scenario::parse("mirror"), std::invalid_argument);
        CHECK_THROWS_AS(Scenario::parse("codebook:1,x"), std::invalid_argument);
    }

    TEST_CASE("overrides are validated")
    {
        ExperimentConfig cfg = toy();
        Overrides o;
        o.supervision = 0.3;
        o.method = ChartMethod::ae;
        apply_overrides(cfg, o);
        CHECK(cfg.anchors.supervision == 0.3);
        CHECK(cfg.method.name == ChartMethod::ae);
        Overrides bad;
        bad.alpha = 1.5;
        CHECK_THROWS_AS(apply_overrides(cfg, bad), std::invalid_argument);
    }

    TEST_CASE("simulate on the toy scene")
    {
        const fs::path out = fresh_dir("sim");
        const SimulateResult r = cmd_simulate(toy(), out, Scenario::parse("no_ems"));
        CHECK(r.point_ids.size() == 3);
        CHECK(r.dissimilarity.rows() == 3);
        CHECK(r.dissimilarity.cols() == 3);

        const io::CsvTable snr = io::read_csv(out / "snr.csv");
        REQUIRE(snr.rows.size() == 3);
        CHECK(snr.rows[2][snr.column("snr_db")] == "-inf");
        CHECK(snr.rows[0][snr.column("snr_db")] != "-inf");
        CHECK(io::read_matrix_bin(out / "dissimilarity.bin") == r.dissimilarity);

        // Every artifact is listed with the hash of its current contents.
        const auto manifest = nlohmann::json::parse(io::read_file(out / "manifest.json"));
        CHECK(manifest.at("config_hash").get<std::string>() == config_hash(toy()));
        CHECK(manifest.at("artifacts").size() >= 5);
        for (const auto &a : manifest.at("artifacts"))
            CHECK(a.at("sha1").get<std::string>() == io::git_blob_sha1(io::read_file(out / a.at("path").get<std::string>())));
        fs::remove_all(out);
    }

    TEST_CASE("reruns are byte-identical")
    {
        const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
        for (const auto &dir : {a, b})
        {
            cmd_simulate(toy(), dir);
            cmd_chart(toy(), dir);
        }
        for (const char *f : {"snr.csv", "covariances.bin", "dissimilarity.bin", "dissimilarity.csv", "embedding_tsne.csv", "metrics_tsne.csv",
                              "summary_tsne.json", "kl_trace_tsne.csv"})
            CHECK_MESSAGE(io::read_file(a / f) == io::read_file(b / f), f);
        fs::remove_all(a);
        fs::remove_all(b);
    }

    TEST_CASE("chart without simulate artifacts names the missing file")
    {
        const fs::path out = fresh_dir("missing");
        fs::create_directories(out);
        CHECK_THROWS_WITH_AS(cmd_chart(toy(), out), doctest::Contains("covariances.bin"), MissingArtifactError);
        fs::remove_all(out);
    }

    TEST_CASE("t-SNE and AE charts share the metric schema; all-anchored LE is zero")
    {
        const fs::path out = fresh_dir("methods");
        ExperimentConfig cfg = toy();
        cmd_simulate(cfg, out);
        const ChartResult t = cmd_chart(cfg, out);
        cfg.method.name = ChartMethod::ae;
        cfg.method.settings.topology.hidden_widths = {16, 4};
        cfg.method.settings.topology.hidden_activations = {Activation::relu, Activation::tanh};
        cfg.method.settings.ae.epochs = 20;
        const ChartResult a = cmd_chart(cfg, out);
        CHECK(t.anchor_indices.size() == 3);
        for (double e : t.report.le)
            CHECK(e == 0.0);
        CHECK(fs::exists(out / "embedding_tsne.csv"));
        CHECK(fs::exists(out / "embedding_ae.csv"));
        CHECK(fs::exists(out / "model_ae.bin"));
        CHECK(io::read_file(out / "embedding_tsne.csv") != io::read_file(out / "embedding_ae.csv"));
        CHECK(io::read_csv(out / "metrics_tsne.csv").header == io::read_csv(out / "metrics_ae.csv").header);
        const auto s = nlohmann::json::parse(io::read_file(out / "summary_ae.json"));
        CHECK(s.at("method") == "ae");
        CHECK(s.at("metrics").at("le_m").contains("q90"));
        (void)a;
        fs::remove_all(out);
    }

    TEST_CASE("concurrent use of an output directory is rejected")
    {
        const fs::path out = fresh_dir("lock");
        fs::create_directories(out);
        {
            io::DirectoryLock held(out);
            CHECK_THROWS_AS(cmd_simulate(toy(), out), LockError);
        }
        CHECK_NOTHROW(cmd_simulate(toy(), out));
        CHECK_FALSE(fs::exists(out / ".emschart.lock"));
        fs::remove_all(out);
    }

    TEST_CASE("optimize with one codeword picks specular")
    {
        const fs::path out = fresh_dir("opt");
        const OptimizeResult r = cmd_optimize(toy(), out);
        CHECK(r.search.table.size() == 1);
        CHECK(r.baselines.size() == 4);
        CHECK(io::read_csv(out / "objective_table.csv").rows.size() == 1);
        CHECK(io::read_csv(out / "baselines.csv").rows.size() == 4);
        const auto best = nlohmann::json::parse(io::read_file(out / "best_config.json"));
        CHECK(best.at("indices") == nlohmann::json::array({0}));
        fs::remove_all(out);
    }

    TEST_CASE("trajectory dropout at threshold 0 is one")
    {
        const fs::path out = fresh_dir("traj");
        ExperimentConfig cfg = toy();
        cfg.trajectory.threshold_m = 0.0;
        const TrajectoryResult r = cmd_evaluate_trajectory(cfg, out, Scenario::parse("no_ems"));
        CHECK(r.truth.rows() == 14);
        CHECK(r.estimate.rows() == 14);
        CHECK(r.dropout.fraction == 1.0);
        CHECK(fs::exists(out / "trajectory_no_ems_tsne.svg"));
        cfg.trajectory.waypoints = {Vec2(25, 2), Vec2(90, 2)};
        CHECK_THROWS_AS(cmd_evaluate_trajectory(cfg, out, Scenario::parse("no_ems")), std::invalid_argument);
        fs::remove_all(out);
    }

    TEST_CASE("report: table rows, monotone CDFs, duplicate runs")
    {
        const fs::path a = fresh_dir("rep_a"), b = fresh_dir("rep_b"), out = fresh_dir("rep_out");
        ExperimentConfig cfg = toy();
        cmd_simulate(cfg, a, Scenario::parse("no_ems"));
        cmd_chart(cfg, a);
        cmd_simulate(cfg, b, Scenario::parse("specular"));
        cmd_chart(cfg, b);

        cmd_report({a}, out);
        CHECK(io::read_csv(out / "table.csv").rows.size() == 3);

        cmd_report({a, b}, out);
        const io::CsvTable t = io::read_csv(out / "table.csv");
        CHECK(t.header == io::CsvRow{"metric", "method", "scenario", "supervision", "mean", "q90"});
        CHECK(t.rows.size() == 3 * 1 * 2);
        for (const char *f : {"cdf_le.svg", "cdf_tw.svg", "cdf_ct.svg"})
        {
            const auto ys = polyline_heights(io::read_file(out / f));
            int series = 0;
            for (std::size_t i = 0; i < ys.size(); ++i)
            {
                if (std::isnan(ys[i]))
                {
                    ++series;
                    CHECK(ys[i - 1] == doctest::Approx(50.0)); // top edge: CDF 1
                    continue;
                }
                if (i > 0 && !std::isnan(ys[i - 1]))
                    CHECK(ys[i] <= ys[i - 1]); // screen y falls as the CDF rises
                else
                    CHECK(ys[i] == doctest::Approx(370.0)); // CDF 0
            }
            CHECK(series == 2);
        }

        CHECK_THROWS_WITH_AS(cmd_report({a, a}, out), doctest::Contains("share"), std::invalid_argument);
        CHECK_THROWS_AS(cmd_report({fresh_dir("rep_none")}, out), MissingArtifactError);
        for (const auto &d : {a, b, out})
            fs::remove_all(d);
    }
}
