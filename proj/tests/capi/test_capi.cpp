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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <emschart/emschart.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace
{
    const std::string kToy = std::string(EMSCHART_CONFIG_DIR) + "/toy.json";

    struct Session
    {
        emschart_session *s = nullptr;
        Session() { REQUIRE(emschart_session_open(kToy.c_str(), &s) == EMSCHART_OK); }
        ~Session() { emschart_session_close(s); }
    };

    fs::path fresh_dir(const std::string &name)
    {
        const fs::path d = fs::temp_directory_path() / ("emschart_capi_" + name);
        fs::remove_all(d);
        return d;
    }
} // namespace

TEST_CASE("library metadata")
{
    CHECK(std::strlen(emschart_version()) > 0);
    CHECK(std::string(emschart_status_name(EMSCHART_ERR_LOCKED)) == "output directory locked");
    CHECK(std::string(emschart_status_name(static_cast<emschart_status>(99))) == "unknown status");
}

TEST_CASE("null arguments")
{
    emschart_session *s = nullptr;
    CHECK(emschart_session_open(nullptr, &s) == EMSCHART_ERR_NULL);
    CHECK(emschart_session_open(kToy.c_str(), nullptr) == EMSCHART_ERR_NULL);
    CHECK(emschart_set_seed(nullptr, 1) == EMSCHART_ERR_NULL);
    CHECK(emschart_simulate(nullptr, "x") == EMSCHART_ERR_NULL);
    CHECK(emschart_report(nullptr, 1, "x") == EMSCHART_ERR_NULL);
    CHECK(std::strlen(emschart_last_error()) > 0);
    emschart_session_close(nullptr);
}

TEST_CASE("invalid arguments leave the session usable")
{
    emschart_session *s = nullptr;
    CHECK(emschart_session_open("/nonexistent/config.json", &s) == EMSCHART_ERR_INVALID_ARGUMENT);
    CHECK(s == nullptr);

    Session ok;
    CHECK(emschart_set_method(ok.s, "pca") == EMSCHART_ERR_INVALID_ARGUMENT);
    CHECK(std::string(emschart_last_error()).find("pca") != std::string::npos);
    CHECK(emschart_set_supervision(ok.s, 1.5) == EMSCHART_ERR_INVALID_ARGUMENT);
    CHECK(emschart_set_scenario(ok.s, "mirror") == EMSCHART_ERR_INVALID_ARGUMENT);
    CHECK(emschart_set_alpha(ok.s, 0.5) == EMSCHART_OK);

    const char *json = nullptr;
    REQUIRE(emschart_effective_config(ok.s, &json) == EMSCHART_OK);
    const std::string text(json);
    CHECK(text.find("\"supervision\": 0.9") != std::string::npos);
    CHECK(text.find("\"alpha\": 0.5") != std::string::npos);
}

TEST_CASE("commands and their error codes")
{
    Session ok;
    const fs::path out = fresh_dir("run");
    CHECK(emschart_chart(ok.s, out.c_str()) == EMSCHART_ERR_MISSING_ARTIFACT);
    CHECK(std::string(emschart_last_error()).find("covariances.bin") != std::string::npos);

    REQUIRE(emschart_set_scenario(ok.s, "no_ems") == EMSCHART_OK);
    CHECK(emschart_simulate(ok.s, out.c_str()) == EMSCHART_OK);
    CHECK(emschart_chart(ok.s, out.c_str()) == EMSCHART_OK);
    CHECK(fs::exists(out / "summary_tsne.json"));

    std::ofstream(out / ".emschart.lock") << "held\n";
    CHECK(emschart_simulate(ok.s, out.c_str()) == EMSCHART_ERR_LOCKED);
    fs::remove(out / ".emschart.lock");

    const fs::path report = fresh_dir("report");
    const std::string run = out.string();
    const char *runs[] = {run.c_str()};
    CHECK(emschart_report(runs, 1, report.c_str()) == EMSCHART_OK);
    CHECK(fs::exists(report / "table.csv"));
    fs::remove_all(out);
    fs::remove_all(report);
}
