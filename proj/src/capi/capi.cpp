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

#include "commands.hpp"
#include "errors.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <system_error>

struct emschart_session
{
    emschart::ExperimentConfig cfg;
    emschart::Scenario scenario;
    std::string scratch;
};

namespace
{
    thread_local std::string g_last_error;

    template <class Fn>
    emschart_status guarded(Fn &&fn)
    {
        try
        {
            fn();
            g_last_error.clear();
            return EMSCHART_OK;
        }
        catch (const emschart::LockError &e)
        {
            g_last_error = e.what();
            return EMSCHART_ERR_LOCKED;
        }
        catch (const emschart::MissingArtifactError &e)
        {
            g_last_error = e.what();
            return EMSCHART_ERR_MISSING_ARTIFACT;
        }
        catch (const std::invalid_argument &e)
        {
            g_last_error = e.what();
            return EMSCHART_ERR_INVALID_ARGUMENT;
        }
        catch (const std::filesystem::filesystem_error &e)
        {
            g_last_error = e.what();
            return EMSCHART_ERR_IO;
        }
        catch (const std::exception &e)
        {
            g_last_error = e.what();
            return EMSCHART_ERR_RUNTIME;
        }
        catch (...)
        {
            g_last_error = "unknown error";
            return EMSCHART_ERR_RUNTIME;
        }
    }

    emschart_status null_arg(const char *what)
    {
        g_last_error = std::string("null argument: ") + what;
        return EMSCHART_ERR_NULL;
    }

    // Applies one override and revalidates, leaving the session untouched on failure.
    template <class Fn>
    emschart_status update(emschart_session *s, Fn &&fn)
    {
        if (!s)
            return null_arg("session");
        return guarded([&] {
            emschart::ExperimentConfig next = s->cfg;
            emschart::Overrides o;
            fn(o);
            emschart::apply_overrides(next, o);
            s->cfg = std::move(next);
        });
    }
} // namespace

extern "C" {

const char *emschart_version(void) { return "0.1.0"; }

const char *emschart_last_error(void) { return g_last_error.c_str(); }

const char *emschart_status_name(emschart_status s)
{
    switch (s)
    {
    case EMSCHART_OK:
        return "ok";
    case EMSCHART_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case EMSCHART_ERR_MISSING_ARTIFACT:
        return "missing artifact";
    case EMSCHART_ERR_LOCKED:
        return "output directory locked";
    case EMSCHART_ERR_IO:
        return "i/o error";
    case EMSCHART_ERR_RUNTIME:
        return "runtime error";
    case EMSCHART_ERR_NULL:
        return "null argument";
    }
    return "unknown status";
}

emschart_status emschart_session_open(const char *config_path, emschart_session **out)
{
    if (!config_path)
        return null_arg("config_path");
    if (!out)
        return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        auto *s = new emschart_session;
        try
        {
            s->cfg = emschart::load_config(config_path);
        }
        catch (...)
        {
            delete s;
            throw;
        }
        *out = s;
    });
}

void emschart_session_close(emschart_session *s) { delete s; }

emschart_status emschart_set_seed(emschart_session *s, uint64_t seed)
{
    return update(s, [&](emschart::Overrides &o) { o.seed = seed; });
}

emschart_status emschart_set_method(emschart_session *s, const char *method)
{
    if (!method)
        return null_arg("method");
    return update(s, [&](emschart::Overrides &o) { o.method = emschart::method_from_string(method); });
}

emschart_status emschart_set_supervision(emschart_session *s, double fraction)
{
    return update(s, [&](emschart::Overrides &o) { o.supervision = fraction; });
}

emschart_status emschart_set_alpha(emschart_session *s, double alpha)
{
    return update(s, [&](emschart::Overrides &o) { o.alpha = alpha; });
}

emschart_status emschart_set_threads(emschart_session *s, unsigned threads)
{
    return update(s, [&](emschart::Overrides &o) { o.threads = threads; });
}

emschart_status emschart_set_scenario(emschart_session *s, const char *scenario)
{
    if (!s)
        return null_arg("session");
    if (!scenario)
        return null_arg("scenario");
    return guarded([&] { s->scenario = emschart::Scenario::parse(scenario); });
}

emschart_status emschart_effective_config(emschart_session *s, const char **json)
{
    if (!s)
        return null_arg("session");
    if (!json)
        return null_arg("json");
    return guarded([&] {
        s->scratch = emschart::serialize_config(s->cfg);
        *json = s->scratch.c_str();
    });
}

emschart_status emschart_simulate(emschart_session *s, const char *out_dir)
{
    if (!s)
        return null_arg("session");
    if (!out_dir)
        return null_arg("out_dir");
    return guarded([&] { emschart::cmd_simulate(s->cfg, out_dir, s->scenario); });
}

emschart_status emschart_chart(emschart_session *s, const char *out_dir)
{
    if (!s)
        return null_arg("session");
    if (!out_dir)
        return null_arg("out_dir");
    return guarded([&] { emschart::cmd_chart(s->cfg, out_dir); });
}

emschart_status emschart_optimize(emschart_session *s, const char *out_dir)
{
    if (!s)
        return null_arg("session");
    if (!out_dir)
        return null_arg("out_dir");
    return guarded([&] { emschart::cmd_optimize(s->cfg, out_dir); });
}

emschart_status emschart_evaluate_trajectory(emschart_session *s, const char *out_dir)
{
    if (!s)
        return null_arg("session");
    if (!out_dir)
        return null_arg("out_dir");
    return guarded([&] { emschart::cmd_evaluate_trajectory(s->cfg, out_dir, s->scenario); });
}

emschart_status emschart_report(const char *const *run_dirs, size_t count, const char *out_dir)
{
    if (!run_dirs && count > 0)
        return null_arg("run_dirs");
    if (!out_dir)
        return null_arg("out_dir");
    return guarded([&] {
        std::vector<std::filesystem::path> runs;
        for (size_t i = 0; i < count; ++i)
        {
            if (!run_dirs[i])
                throw std::invalid_argument("report: run directory " + std::to_string(i) + " is null");
            runs.emplace_back(run_dirs[i]);
        }
        emschart::cmd_report(runs, out_dir);
    });
}

} // extern "C"
