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

#ifndef EMSCHART_EMSCHART_H
#define EMSCHART_EMSCHART_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define EMSCHART_API __declspec(dllexport)
#else
#define EMSCHART_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum emschart_status
{
    EMSCHART_OK = 0,
    EMSCHART_ERR_INVALID_ARGUMENT = 1, /* bad config field, flag value or scene */
    EMSCHART_ERR_MISSING_ARTIFACT = 2, /* an earlier command's output is absent */
    EMSCHART_ERR_LOCKED = 3,           /* another run holds the output directory */
    EMSCHART_ERR_IO = 4,
    EMSCHART_ERR_RUNTIME = 5, /* numerical failure, budget exceeded, ... */
    EMSCHART_ERR_NULL = 6
} emschart_status;

/* A loaded experiment config plus command-line overrides. */
typedef struct emschart_session emschart_session;

EMSCHART_API const char *emschart_version(void);

/* Message of the last failed call on this thread; "" if none. */
EMSCHART_API const char *emschart_last_error(void);

EMSCHART_API const char *emschart_status_name(emschart_status s);

EMSCHART_API emschart_status emschart_session_open(const char *config_path, emschart_session **out);
EMSCHART_API void emschart_session_close(emschart_session *s);

EMSCHART_API emschart_status emschart_set_seed(emschart_session *s, uint64_t seed);
/* "tsne" or "ae" */
EMSCHART_API emschart_status emschart_set_method(emschart_session *s, const char *method);
EMSCHART_API emschart_status emschart_set_supervision(emschart_session *s, double fraction);
EMSCHART_API emschart_status emschart_set_alpha(emschart_session *s, double alpha);
EMSCHART_API emschart_status emschart_set_threads(emschart_session *s, unsigned threads);
/* no_ems, specular, random, idealized_ris, best or codebook:i,j */
EMSCHART_API emschart_status emschart_set_scenario(emschart_session *s, const char *scenario);

/* Canonical JSON of the effective config. The pointer stays valid until the
   next call on the session. */
EMSCHART_API emschart_status emschart_effective_config(emschart_session *s, const char **json);

EMSCHART_API emschart_status emschart_simulate(emschart_session *s, const char *out_dir);
EMSCHART_API emschart_status emschart_chart(emschart_session *s, const char *out_dir);
EMSCHART_API emschart_status emschart_optimize(emschart_session *s, const char *out_dir);
EMSCHART_API emschart_status emschart_evaluate_trajectory(emschart_session *s, const char *out_dir);

EMSCHART_API emschart_status emschart_report(const char *const *run_dirs, size_t count, const char *out_dir);

#ifdef __cplusplus
}
#endif

#endif
