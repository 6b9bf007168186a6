/* Copyright 2026 RACL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the RACL pipeline. All entry points return a status code;
 * on failure racl_last_error() describes the most recent error on the
 * calling thread. Handles are opaque and must be released with their
 * destroy function.
 */

#ifndef RACL_CAPI_H
#define RACL_CAPI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum racl_status {
  RACL_OK = 0,
  RACL_RUNTIME_ERROR = 1,
  RACL_CONFIG_ERROR = 2,
  RACL_VERIFY_FAILURE = 3,
} racl_status;

typedef struct racl_config racl_config;

/* Defaults, overlaid with the JSON file when json_path is non-NULL and
 * non-empty, then the RACL_SEED environment variable. NULL on failure. */
racl_config* racl_config_create(const char* json_path);

/* Merges a JSON fragment over the current values. Unknown keys fail. */
racl_status racl_config_apply_json(racl_config* cfg, const char* json_text);

racl_status racl_config_set_seed(racl_config* cfg, uint64_t seed);

/* Canonical JSON of the resolved config; caller frees with racl_string_free. */
char* racl_config_dump(const racl_config* cfg);

uint64_t racl_config_hash(const racl_config* cfg);

void racl_config_destroy(racl_config* cfg);

void racl_string_free(char* s);

/* Message of the last failure on this thread; empty string if none. */
const char* racl_last_error(void);

racl_status racl_cmd_synth(const racl_config* cfg, const char* out_dir, int workers,
                           int overwrite);

racl_status racl_cmd_reconstruct(const racl_config* cfg, const char* manifest_path,
                                 const char* out_dir, int workers, int overwrite);

racl_status racl_cmd_train(const racl_config* cfg, const char* train_manifest,
                           const char* dev_manifest, const char* out_dir, int workers,
                           int overwrite);

/* use_subsets groups the report by the manifest's subset column. */
racl_status racl_cmd_eval(const racl_config* cfg, const char* manifest_path,
                          const char* checkpoint_path, const char* out_dir, int workers,
                          int overwrite, int use_subsets);

/* Prints one line per check to stdout. inject_gradient_bug perturbs one
 * analytic gradient so the suite must report a failure (self-test hook). */
racl_status racl_cmd_verify(const racl_config* cfg, int inject_gradient_bug);

#ifdef __cplusplus
}
#endif

#endif /* RACL_CAPI_H */
