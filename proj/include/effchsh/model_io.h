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

#ifndef EFFCHSH_MODEL_IO_H
#define EFFCHSH_MODEL_IO_H

// JSON model files. Angles are written in degrees and converted on load.
//
// Tabulated:
//   {"schema_version": 1, "kind": "tabulated",
//    "lambda_weights": [w0, w1, ...], "lambda_points": [optional, same length],
//    "responses": {"1": {"0": [[p+, p-, p0], ...one per lambda], "45": [...]},
//                  "2": {"22.5": [...], "67.5": [...]}}}
// Parametric:
//   {"schema_version": 1, "kind": "parametric", "family": "threshold-detection",
//    "parameters": {"theta1": 0.6, "theta2": 0.6}, "lambda_grid": 720}
// QM parameters:
//   {"schema_version": 1, "kind": "qm", "eta1": .., "eta2": .., "f1": .., "f2": .., "F": ..}

#include <filesystem>
#include <string>
#include <variant>

#include "json.hpp"

#include "effchsh/lhv.h"
#include "effchsh/qm.h"

namespace effchsh {

inline constexpr int kSchemaVersion = 1;

struct LoadedModel {
    SLHVModel model;
    /// Echo of the defining document, for manifests and reports.
    nlohmann::json description;
    bool projected = false;
};

/// Throws InputError naming the schema violation.
LoadedModel model_from_json(const nlohmann::json &doc);

using LoadedSource = std::variant<LoadedModel, QMModelParams>;

/// Model or QM parameters, by "kind".
LoadedSource source_from_json(const nlohmann::json &doc);

/// Reads and parses a JSON file. Throws InputError on I/O or syntax errors.
nlohmann::json read_json_file(const std::filesystem::path &path);

}  // namespace effchsh

#endif  // EFFCHSH_MODEL_IO_H
