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

#include "effchsh/model_io.h"

#include <fstream>
#include <sstream>

#include "effchsh/families.h"

namespace effchsh {

namespace {

void check_header(const nlohmann::json &doc) {
    if (!doc.is_object()) {
        throw InputError("model file: top level must be a JSON object");
    }
    if (doc.contains("schema_version")) {
        if (!doc.at("schema_version").is_number_integer() || doc.at("schema_version").get<int>() != kSchemaVersion) {
            throw InputError("model file: unsupported schema_version (expected 1)");
        }
    }
    if (!doc.contains("kind") || !doc.at("kind").is_string()) {
        throw InputError("model file: missing string field 'kind' (tabulated, parametric or qm)");
    }
}

std::vector<double> number_array(const nlohmann::json &j, const std::string &what) {
    if (!j.is_array()) {
        throw InputError("model file: '" + what + "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto &v : j) {
        if (!v.is_number()) {
            throw InputError("model file: '" + what + "' must be an array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

ResponseFunction party_table(const nlohmann::json &tables, const std::string &party, std::size_t n_lambda) {
    if (!tables.is_object() || tables.empty()) {
        throw InputError("model file: responses[\"" + party + "\"] must be a non-empty object keyed by angle");
    }
    std::vector<std::pair<Angle, std::vector<ProbTriple>>> rows;
    for (const auto &[key, value] : tables.items()) {
        double deg = 0.0;
        try {
            std::size_t used = 0;
            deg = std::stod(key, &used);
            if (used != key.size()) {
                throw std::invalid_argument(key);
            }
        } catch (const std::exception &) {
            throw InputError("model file: angle key '" + key + "' for party " + party + " is not a number");
        }
        if (!value.is_array() || value.size() != n_lambda) {
            throw InputError("model file: party " + party + ", angle " + key + ": expected " +
                             std::to_string(n_lambda) + " triples (one per lambda)");
        }
        std::vector<ProbTriple> row;
        for (const auto &t : value) {
            std::vector<double> v = number_array(t, "responses." + party + "." + key);
            if (v.size() != 3) {
                throw InputError("model file: party " + party + ", angle " + key + ": triples are [p+, p-, p0]");
            }
            row.push_back({v[0], v[1], v[2]});
        }
        rows.emplace_back(Angle::degrees(deg), std::move(row));
    }
    try {
        return ResponseFunction::tabulated(std::move(rows));
    } catch (const ValidationError &e) {
        throw InputError(std::string("model file: ") + e.what());
    }
}

}  // namespace

LoadedModel model_from_json(const nlohmann::json &doc) {
    check_header(doc);
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "tabulated") {
        if (!doc.contains("lambda_weights")) {
            throw InputError("model file: tabulated model needs 'lambda_weights'");
        }
        std::vector<double> weights = number_array(doc.at("lambda_weights"), "lambda_weights");
        std::vector<double> points;
        if (doc.contains("lambda_points")) {
            points = number_array(doc.at("lambda_points"), "lambda_points");
        }
        if (!doc.contains("responses") || !doc.at("responses").is_object()) {
            throw InputError("model file: tabulated model needs a 'responses' object");
        }
        const auto &responses = doc.at("responses");
        for (const char *party : {"1", "2"}) {
            if (!responses.contains(party)) {
                throw InputError(std::string("model file: responses lacks party \"") + party + "\"");
            }
        }
        try {
            HiddenVariableSpace space(std::move(points), std::move(weights));
            std::size_t n = space.size();
            SLHVModel model(std::move(space), party_table(responses.at("1"), "1", n),
                            party_table(responses.at("2"), "2", n));
            // Validate every tabulated entry now rather than at first use.
            for (Party p : {Party::One, Party::Two}) {
                for (Angle angle : model.responder(p).tabulated_angles()) {
                    for (std::size_t l = 0; l < n; ++l) {
                        response(model, p, angle, l);
                    }
                }
            }
            return LoadedModel{std::move(model), doc, false};
        } catch (const ValidationError &e) {
            throw InputError(std::string("model file: ") + e.what());
        }
    }
    if (kind == "parametric") {
        if (!doc.contains("family") || !doc.at("family").is_string()) {
            throw InputError("model file: parametric model needs a string 'family'");
        }
        AdversaryFamily family = family_by_name(doc.at("family").get<std::string>());
        if (!doc.contains("parameters")) {
            throw InputError("model file: parametric model needs 'parameters'");
        }
        std::vector<double> params = family.parameters_from_json(doc.at("parameters"));
        std::size_t grid = kDefaultModelGrid;
        if (doc.contains("lambda_grid")) {
            const auto &g = doc.at("lambda_grid");
            if (!g.is_number_integer() || g.get<std::int64_t>() <= 0) {
                throw InputError("model file: 'lambda_grid' must be a positive integer");
            }
            grid = doc.at("lambda_grid").get<std::size_t>();
        }
        try {
            Instantiation inst = family.instantiate(params, grid);
            return LoadedModel{std::move(inst.model), doc, inst.projected};
        } catch (const DomainError &e) {
            throw InputError(std::string("model file: ") + e.what());
        }
    }
    if (kind == "qm") {
        throw InputError("model file: kind 'qm' describes QM parameters, not an SLHV model");
    }
    throw InputError("model file: unknown kind '" + kind + "'");
}

LoadedSource source_from_json(const nlohmann::json &doc) {
    check_header(doc);
    if (doc.at("kind").get<std::string>() == "qm") {
        try {
            return qm_params_from_json(doc);
        } catch (const DomainError &e) {
            throw InputError(std::string("QM parameters: ") + e.what());
        }
    }
    return model_from_json(doc);
}

nlohmann::json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error &e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

}  // namespace effchsh
