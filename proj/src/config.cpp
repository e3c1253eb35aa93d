// Copyright 2026 The tcmsim Authors
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

#include "tcm/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "tcm/error.hpp"

namespace tcm {

namespace {

using nlohmann::json;

void reject_unknown(const json &object, std::initializer_list<std::string_view> known, const char *where) {
    std::set<std::string_view> allowed(known);
    for (const auto &item : object.items()) {
        if (!allowed.contains(item.key())) {
            throw InvalidArgument(std::string("config: unknown key '") + item.key() + "' in " + where);
        }
    }
}

template <typename T>
void read(const json &object, const char *key, T &out) {
    if (object.contains(key)) {
        out = object.at(key).get<T>();
    }
}

}  // namespace

void RunConfig::validate() const {
    model.validate();
    evolution.validate();
    if (max_atoms < 1) {
        throw InvalidArgument("config: max_atoms must be >= 1");
    }
    if (model.n > max_atoms) {
        throw InvalidArgument("config: " + std::to_string(model.n) + " atoms exceeds max_atoms=" +
                              std::to_string(max_atoms));
    }
    if (!evolution.strategy.feasible_for(model.dimension())) {
        throw InvalidArgument("config: strategy " + evolution.strategy.label() + " cannot split dimension " +
                              std::to_string(model.dimension()));
    }
    if (trajectory_path.empty() || summary_path.empty()) {
        throw InvalidArgument("config: output paths must not be empty");
    }
}

bool operator==(const RunConfig &a, const RunConfig &b) {
    const auto &ea = a.evolution;
    const auto &eb = b.evolution;
    return a.model == b.model && ea.dt == eb.dt && ea.steps == eb.steps && ea.taylor_order == eb.taylor_order &&
           ea.strategy == eb.strategy && ea.renormalize_trace == eb.renormalize_trace && ea.stride == eb.stride &&
           a.max_atoms == b.max_atoms && a.trajectory_path == b.trajectory_path &&
           a.summary_path == b.summary_path && a.seed == b.seed;
}

RunConfig parse_run_config(std::string_view json_text) {
    RunConfig config;
    try {
        const json root = json::parse(json_text);
        if (!root.is_object()) {
            throw InvalidArgument("config: top level must be an object");
        }
        reject_unknown(root, {"model", "evolution", "output", "max_atoms", "seed"}, "config");
        read(root, "max_atoms", config.max_atoms);
        read(root, "seed", config.seed);

        if (root.contains("model")) {
            const auto &m = root.at("model");
            reject_unknown(m, {"atoms", "hbar", "omega", "coupling", "couplings", "photon_factors"}, "model");
            read(m, "atoms", config.model.n);
            read(m, "hbar", config.model.hbar);
            read(m, "omega", config.model.omega);
            if (m.contains("coupling") && m.contains("couplings")) {
                throw InvalidArgument("config: give either model.coupling or model.couplings, not both");
            }
            if (m.contains("couplings")) {
                config.model.couplings = m.at("couplings").get<std::vector<double>>();
            } else {
                const double g = m.contains("coupling") ? m.at("coupling").get<double>()
                                                        : config.model.couplings.front();
                config.model.couplings.assign(static_cast<std::size_t>(std::max(config.model.n, 0)), g);
            }
            if (m.contains("photon_factors")) {
                config.model.photon_factors = photon_factors_from_string(m.at("photon_factors").get<std::string>());
            }
        }
        if (root.contains("evolution")) {
            const auto &e = root.at("evolution");
            reject_unknown(e, {"dt", "steps", "taylor_order", "strategy", "renormalize_trace", "stride"},
                           "evolution");
            read(e, "dt", config.evolution.dt);
            read(e, "steps", config.evolution.steps);
            read(e, "taylor_order", config.evolution.taylor_order);
            read(e, "renormalize_trace", config.evolution.renormalize_trace);
            read(e, "stride", config.evolution.stride);
            if (e.contains("strategy")) {
                config.evolution.strategy = GridStrategy::parse(e.at("strategy").get<std::string>());
            }
        }
        if (root.contains("output")) {
            const auto &o = root.at("output");
            reject_unknown(o, {"trajectory", "summary"}, "output");
            if (o.contains("trajectory")) {
                config.trajectory_path = o.at("trajectory").get<std::string>();
            }
            if (o.contains("summary")) {
                config.summary_path = o.at("summary").get<std::string>();
            }
        }
    } catch (const json::exception &e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    return config;
}

RunConfig load_run_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("config: cannot open " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str());
}

std::string serialize_run_config(const RunConfig &config) {
    nlohmann::ordered_json root;
    root["model"]["atoms"] = config.model.n;
    root["model"]["hbar"] = config.model.hbar;
    root["model"]["omega"] = config.model.omega;
    root["model"]["couplings"] = config.model.couplings;
    root["model"]["photon_factors"] = to_string(config.model.photon_factors);
    root["evolution"]["dt"] = config.evolution.dt;
    root["evolution"]["steps"] = config.evolution.steps;
    root["evolution"]["taylor_order"] = config.evolution.taylor_order;
    root["evolution"]["strategy"] = config.evolution.strategy.label();
    root["evolution"]["renormalize_trace"] = config.evolution.renormalize_trace;
    root["evolution"]["stride"] = config.evolution.stride;
    root["output"]["trajectory"] = config.trajectory_path.string();
    root["output"]["summary"] = config.summary_path.string();
    root["max_atoms"] = config.max_atoms;
    root["seed"] = config.seed;
    return root.dump(2) + "\n";
}

}  // namespace tcm
