#pragma once

#include "config.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace lab {

struct Artifact {
    std::string file;  // relative to the output directory
    std::string body;
};

struct Outcome {
    std::vector<Artifact> csv;
    nlohmann::ordered_json seeds = nlohmann::ordered_json::object();
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

struct Experiment {
    std::string name;
    std::string help;
    Outcome (*run)(const Section&);
};

const std::vector<Experiment>& experiments();

// Every section the config file may contain: one per experiment plus [output].
Schema full_schema();

}  // namespace lab
