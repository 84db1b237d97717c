#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qgraph::corpus {

struct Outcome {
    bool passed = false;
    std::string detail;
};

struct Case {
    std::string name;
    std::function<Outcome()> run;
};

const std::vector<Case>& builtin();

struct Result {
    std::string name;
    Outcome outcome;
    double wall_ms = 0.0;
};

// Runs the named cases (all when names is empty) whose name contains filter.
// Cases run concurrently; results keep corpus order.
std::vector<Result> run(const std::vector<std::string>& names, const std::string& filter);

// {"kind": "corpus", "cases": [name, ...]}; throws ParseError on malformed input
// or unknown case names.
std::vector<std::string> names_from_json(const nlohmann::json& j);

} // namespace qgraph::corpus
