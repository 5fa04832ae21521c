#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace acceptance {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    std::string description;
    std::function<Outcome(const std::filesystem::path &work_dir)> run;
};

// Metric, codec, engine and pipeline criteria.
std::vector<Criterion> core_criteria();
// Autoencoder shape / gradient / overfit suite (torch).
Criterion autoencoder_criterion();

}// namespace acceptance
