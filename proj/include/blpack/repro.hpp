#pragma once

#include <string>
#include <vector>

#include "blpack/io.hpp"

namespace blpack {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    Json details;
    double seconds = 0;
};

inline constexpr std::uint64_t kCorpusSeed = 20230101;
inline constexpr std::size_t kCorpusSize = 500;

// Runs acceptance experiment 1..11.
CriterionResult run_criterion(int id);

std::vector<std::string> suite_names();
std::vector<int> suite_criteria(const std::string& suite);  // throws InvalidInput
std::vector<CriterionResult> run_suite(const std::string& suite);
Json to_json(const CriterionResult& r);
Json suite_report(const std::string& suite, const std::vector<CriterionResult>& results);

}  // namespace blpack
