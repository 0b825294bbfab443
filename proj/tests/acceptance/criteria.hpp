#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace heins::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  nlohmann::json details;
};

inline constexpr int kCriteria = 8;

/// Runs criterion `id` in 1..kCriteria. Module errors are caught and reported as failures.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_all();

/// Deterministic summary; the measured runtime is left out.
nlohmann::json to_json(const CriterionResult& r);

}  // namespace heins::acceptance
