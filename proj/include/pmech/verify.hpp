#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pmech/clifford.hpp"

namespace pmech::verify {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  std::uint64_t seed = 20240917;
  std::size_t grid_n = 256;       // phase-space grid size for the grid suites
  std::size_t random_trials = 1000;
  clifford::Normalization normalization = clifford::Normalization::Standard;
};

/// groups, coadjoint, poisson, moyal, scaling, cross_backend, representation, fock,
/// dynamics, clifford, dw, reduction.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
std::vector<CheckResult> run_suite(std::string_view name, const SuiteOptions& options = {});
std::vector<CheckResult> run_all(const SuiteOptions& options = {});

nlohmann::json to_json(const CheckResult& r);

}  // namespace pmech::verify
