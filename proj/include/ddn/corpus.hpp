#pragma once

#include <string>
#include <vector>

#include "ddn/evaluate.hpp"
#include "ddn/parser.hpp"

namespace ddn {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct FixtureResult {
  std::string fixture;
  std::vector<CheckResult> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Built-in problems, each mirroring a worked example: the potential modified
// Volterra lattice, the partitioned equation u' = u2/u, the semi-discrete
// NLS system, and the linear three-field gauge system.
std::vector<std::string> corpus_fixture_names();
const std::string& corpus_fixture_source(const std::string& name);
Problem corpus_problem(const std::string& name);

FixtureResult run_corpus_fixture(const std::string& name, const SampleConfig& cfg);

// All fixtures; parallel runs fixtures on separate threads (every engine
// operation is pure).
std::vector<FixtureResult> run_corpus(const SampleConfig& cfg, bool parallel = false);

}  // namespace ddn
