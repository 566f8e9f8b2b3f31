#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace evasion {

// Base error. `kind` is a short machine-readable category, `detail` the
// human-readable specifics; the CLI prints both as {error, detail}.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, std::string detail)
      : std::runtime_error(kind + ": " + detail),
        kind_(std::move(kind)),
        detail_(std::move(detail)) {}

  const std::string& kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string kind_;
  std::string detail_;
};

// Malformed scenario documents and violated scenario invariants.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

// Failures of the analysis pipeline: tameness violations, resolution
// faults, incompatible algebra diagrams.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

}  // namespace evasion
