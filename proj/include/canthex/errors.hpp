#pragma once

#include <stdexcept>
#include <string>

namespace canthex {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Scenario/config file problems: unknown keys, bad types, out-of-range values.
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error("config: " + what) {}
};

// Mixing matrix not invertible (zero cant angle or degenerate geometry).
struct SingularMixing : Error {
  explicit SingularMixing(const std::string& what) : Error("allocation: " + what) {}
};

// Cant sweep found no feasible angle for the requested lateral target.
struct Infeasible : Error {
  explicit Infeasible(const std::string& what) : Error("allocation: " + what) {}
};

// Task specification entries outside {0, 1} or non-orthonormal rotations.
struct InvalidSpec : Error {
  explicit InvalidSpec(const std::string& what) : Error("task_space: " + what) {}
};

// Integrator produced NaN/Inf state; simulation must abort loudly.
struct NonFiniteState : Error {
  explicit NonFiniteState(const std::string& what) : Error("dynamics: " + what) {}
};

// Controller attempted a phase edge that is not in the transition table.
struct IllegalTransition : Error {
  explicit IllegalTransition(const std::string& what) : Error("controller: " + what) {}
};

// Episode detection failures.
struct NoEpisode : Error {
  explicit NoEpisode(const std::string& what) : Error("inspection: " + what) {}
};
struct MultipleEpisodes : Error {
  explicit MultipleEpisodes(const std::string& what) : Error("inspection: " + what) {}
};
struct ZeroApproach : Error {
  explicit ZeroApproach(const std::string& what) : Error("inspection: " + what) {}
};

// Series stiffness pole: tool stiffness too close to the transferred estimate.
struct SeriesPole : Error {
  explicit SeriesPole(const std::string& what) : Error("inspection: " + what) {}
};

// Surface classification needs at least two trials per surface.
struct InsufficientTrials : Error {
  explicit InsufficientTrials(const std::string& what) : Error("inspection: " + what) {}
};

// Plot export asked for a series name that does not exist.
struct UnknownSeries : Error {
  explicit UnknownSeries(const std::string& what) : Error("export: " + what) {}
};

// Log file malformed or missing a required column.
struct LogFormatError : Error {
  explicit LogFormatError(const std::string& what) : Error("log: " + what) {}
};

}  // namespace canthex
