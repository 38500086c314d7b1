#pragma once

#include <stdexcept>
#include <string>

namespace qgraph {

// Error taxonomy mirrors the CLI exit-code contract:
//   0 success, 1 I/O or syntax, 2 validation, 3 solver, 4 size limits, 64 usage.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SyntaxError : Error {
  explicit SyntaxError(const std::string& msg) : Error(msg) {}
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

struct SolverError : Error {
  explicit SolverError(const std::string& msg) : Error(msg) {}
};

struct SizeError : Error {
  explicit SizeError(const std::string& msg) : Error(msg) {}
};

struct UsageError : Error {
  explicit UsageError(const std::string& msg) : Error(msg) {}
};

// Realification failed: the requested basis vector spans a genuinely complex
// two-dimensional mode. Callers should combine basis vectors instead.
struct DegeneratePairError : SolverError {
  explicit DegeneratePairError(const std::string& msg) : SolverError(msg) {}
};

// Amplitude data does not describe a single-valued function on the graph.
struct InconsistentEigenfunctionError : SolverError {
  explicit InconsistentEigenfunctionError(const std::string& msg) : SolverError(msg) {}
};

}  // namespace qgraph
