#pragma once

#include <stdexcept>
#include <string>

namespace shapeopt {

struct MeshError : std::runtime_error {
  explicit MeshError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TangledCellError : MeshError {
  explicit TangledCellError(const std::string& msg) : MeshError(msg) {}
};

struct SelfIntersectionError : MeshError {
  explicit SelfIntersectionError(const std::string& msg) : MeshError(msg) {}
};

struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace shapeopt
