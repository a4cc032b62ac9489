#pragma once

#include <stdexcept>
#include <string>

namespace curveswarm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (curve family, graph, gains).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Tangent slope requested where the tangent is vertical.
class VerticalTangent : public Error {
 public:
  using Error::Error;
};

/// Offset boundaries are not simple closed curves for the requested distance.
class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

/// Graph offsets or edges do not produce a connected graph.
class Disconnected : public Error {
 public:
  using Error::Error;
};

/// A tracking error reached the barrier radius.
class BarrierBreached : public Error {
 public:
  using Error::Error;
};

/// No tangent-aligned curve parameter lies within the barrier radius.
class NoFeasibleBranch : public Error {
 public:
  using Error::Error;
};

}  // namespace curveswarm
