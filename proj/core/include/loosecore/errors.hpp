#pragma once

#include <stdexcept>
#include <string>

namespace loosecore {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

// d / C(n-1, r-1) exceeds 1, so no valid edge probability exists.
class ProbabilityOverflow : public Error {
 public:
  using Error::Error;
};

class VertexOutOfRange : public Error {
 public:
  using Error::Error;
};

class EdgeOutOfRange : public Error {
 public:
  using Error::Error;
};

// Minimum connection number over an empty edge set is undefined.
class EmptyEdgeSet : public Error {
 public:
  using Error::Error;
};

class NodeOutOfRange : public Error {
 public:
  using Error::Error;
};

// A capped BFS ball cannot be fed to the neighborhood pruning algorithm.
class TruncatedNeighborhood : public Error {
 public:
  using Error::Error;
};

class MismatchedInput : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class SupportMismatch : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace loosecore
