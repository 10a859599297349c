#pragma once

#include <stdexcept>
#include <string>

namespace negen {

/// Normalization of a superposition collapsed (states cancel).
class DegenerateState : public std::domain_error {
 public:
  explicit DegenerateState(const std::string& what) : std::domain_error(what) {}
};

/// Fock-space cutoff too small for the requested state.
class TruncationError : public std::runtime_error {
 public:
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

class CutoffMismatch : public std::invalid_argument {
 public:
  explicit CutoffMismatch(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace negen
