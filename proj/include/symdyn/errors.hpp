#pragma once

#include <stdexcept>
#include <string>

namespace symdyn {

// Precondition violated by the caller.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured resource cap (pattern count, search nodes, window size) was hit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A search found no solution where one was requested.
class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A hypothesis the caller promised (boundary agreement, gap, separation) does not hold.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A proved property failed on output; this is an internal bug trap.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Parameter budget violated (epsilon, radius, shape conditions).
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading a stored set outside its extent.
class ExtentError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace symdyn
