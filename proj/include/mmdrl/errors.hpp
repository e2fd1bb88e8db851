#pragma once

#include <stdexcept>
#include <string>

namespace mmdrl {

// Invalid arguments: bad parameters, malformed measures, mismatched shapes.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A TD learner produced particles outside the admissible return range.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// A computed quantity violated a mathematical guarantee (e.g. a clearly
// negative squared MMD under a positive definite kernel). Indicates a bug.
class ConsistencyError : public std::logic_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace mmdrl
