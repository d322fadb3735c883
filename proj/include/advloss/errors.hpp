#pragma once

#include <stdexcept>
#include <string>

namespace advloss {

// Bad user-supplied input (files, schemas, flag values). The CLI maps this
// to exit code 2; everything else lands on exit code 1.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A named mathematical precondition failed. Carries the inequality text and
// both sides so callers can report exactly which condition broke.
class condition_error : public std::runtime_error {
 public:
  condition_error(std::string condition, double lhs, double rhs)
      : std::runtime_error("condition failed: " + condition +
                           "  (lhs=" + std::to_string(lhs) +
                           ", rhs=" + std::to_string(rhs) + ")"),
        condition_(std::move(condition)),
        lhs_(lhs),
        rhs_(rhs) {}

  const std::string& condition() const { return condition_; }
  double lhs() const { return lhs_; }
  double rhs() const { return rhs_; }

 private:
  std::string condition_;
  double lhs_;
  double rhs_;
};

}  // namespace advloss
