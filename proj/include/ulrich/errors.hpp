#pragma once

#include <stdexcept>
#include <string>

namespace ulrich {

// Malformed input or violated precondition. CLI exit code 1.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A construction or verification failed on well-formed input. CLI exit code 2.
class MathFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A seeded search used up its attempt budget. CLI exit code 3.
class BudgetExhausted : public std::runtime_error {
  public:
    BudgetExhausted(const std::string& what, int attempts) : std::runtime_error(what), attempts_(attempts) {}
    int attempts() const { return attempts_; }

  private:
    int attempts_;
};

}  // namespace ulrich
