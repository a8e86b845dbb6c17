#pragma once

#include <stdexcept>
#include <string>

namespace netclust {

// Exit codes used by the command-line tool. Library errors carry the code
// so the CLI can map an exception straight to a process status.
enum class ExitCode : int { ok = 0, input = 2, precondition = 3, numeric = 4 };

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Malformed files, bad configs, invalid arguments.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ExitCode::input, what) {}
};

// Inputs that are well formed but violate an operation's precondition.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ExitCode::precondition, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ExitCode::numeric, what) {}
};

}  // namespace netclust
