#pragma once

#include <stdexcept>
#include <string>

namespace htlrc {

enum class ErrorKind {
  validation,     // bad parameters, malformed spec files, shape mismatches
  io,             // filesystem failures, missing or truncated substripe files
  verification,   // MDS/identity checks that did not hold
  singular,       // a linear system that should be solvable was not
  missing_read,   // a repair provider did not serve a planned read
  inconsistent,   // redundant repair equations disagree (corrupted input)
  exhausted,      // randomized construction gave up after its retry cap
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::validation, what);
}

}  // namespace htlrc
