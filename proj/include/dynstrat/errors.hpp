#pragma once

#include <stdexcept>
#include <string>

namespace dynstrat {

enum class ErrorKind {
  validation,            // parameter outside its admissible range
  degenerate,            // zero-variance signal, non-unique solution, ...
  sample_size,           // too few observations for the statistic
  domain,                // argument outside a formula's domain
  singular,              // rank-deficient design
  regularization_needed, // singular covariance block in CCA
  parse,                 // malformed input file
  numeric,               // quadrature / iteration failure
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(long line, const std::string& what)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace dynstrat
