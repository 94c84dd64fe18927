#pragma once

#include <stdexcept>
#include <string>

namespace flowtrap {

/// Failure categories. The C API maps these one-to-one onto ft_status.
enum class ErrorCode {
  InvalidArgument = 1,  // caller passed something malformed (usage error)
  Domain = 2,           // point outside [0,1]^d
  Invariant = 3,        // an algorithm invariant broke; carries an audit dump
  Budget = 4,           // step / iteration / size cap exceeded
  UnknownName = 5,      // catalog or algorithm identifier not recognised
  Io = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace flowtrap
