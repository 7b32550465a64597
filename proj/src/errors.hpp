#pragma once
#include <stdexcept>
#include <string>

namespace ik6rp {

enum class ErrorCode {
  Io = 1,
  Schema = 2,
  Pose = 3,
  Degenerate = 4,
  Singular = 5,
  Unsolvable = 6,
  Internal = 7,
  Invalid = 8,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

}  // namespace ik6rp
