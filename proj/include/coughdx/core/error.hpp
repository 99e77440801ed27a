#pragma once

#include <stdexcept>
#include <string>

namespace coughdx {

enum class ErrorCode {
  decode,          // malformed container or stream
  unsupported,     // format recognized but not handled
  empty_audio,
  invalid_signal,  // NaN/Inf where finite data is required
  argument,
  config,
  parse,
  integrity,
  state,
  numeric,
  insufficient_data,
  leakage,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) throw Error(code, msg);
}

}  // namespace coughdx
