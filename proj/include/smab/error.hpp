#pragma once

#include <stdexcept>
#include <string>

namespace smab {

enum class ErrorKind {
  Parse,       // malformed JSON or wrong document shape
  Validation,  // environment invariant violated
  Config,      // bad run configuration or missing table entry
  Contract,    // policy/engine contract violation
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_parse(std::string m) {
  throw Error(ErrorKind::Parse, std::move(m));
}
[[noreturn]] inline void throw_validation(std::string m) {
  throw Error(ErrorKind::Validation, std::move(m));
}
[[noreturn]] inline void throw_config(std::string m) {
  throw Error(ErrorKind::Config, std::move(m));
}
[[noreturn]] inline void throw_contract(std::string m) {
  throw Error(ErrorKind::Contract, std::move(m));
}

}  // namespace smab
