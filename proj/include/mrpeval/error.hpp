#pragma once

#include <stdexcept>
#include <string>

namespace mrpeval {

/// Broad failure class; the CLI maps these onto exit codes.
enum class ErrorKind { validation, io };

/// Library error carrying a stable, machine-parsable identifier such as
/// "mrp.row_not_stochastic" alongside the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string id, const std::string& message, ErrorKind kind = ErrorKind::validation)
      : std::runtime_error(message), id_(std::move(id)), kind_(kind) {}

  const std::string& id() const noexcept { return id_; }
  ErrorKind kind() const noexcept { return kind_; }

 private:
  std::string id_;
  ErrorKind kind_;
};

inline void require(bool condition, const char* id, const std::string& message) {
  if (!condition) throw Error(id, message);
}

}  // namespace mrpeval
