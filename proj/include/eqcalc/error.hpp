#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eqc {

enum class ErrorKind {
  SyntaxError,
  UnknownSymbol,
  ArityMismatch,
  EmptySuccedent,
  SignatureError,
  UnknownRuleName,
  PremiseCountMismatch,
  SourceDoesNotCheck,
  SuccedentNotEquality,
  ShapeMismatch,
  PreconditionViolated,
  BoundsEmpty,
  InternalError,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorKind kind() const { return kind_; }
  // Message without the kind prefix and offset suffix.
  const std::string& message() const { return message_; }
  // Byte offset into the parsed text, for parse errors.
  std::optional<std::size_t> offset() const { return offset_; }

 private:
  ErrorKind kind_;
  std::string message_;
  std::optional<std::size_t> offset_;
};

}  // namespace eqc
