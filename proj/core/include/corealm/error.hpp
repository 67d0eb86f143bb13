#pragma once

#include <stdexcept>
#include <string>

namespace corealm {

/// Location of a construct in an input text. Lines and columns are 1-based.
struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;
  int end_line = 0;
  int end_column = 0;

  bool valid() const { return line > 0; }
  std::string str() const;

  // Spans carry diagnostics only; they never take part in AST identity.
  friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

/// Base class of every error raised by the toolchain. The code is a short
/// stable identifier ("SyntaxError", "UnknownModule", ...) used by the CLI's
/// machine-readable output.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, SourceSpan span = {});

  const std::string& code() const noexcept { return code_; }
  const SourceSpan& span() const noexcept { return span_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string code_;
  std::string detail_;
  SourceSpan span_;
};

}  // namespace corealm
