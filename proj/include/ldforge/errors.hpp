#pragma once

#include <stdexcept>
#include <string>

namespace ldforge {

// Base for everything thrown by the library. The CLI maps these to exit
// code 1, except UsageError — that one (together with bad flags and
// missing files given on the command line) exits 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Lexical/grammatical failure in an input text. Carries a position when
// the underlying reader knows one (1-based; 0 means unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0, int col = 0)
      : Error(format(msg, line, col)), line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  static std::string format(const std::string& msg, int line, int col) {
    if (line <= 0) return msg;
    std::string s = msg + " (line " + std::to_string(line);
    if (col > 0) s += ", col " + std::to_string(col);
    return s + ")";
  }
  int line_ = 0;
  int col_ = 0;
};

// Structurally valid text that doesn't conform to the schema
// (unknown element type, bad attribute, missing required field).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// References that don't resolve: dangling edge targets, floating
// vertical lines, duplicate ids.
class WiringError : public Error {
 public:
  using Error::Error;
};

// A graph that violates the LDGraph invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// emit_xml could not realize the graph on a grid such that the parse
// rules recover it exactly.
class LayoutError : public Error {
 public:
  using Error::Error;
};

// Negative selection found no usable candidate.
class DegeneratePairError : public Error {
 public:
  using Error::Error;
};

// Malformed command/config input discovered inside library calls.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace ldforge
