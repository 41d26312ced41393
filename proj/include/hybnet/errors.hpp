#pragma once

#include <stdexcept>
#include <string>

namespace hybnet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed Newick / eNewick / JSON input.
class SyntaxError : public Error {
 public:
  explicit SyntaxError(const std::string& what) : Error("syntax error: " + what) {}
};

class NonBinaryError : public Error {
 public:
  explicit NonBinaryError(const std::string& what) : Error("non-binary node: " + what) {}
};

class DuplicateLabel : public Error {
 public:
  explicit DuplicateLabel(const std::string& label) : Error("duplicate label: " + label) {}
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(const std::string& label) : Error("unknown label: " + label) {}
};

class LabelMismatch : public Error {
 public:
  explicit LabelMismatch(const std::string& what) : Error("label sets differ: " + what) {}
};

class NotAChain : public Error {
 public:
  explicit NotAChain(const std::string& what) : Error("not a chain: " + what) {}
};

class MissingSubstitution : public Error {
 public:
  explicit MissingSubstitution(const std::string& label)
      : Error("no substitution recorded for synthetic label " + label) {}
};

class InvalidCnet : public Error {
 public:
  explicit InvalidCnet(const std::string& what) : Error("invalid CNET: " + what) {}
};

class TooManyReticulations : public Error {
 public:
  explicit TooManyReticulations(int k)
      : Error("display check limited to 25 reticulations, network has " + std::to_string(k)) {}
};

class UnsupportedFormat : public Error {
 public:
  explicit UnsupportedFormat(const std::string& fmt) : Error("unsupported format: " + fmt) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what) : Error("budget exceeded: " + what) {}
};

// Bad user input that is not a parse error (wrong tree count, mismatched taxa, ...).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
};

// A reconstructed structure failed its own validation. Indicates a bug.
class InternalInconsistency : public Error {
 public:
  explicit InternalInconsistency(const std::string& what)
      : Error("internal inconsistency: " + what) {}
};

}  // namespace hybnet
