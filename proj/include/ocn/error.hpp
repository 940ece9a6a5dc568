#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ocn {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text: formulas, network files, state files.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownAtomError : public Error {
 public:
  explicit UnknownAtomError(const std::string& atom)
      : Error("unknown atom '" + atom + "'"), atom_(atom) {}

  const std::string& atom() const noexcept { return atom_; }

 private:
  std::string atom_;
};

// A sentence used against the wrong vocabulary (L vs O, or atoms outside the declared set).
class VocabularyError : public Error {
 public:
  using Error::Error;
};

class EnumerationLimitError : public Error {
 public:
  using Error::Error;
};

// Observing a sentence whose objection is tautologous.
class RejectedEvidenceError : public Error {
 public:
  using Error::Error;
};

// Product rule applied with a tautologous condition objection.
class RejectedConditionError : public Error {
 public:
  using Error::Error;
};

// Product rule applied to a conditional objection that is neither tautologous
// nor inconsistent with the condition's objection.
class ContradictoryAssessmentError : public Error {
 public:
  using Error::Error;
};

// World table or network quantification that violates a consistency condition.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class NetworkError : public Error {
 public:
  using Error::Error;
};

class InvalidQuantificationError : public Error {
 public:
  using Error::Error;
};

class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ocn
