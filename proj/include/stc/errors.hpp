#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stc {

/// Input or contract violation the caller can fix (bad document, unknown id,
/// precondition failure). The CLI maps these to exit status 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CycleError : public ValidationError {
 public:
  explicit CycleError(std::vector<std::string> cycle);
  const std::vector<std::string>& cycle() const noexcept { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

class DuplicateNameError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnknownNameError : public ValidationError {
 public:
  UnknownNameError(const std::string& what, std::vector<std::string> names);
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
};

/// A code was computed under an older ontology generation and must be
/// re-fetched before it can be compared.
class StaleCodeError : public ValidationError {
 public:
  StaleCodeError(unsigned long long held, unsigned long long current);
  unsigned long long held() const noexcept { return held_; }
  unsigned long long current() const noexcept { return current_; }

 private:
  unsigned long long held_;
  unsigned long long current_;
};

}  // namespace stc
