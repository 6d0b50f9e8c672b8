#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thinflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (on the cut, inside an obstacle, bad parameter).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A particle reached the obstacle or crossed the cut.
class PenetrationError : public Error {
 public:
  PenetrationError(std::size_t index, double time, const std::string& what)
      : Error("particle " + std::to_string(index) + " at t=" + std::to_string(time) + ": " + what),
        index_(index), time_(time) {}
  std::size_t index() const { return index_; }
  double time() const { return time_; }

 private:
  std::size_t index_;
  double time_;
};

}  // namespace thinflow
