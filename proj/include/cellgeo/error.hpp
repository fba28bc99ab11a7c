#pragma once

#include <stdexcept>
#include <string>

namespace cellgeo {

// Every library failure derives from Error; the category decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  enum class Category { Config, Data, Numerical };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Category::Config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(Category::Data, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(Category::Numerical, what) {}
};

// Raised when an operation is asked to handle a model family it does not support.
class UnsupportedFamily : public ConfigError {
 public:
  explicit UnsupportedFamily(const std::string& what) : ConfigError(what) {}
};

// Throws a new error of the same category as `e`, with `prefix` prepended to the message.
[[noreturn]] inline void rethrow_prefixed(const Error& e, const std::string& prefix) {
  const std::string what = prefix + e.what();
  switch (e.category()) {
    case Error::Category::Config: throw ConfigError(what);
    case Error::Category::Data: throw DataError(what);
    case Error::Category::Numerical: break;
  }
  throw NumericalError(what);
}

}  // namespace cellgeo
