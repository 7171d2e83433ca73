#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emanet {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FileNotFound : public Error {
 public:
  explicit FileNotFound(const std::string& path)
      : Error("file not found: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A participant CSV row (1-based file line) failed validation.
class SchemaViolation : public Error {
 public:
  SchemaViolation(std::size_t row, std::string column, std::string reason)
      : Error("schema violation at row " + std::to_string(row) +
              (column.empty() ? std::string() : ", column '" + column + "'") +
              ": " + reason),
        row_(row),
        column_(std::move(column)),
        reason_(std::move(reason)) {}

  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t row_;
  std::string column_;
  std::string reason_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class SubsetMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

// A sampling pool is smaller than the draw it has to support.
class InsufficientPool : public Error {
 public:
  InsufficientPool(std::string category, std::size_t have, std::size_t need)
      : Error("insufficient pool '" + category + "': have " +
              std::to_string(have) + " days, need " + std::to_string(need)),
        category_(std::move(category)),
        have_(have),
        need_(need) {}

  const std::string& category() const { return category_; }
  std::size_t have() const { return have_; }
  std::size_t need() const { return need_; }

 private:
  std::string category_;
  std::size_t have_;
  std::size_t need_;
};

}  // namespace emanet
