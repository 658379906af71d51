#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sleepcell {

/// Invalid or inconsistent configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Missing, malformed or insufficient data. The CLI maps this to exit code 3.
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A log line that could not be decoded.
class ParseError : public DataError
{
public:
  ParseError (std::size_t line, const std::string &what)
    : DataError ("line " + std::to_string (line) + ": " + what), m_line (line)
  {
  }

  std::size_t line () const noexcept { return m_line; }

private:
  std::size_t m_line;
};

} // namespace sleepcell
