#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace locboost {

// Raised by the file readers; carries the offending path and line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& message)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + message),
          path_(path), line_(line) {}

    const std::string& path() const { return path_; }
    std::size_t line() const { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

// Shortest decimal that round-trips a double bit-exactly (17 significant
// digits), locale-independent.
std::string format_double(double value);

// strtod/strtoll wrappers that consume the whole token or fail.
double parse_double(const std::string& token, const std::string& path, std::size_t line);
long long parse_int(const std::string& token, const std::string& path, std::size_t line);
std::uint64_t parse_uint(const std::string& token, const std::string& path, std::size_t line);

} // namespace locboost
