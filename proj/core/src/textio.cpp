#include "locboost/textio.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>

namespace locboost {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

double parse_double(const std::string& token, const std::string& path, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0' || errno == ERANGE) {
        throw ParseError(path, line, "expected a number, got '" + token + "'");
    }
    return v;
}

long long parse_int(const std::string& token, const std::string& path, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0' || errno == ERANGE) {
        throw ParseError(path, line, "expected an integer, got '" + token + "'");
    }
    return v;
}

std::uint64_t parse_uint(const std::string& token, const std::string& path, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0' || errno == ERANGE ||
        token.find('-') != std::string::npos) {
        throw ParseError(path, line, "expected an unsigned integer, got '" + token + "'");
    }
    return v;
}

} // namespace locboost
