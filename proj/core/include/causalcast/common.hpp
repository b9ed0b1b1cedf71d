#ifndef CAUSALCAST_COMMON_HPP
#define CAUSALCAST_COMMON_HPP

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace causalcast {

// Error taxonomy. The CLI maps these onto exit codes: configuration
// problems -> 2, data problems -> 3, numeric failures -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };
struct IngestError : Error { using Error::Error; };
struct WindowError : ConfigError { using ConfigError::ConfigError; };
struct ShapeError : Error { using Error::Error; };
struct NumericError : Error { using Error::Error; };
struct TrainError : NumericError { using NumericError::NumericError; };
struct ArtifactError : IngestError { using IngestError::IngestError; };
struct MetricError : Error { using Error::Error; };
struct StatError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };

// Dense row-major matrix. Small and predictable; everything in this
// project fits in memory many times over.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }
};

// Shortest round-trip decimal rendering; keeps report files stable
// byte-for-byte across runs.
inline std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const char* what) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw IngestError(std::string("invalid number for ") + what + ": '" + s + "'");
    return v;
}

// FNV-1a, used for config hashes stamped into report headers.
inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

}  // namespace causalcast

#endif
