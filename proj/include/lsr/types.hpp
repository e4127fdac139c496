#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lsr {

// Coordinates are stored as fixed 3-vectors; 2d data leaves z at 0.
struct Vec {
    double data[3];

    double& operator[](int i) { return data[i]; }
    double operator[](int i) const { return data[i]; }
    bool operator==(const Vec& o) const {
        return data[0] == o.data[0] && data[1] == o.data[1] && data[2] == o.data[2];
    }
};

using Index3 = std::array<int, 3>;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class OutOfDomainError : public Error {
  public:
    using Error::Error;
};

class NumericalError : public Error {
  public:
    using Error::Error;
};

class NoInterfaceError : public Error {
  public:
    using Error::Error;
};

inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double sqr(double x) { return x * x; }

}  // namespace lsr
