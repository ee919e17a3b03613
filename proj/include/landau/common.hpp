#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace landau {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

enum class ErrorKind {
    domain,
    argument,
    numerical,
    instability,
    horizon,
    divergence,
    convergence,
    validation,
    unsupported,
    io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};
struct ArgumentError : Error {
    explicit ArgumentError(const std::string& w) : Error(ErrorKind::argument, w) {}
};
struct NumericalError : Error {
    explicit NumericalError(const std::string& w) : Error(ErrorKind::numerical, w) {}
};
struct InstabilityError : Error {
    explicit InstabilityError(const std::string& w) : Error(ErrorKind::instability, w) {}
};
struct HorizonError : Error {
    explicit HorizonError(const std::string& w) : Error(ErrorKind::horizon, w) {}
};
struct UnsupportedError : Error {
    explicit UnsupportedError(const std::string& w) : Error(ErrorKind::unsupported, w) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& w) : Error(ErrorKind::validation, w) {}
};
struct IoError : Error {
    explicit IoError(const std::string& w) : Error(ErrorKind::io, w) {}
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& w, double last_good_time)
        : Error(ErrorKind::divergence, w), last_good_time_(last_good_time) {}
    double last_good_time() const noexcept { return last_good_time_; }

private:
    double last_good_time_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& w, std::vector<double> gaps)
        : Error(ErrorKind::convergence, w), gaps_(std::move(gaps)) {}
    const std::vector<double>& gaps() const noexcept { return gaps_; }

private:
    std::vector<double> gaps_;
};

// Japanese bracket <x> = sqrt(1 + |x|^2).
inline double bracket(double r) { return std::sqrt(1.0 + r * r); }

inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double norm2(std::span<const int> v) {
    double s = 0.0;
    for (int x : v) s += double(x) * double(x);
    return std::sqrt(s);
}

// Euclidean norm of the concatenation (k, xi).
inline double joint_norm(std::span<const double> k, std::span<const double> xi) {
    double s = 0.0;
    for (double x : k) s += x * x;
    for (double x : xi) s += x * x;
    return std::sqrt(s);
}

// Worker threads used by the parallel loops. 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n). Chunks are contiguous and each index is
// visited by exactly one thread, so results written per index are
// independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace landau
