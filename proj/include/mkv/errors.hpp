#pragma once

#include <stdexcept>
#include <string>

namespace mkv {

// Argument outside the mathematical domain of an operation (T <= 0, p < 1, ...).
class domain_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Declared and actual dimensions disagree.
class shape_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Non-finite values produced while stepping or integrating.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, double time, long index = -1)
        : std::runtime_error(what), time_(time), index_(index) {}

    double time() const noexcept { return time_; }
    // Particle index, or -1 when the failure is not tied to a particle.
    long index() const noexcept { return index_; }

private:
    double time_;
    long index_;
};

// Bad configuration document; key() names the offending entry.
class config_error : public std::runtime_error {
public:
    config_error(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace mkv
