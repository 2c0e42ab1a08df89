#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace teig {

/// Operand shapes do not conform (inner dimension, tube length, lateral width).
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A tubular tensor (or a Fourier slice of a tensor) is numerically singular.
class SingularError : public std::runtime_error {
public:
    struct Component {
        std::size_t index;
        double magnitude;
    };

    SingularError(const std::string& what, std::vector<Component> offending)
        : std::runtime_error(what), offending_(std::move(offending)) {}

    const std::vector<Component>& offending() const noexcept { return offending_; }

private:
    std::vector<Component> offending_;
};

/// A scalar function is undefined on some Fourier component.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NotHermitianError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotHPDError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SpectralRadiusError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class EigenSolverError : public std::runtime_error {
public:
    EigenSolverError(const std::string& what, std::size_t slice)
        : std::runtime_error(what), slice_(slice) {}
    std::size_t slice() const noexcept { return slice_; }

private:
    std::size_t slice_;
};

/// Configuration or input file could not be validated.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace teig
