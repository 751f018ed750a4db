#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace specedge {

/// Base class for all library errors. Subclasses map onto CLI exit codes:
/// configuration (2), assumption failures (3), numerical failures (4).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- configuration / input errors ---

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "config validation failed:";
        for (const auto& s : v) out += "\n  - " + s;
        return out;
    }
    std::vector<std::string> violations_;
};

class GridTooSmall : public Error {
public:
    using Error::Error;
};

class OddGridSize : public Error {
public:
    using Error::Error;
};

class DiscretizationMismatch : public Error {
public:
    using Error::Error;
};

// --- assumption failures (spectral structure not as required) ---

class DegenerateEdge : public Error {
public:
    using Error::Error;
};

class A1Violated : public Error {
public:
    using Error::Error;
};

class AssumptionFailed : public Error {
public:
    using Error::Error;
};

class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

class PreconditionNotMet : public Error {
public:
    using Error::Error;
};

// --- numerical failures ---

class EllipticityViolated : public Error {
public:
    using Error::Error;
};

class NonSymmetricPerturbation : public Error {
public:
    using Error::Error;
};

class IllConditionedSolve : public Error {
public:
    using Error::Error;
};

class NonRealCoefficient : public Error {
public:
    using Error::Error;
};

class EpsOutOfRange : public Error {
public:
    using Error::Error;
};

class SupercellTooLarge : public Error {
public:
    using Error::Error;
};

class CombinatorialBlowup : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

} // namespace specedge
