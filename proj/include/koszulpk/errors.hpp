#pragma once
#include <stdexcept>
#include <string>

namespace kpk {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Arithmetic / linear algebra
struct NotAUnit : Error {
    explicit NotAUnit(const std::string& msg) : Error("NotAUnit: " + msg) {}
};
struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& msg) : Error("ShapeMismatch: " + msg) {}
};
struct NotInvertible : Error {
    explicit NotInvertible(const std::string& msg) : Error("NotInvertible: " + msg) {}
};

// Module category
struct NotAMorphism : Error {
    explicit NotAMorphism(const std::string& msg) : Error("NotAMorphism: " + msg) {}
};
struct NotAComplex : Error {
    explicit NotAComplex(const std::string& msg) : Error("NotAComplex: " + msg) {}
};

// Koszul systems
struct ActionsDoNotCommute : Error {
    explicit ActionsDoNotCommute(const std::string& msg) : Error("ActionsDoNotCommute: " + msg) {}
};
struct ActionNotInRadical : Error {
    explicit ActionNotInRadical(const std::string& msg) : Error("ActionNotInRadical: " + msg) {}
};

// Graded backend
struct InhomogeneousInput : Error {
    explicit InhomogeneousInput(const std::string& msg) : Error("InhomogeneousInput: " + msg) {}
};
struct DegreeBudgetExceeded : Error {
    explicit DegreeBudgetExceeded(const std::string& msg) : Error("DegreeBudgetExceeded: " + msg) {}
};
struct NotCofinite : Error {
    explicit NotCofinite(const std::string& msg) : Error("NotCofinite: " + msg) {}
};

// Instance lab
struct SizeBoundExceeded : Error {
    explicit SizeBoundExceeded(const std::string& msg) : Error("SizeBoundExceeded: " + msg) {}
};

// Front end
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("ParseError: " + msg) {}
};

} // namespace kpk
