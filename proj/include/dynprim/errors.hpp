#pragma once

// Shared error types.  Everything user-triggerable derives from InputError so
// the CLI can map it to a single exit code; resource-cap overruns derive from
// CapExceeded and get their own exit code.  Internal invariant violations use
// plain logic_error and are considered bugs.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dynprim {

// Base class for "the input was bad" conditions (CLI exit code 1).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Base class for "the computation would exceed a configured cap" (exit code 2).
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// An iterate/composition would allocate more coefficients than allowed.
class DegreeCapExceeded : public CapExceeded {
public:
    std::uint64_t attempted;
    std::uint64_t cap;
    DegreeCapExceeded(std::uint64_t attempted_, std::uint64_t cap_)
        : CapExceeded("degree cap exceeded: iterate needs " + std::to_string(attempted_) +
                      " coefficients, cap is " + std::to_string(cap_)),
          attempted(attempted_), cap(cap_) {}
    DegreeCapExceeded(std::uint64_t attempted_, std::uint64_t cap_, const std::string& context)
        : CapExceeded("degree cap exceeded: " + context + " needs " + std::to_string(attempted_) +
                      " coefficients, cap is " + std::to_string(cap_)),
          attempted(attempted_), cap(cap_) {}
};

// An exhaustive enumeration would visit more items than allowed.
class EnumerationCapExceeded : public CapExceeded {
public:
    std::uint64_t attempted;
    std::uint64_t cap;
    EnumerationCapExceeded(std::uint64_t attempted_, std::uint64_t cap_)
        : CapExceeded("enumeration cap exceeded: scan would visit " + std::to_string(attempted_) +
                      " pairs, cap is " + std::to_string(cap_)),
          attempted(attempted_), cap(cap_) {}
};

// Division by zero / zero where a nonzero value is required.
class ZeroInput : public InputError {
public:
    explicit ZeroInput(const std::string& what) : InputError(what) {}
};

// The linear system for the auxiliary coefficients is singular (delta = 0).
class SingularSystem : public InputError {
public:
    explicit SingularSystem(const std::string& what) : InputError(what) {}
};

// An operation needs an integer (e.g. the map degree) to be invertible in the
// coefficient field and it is not.
class BadCharacteristic : public InputError {
public:
    explicit BadCharacteristic(const std::string& what) : InputError(what) {}
};

// Orbit-based operation was handed a preperiodic base point.
class PreperiodicBase : public InputError {
public:
    explicit PreperiodicBase(const std::string& what) : InputError(what) {}
};

// Height lower bound must be positive.
class NonpositiveHeight : public InputError {
public:
    explicit NonpositiveHeight(const std::string& what) : InputError(what) {}
};

// phi' vanishes identically, so critical points are undefined.
class InseparableDerivative : public InputError {
public:
    explicit InseparableDerivative(const std::string& what) : InputError(what) {}
};

// Family parameter B was constant where a nonconstant one is required.
class ConstantB : public InputError {
public:
    explicit ConstantB(const std::string& what) : InputError(what) {}
};

// A checker depends on an irreducibility certificate nobody supplied.
class MissingIrreducibility : public InputError {
public:
    explicit MissingIrreducibility(const std::string& what) : InputError(what) {}
};

// The Eisenstein valuation pattern broke at iterate `level`; `coefficient`
// is the x-degree of the offending coefficient.
class PatternBroken : public InputError {
public:
    int level;
    int coefficient;
    PatternBroken(int level_, int coefficient_, const std::string& detail)
        : InputError("Eisenstein pattern broken at iterate " + std::to_string(level_) +
                     ", coefficient of x^" + std::to_string(coefficient_) + ": " + detail),
          level(level_), coefficient(coefficient_) {}
};

// A structural sanity check on a computed sequence failed; `which` names the
// check and `level` the orbit index it failed at.
class CheckFailed : public std::runtime_error {
public:
    std::string which;
    int level;
    CheckFailed(const std::string& which_, int level_,
                const std::string& detail = "computed value does not match the expected shape")
        : std::runtime_error("check '" + which_ + "' failed at level " + std::to_string(level_) +
                             ": " + detail),
          which(which_), level(level_) {}
};

// Parse errors carry the byte offset of the offending token.
class SyntaxError : public InputError {
public:
    std::size_t position;
    SyntaxError(const std::string& what, std::size_t position_)
        : InputError(what + " (at position " + std::to_string(position_) + ")"),
          position(position_) {}
};

// 't' appeared where only 'x' is legal or vice versa (e.g. x in a divisor).
class MixedVariableError : public SyntaxError {
public:
    MixedVariableError(const std::string& what, std::size_t position_)
        : SyntaxError(what, position_) {}
};

// A literal or divisor collapses to zero in the requested characteristic.
class CharacteristicError : public SyntaxError {
public:
    CharacteristicError(const std::string& what, std::size_t position_)
        : SyntaxError(what, position_) {}
};

}  // namespace dynprim
