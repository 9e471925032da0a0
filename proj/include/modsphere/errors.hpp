#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace modsphere {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inversion was requested for a residue not coprime to the modulus.
/// Carries the offending gcd as a witness.
struct NotInvertible : Error {
    std::uint64_t gcd;
    NotInvertible(std::uint64_t value, std::uint64_t modulus, std::uint64_t g)
        : Error("residue " + std::to_string(value) + " is not invertible mod " +
                std::to_string(modulus) + " (gcd " + std::to_string(g) + ")"),
          gcd(g) {}
};

/// Two residues with different moduli met in one operation.
struct ModulusMismatch : Error {
    std::uint64_t lhs;
    std::uint64_t rhs;
    ModulusMismatch(std::uint64_t a, std::uint64_t b)
        : Error("modulus mismatch: " + std::to_string(a) + " vs " + std::to_string(b)),
          lhs(a), rhs(b) {}
};

/// Input outside the mathematical domain of the operation
/// (point not on the sphere, even modulus where an odd one is required, ...).
struct DomainError : Error {
    using Error::Error;
};

/// A configurable work bound was exceeded before the answer was found.
struct LimitExceeded : Error {
    using Error::Error;
};

/// A supplied factorization does not multiply back to the claimed integer.
struct BadFactorization : Error {
    using Error::Error;
};

/// A lookup fell outside the range a table was built for.
struct OutOfRange : Error {
    using Error::Error;
};

/// A sieve or series request exceeds the representable range.
struct SieveRange : Error {
    using Error::Error;
};

/// The model fit could not proceed (rank-deficient system or too few samples).
struct SingularFit : Error {
    using Error::Error;
};

}  // namespace modsphere
