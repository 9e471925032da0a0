#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bignum.hpp"
#include "errors.hpp"
#include "sieve.hpp"

namespace modsphere {

/**
 * Number of points on the sphere mod n, counted directly. The four-variable
 * count is the convolution of two two-square counts, so the work is O(n^2)
 * with O(n) memory instead of O(n^4).
 */
inline BigInt r4_bruteforce(std::uint64_t n, std::uint64_t limit = 3000) {
    if (n == 0) throw DomainError("modulus must be positive");
    if (n > limit)
        throw LimitExceeded("enumeration limit " + std::to_string(limit) +
                            " exceeded by n = " + std::to_string(n));
    std::vector<std::uint64_t> sq(n), r2(n, 0);
    for (std::uint64_t a = 0; a < n; ++a) sq[a] = (a * a) % n;
    for (std::uint64_t a = 0; a < n; ++a)
        for (std::uint64_t b = 0; b < n; ++b) {
            std::uint64_t c = sq[a] + sq[b];
            if (c >= n) c -= n;
            ++r2[c];
        }
    unsigned __int128 total = 0;
    for (std::uint64_t c = 0; c < n; ++c)
        total += static_cast<unsigned __int128>(r2[c]) * r2[(1 + n - c) % n];
    return (BigInt(static_cast<std::uint64_t>(total >> 64)) << 64) +
           static_cast<std::uint64_t>(total);
}

/// Multiplicative closed form: n^3 times (1 - 1/p^2) over the odd primes
/// dividing n. Exact integer arithmetic throughout.
inline BigInt r4_formula(std::uint64_t n, const Factorization& f) {
    if (n == 0) throw DomainError("modulus must be positive");
    if (!f.multiplies_to(n))
        throw BadFactorization("factorization does not multiply to " +
                               std::to_string(n));
    BigInt r = BigInt(n) * n * n;
    for (const PrimePower& pp : f.factors) {
        if (pp.prime == 2) continue;
        BigInt p2 = BigInt(pp.prime) * pp.prime;
        r /= p2;
        r *= p2 - 1;
    }
    return r;
}

inline BigInt r4_formula(std::uint64_t n) { return r4_formula(n, factorize(n)); }

enum class CountMethod { enumeration, formula, both };

struct CountReport {
    std::uint64_t n = 0;
    BigInt r4;
    CountMethod method = CountMethod::formula;
    std::optional<bool> prime_criterion;  // set for odd n >= 3
};

inline CountReport count_report(std::uint64_t n,
                                CountMethod method = CountMethod::formula,
                                std::uint64_t limit = 3000) {
    CountReport rep;
    rep.n = n;
    rep.method = method;
    std::optional<BigInt> by_enum, by_formula;
    if (method != CountMethod::formula) by_enum = r4_bruteforce(n, limit);
    if (method != CountMethod::enumeration) by_formula = r4_formula(n);
    if (by_enum && by_formula && *by_enum != *by_formula)
        throw Error("point-count methods disagree at n = " + std::to_string(n));
    rep.r4 = by_enum ? *by_enum : *by_formula;
    if (n >= 3 && n % 2 == 1)
        rep.prime_criterion = rep.r4 == BigInt(n) * n * n - n;
    return rep;
}

/// Primality criterion: odd n >= 3 is prime iff the sphere mod n has
/// exactly n^3 - n points.
inline bool prime_test_sphere(std::uint64_t n,
                              CountMethod method = CountMethod::formula,
                              std::uint64_t limit = 3000) {
    if (n < 3 || n % 2 == 0)
        throw DomainError("criterion applies to odd n >= 3");
    BigInt expected = BigInt(n) * n * n - n;
    BigInt actual = method == CountMethod::enumeration
                        ? r4_bruteforce(n, limit)
                        : r4_formula(n);
    return actual == expected;
}

/// Twin criterion: for odd n >= 3, (n, n + 2) are both prime iff the Euler
/// product over primes dividing n(n + 2) matches a fixed rational in n.
/// Both sides are evaluated exactly.
inline bool twin_test_sphere(std::uint64_t n) {
    if (n < 3 || n % 2 == 0)
        throw DomainError("criterion applies to odd n >= 3");
    Rational lhs = 1;
    for (std::uint64_t m : {n, n + 2})
        for (const PrimePower& pp : factorize(m).factors) {
            BigInt p2 = BigInt(pp.prime) * pp.prime;
            lhs *= Rational(p2, p2 - 1);
        }
    BigInt n2 = BigInt(n) * n;
    BigInt np2 = BigInt(n + 2) * (n + 2);
    Rational rhs(n2 * np2,
                 BigInt(n - 1) * (BigInt(n + 1) * (n + 1)) * BigInt(n + 3));
    return lhs == rhs;
}

}  // namespace modsphere
