#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "bignum.hpp"
#include "modint.hpp"
#include "sieve.hpp"
#include "sphere.hpp"

namespace modsphere {

/// T_k(x) and U_{k-1}(x) evaluated together; U_{-1} = 0 covers k = 0.
struct ChebPair {
    ModInt t;
    ModInt u;
    std::uint64_t k;
};

namespace detail {

/**
 * MSB-first doubling ladder. State holds (T_j, T_{j+1}, U_{j-1}, U_j) and
 * each consumed bit moves j to 2j or 2j+1 through the six identities
 *   T_{2j}   = 2 T_j^2 - 1
 *   T_{2j+1} = 2 T_{j+1} T_j - x
 *   T_{2j+2} = 2 T_{j+1}^2 - 1
 *   U_{2j-1} = 2 (x U_j - U_{j-1}) (2x U_{j-1} - U_j) + 2x
 *   U_{2j}   = 2 U_{j-1} (x U_j - U_{j-1}) + 1
 *   U_{2j+1} = 2 U_j (x U_j - U_{j-1})
 */
struct ChebState {
    ModInt t0, t1, u0, u1;

    void step(const ModInt& x, bool bit) {
        const ModInt one(1, x.modulus());
        const ModInt a = x * u1 - u0;
        ModInt t_mid = t1 * t0 + t1 * t0 - x;    // T at odd position 2j+1
        ModInt u_mid = u0 * a + u0 * a + one;    // U at even position 2j
        if (!bit) {
            const ModInt b = (x + x) * u0 - u1;
            t1 = t_mid;
            t0 = t0 * t0 + t0 * t0 - one;
            u1 = u_mid;
            u0 = a * b + a * b + x + x;
        } else {
            t0 = t_mid;
            t1 = t1 * t1 + t1 * t1 - one;
            u0 = u_mid;
            u1 = u1 * a + u1 * a;
        }
    }
};

/// Ladder for index >= 2 given the position of its leading bit.
template <class BitAt>
std::pair<ModInt, ModInt> cheb_core(const ModInt& x, int top, BitAt bit) {
    ChebState st{x, x * x + x * x - ModInt(1, x.modulus()), ModInt(1, x.modulus()),
                 x + x};
    for (int i = top - 1; i >= 0; --i) st.step(x, bit(i));
    return {st.t0, st.u0};
}

}  // namespace detail

/// Chebyshev pair (T_k(x), U_{k-1}(x)) mod n in O(log k) multiplications.
inline ChebPair cheb_eval(const ModInt& x, std::uint64_t k) {
    const std::uint64_t n = x.modulus();
    if (k == 0) return {ModInt(1, n), ModInt(0, n), 0};
    if (k == 1) return {x, ModInt(1, n), 1};
    int top = 63;
    while (!((k >> top) & 1)) --top;
    auto [t, u] = detail::cheb_core(
        x, top, [k](int i) { return ((k >> i) & 1) != 0; });
    return {t, u, k};
}

/// k-fold group sum in O(log k) time:
/// kX = (T_k(x1), x2 U_{k-1}(x1), x3 U_{k-1}(x1), x4 U_{k-1}(x1)).
inline SpherePoint scalar_mul(const SpherePoint& p, std::uint64_t k) {
    const ChebPair c = cheb_eval(p.x1(), k);
    return {c.t, p.x2() * c.u, p.x3() * c.u, p.x4() * c.u};
}

/// Same ladder with an arbitrarily large scalar (order computations need
/// exponents near n^3).
inline SpherePoint scalar_mul(const SpherePoint& p, const BigInt& k) {
    if (k < 0) throw DomainError("scalar must be nonnegative");
    if (k <= (std::numeric_limits<std::uint64_t>::max)())
        return scalar_mul(p, k.convert_to<std::uint64_t>());
    const int top = static_cast<int>(boost::multiprecision::msb(k));
    auto [t, u] = detail::cheb_core(p.x1(), top, [&k](int i) {
        return boost::multiprecision::bit_test(k, static_cast<unsigned>(i));
    });
    return {t, p.x2() * u, p.x3() * u, p.x4() * u};
}

/**
 * Order of X in the sphere group mod n. For prime n the order divides
 * n^3 - n = n (n-1) (n+1), so strip prime factors from that bound with
 * O(log) scalar multiplications each. Composite moduli iterate directly.
 */
inline std::uint64_t element_order(const SpherePoint& p) {
    const std::uint64_t n = p.modulus();
    if (n < 2) throw DomainError("order needs a modulus of at least 2");
    const SpherePoint id = SpherePoint::identity(n);
    if (p == id) return 1;
    if (is_prime(n)) {
        BigInt order = BigInt(n) * n * n - n;
        std::vector<std::uint64_t> primes{n};
        for (std::uint64_t m : {n - 1, n + 1})
            for (const PrimePower& pp : factorize(m).factors)
                primes.push_back(pp.prime);
        for (std::uint64_t q : primes)
            while (order % q == 0 && scalar_mul(p, BigInt(order / q)) == id)
                order /= q;
        return order.convert_to<std::uint64_t>();
    }
    SpherePoint acc = p;
    std::uint64_t k = 1;
    while (acc != id) {
        acc = add(acc, p);
        ++k;
    }
    return k;
}

}  // namespace modsphere
