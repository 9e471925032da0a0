#pragma once

#include <cstdint>
#include <ostream>

#include "errors.hpp"

namespace modsphere {

/**
 * Residue in [0, n) with the modulus carried alongside the value.
 *
 * The modulus is runtime state, not a template parameter, so values with
 * different moduli can coexist; mixing them in one operation throws
 * ModulusMismatch rather than silently re-reducing.
 */
class ModInt {
   public:
    /// Zero in the trivial ring Z/1.
    constexpr ModInt() : v_(0), n_(1) {}

    /// Reduces a signed value into [0, n). Throws DomainError when n == 0.
    ModInt(std::int64_t value, std::uint64_t modulus) : n_(modulus) {
        if (modulus == 0) throw DomainError("modulus must be positive");
        v_ = reduce_signed(value, modulus);
    }

    /// The value is already in [0, n); no reduction performed.
    static ModInt from_reduced(std::uint64_t value, std::uint64_t modulus) {
        ModInt r;
        r.v_ = value;
        r.n_ = modulus;
        return r;
    }

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return n_; }

    ModInt operator-() const { return from_reduced(v_ == 0 ? 0 : n_ - v_, n_); }

    ModInt& operator+=(const ModInt& o) {
        check_same(o);
        // subtract first so the sum never leaves 64 bits, even for huge n
        if (o.v_ != 0 && v_ >= n_ - o.v_)
            v_ -= n_ - o.v_;
        else
            v_ += o.v_;
        return *this;
    }

    ModInt& operator-=(const ModInt& o) {
        check_same(o);
        v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + (n_ - o.v_);
        return *this;
    }

    ModInt& operator*=(const ModInt& o) {
        check_same(o);
        v_ = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(v_) * o.v_) % n_);
        return *this;
    }

    friend ModInt operator+(ModInt a, const ModInt& b) { return a += b; }
    friend ModInt operator-(ModInt a, const ModInt& b) { return a -= b; }
    friend ModInt operator*(ModInt a, const ModInt& b) { return a *= b; }

    friend bool operator==(const ModInt& a, const ModInt& b) {
        return a.n_ == b.n_ && a.v_ == b.v_;
    }
    friend bool operator!=(const ModInt& a, const ModInt& b) { return !(a == b); }

    ModInt pow(std::uint64_t e) const {
        ModInt base = *this;
        ModInt acc = from_reduced(n_ == 1 ? 0 : 1, n_);
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    friend std::ostream& operator<<(std::ostream& os, const ModInt& a) {
        return os << a.v_ << " (mod " << a.n_ << ")";
    }

   private:
    static std::uint64_t reduce_signed(std::int64_t v, std::uint64_t n) {
        if (v >= 0) return static_cast<std::uint64_t>(v) % n;
        std::uint64_t mag = static_cast<std::uint64_t>(-(v + 1)) + 1;
        std::uint64_t r = mag % n;
        return r == 0 ? 0 : n - r;
    }

    void check_same(const ModInt& o) const {
        if (n_ != o.n_) throw ModulusMismatch(n_, o.n_);
    }

    std::uint64_t v_;
    std::uint64_t n_;
};

/// Modular inverse by extended Euclid. Throws NotInvertible carrying the gcd.
inline ModInt mod_inv(const ModInt& a) {
    const std::uint64_t n = a.modulus();
    if (n == 1) return ModInt::from_reduced(0, 1);
    __int128 t = 0, t1 = 1;
    std::uint64_t r = n, r1 = a.value();
    while (r1 != 0) {
        std::uint64_t q = r / r1;
        __int128 t2 = t - static_cast<__int128>(q) * t1;
        t = t1;
        t1 = t2;
        std::uint64_t r2 = r - q * r1;
        r = r1;
        r1 = r2;
    }
    if (r != 1) throw NotInvertible(a.value(), n, r);
    if (t < 0) t += n;
    return ModInt::from_reduced(static_cast<std::uint64_t>(t), n);
}

/// Gaussian integer x + yi over Z/n, both components sharing one modulus.
struct GaussMod {
    ModInt re;
    ModInt im;

    GaussMod(ModInt real, ModInt imag) : re(real), im(imag) {
        if (re.modulus() != im.modulus())
            throw ModulusMismatch(re.modulus(), im.modulus());
    }

    std::uint64_t modulus() const { return re.modulus(); }

    static GaussMod zero(std::uint64_t n) { return {ModInt(0, n), ModInt(0, n)}; }
    static GaussMod one(std::uint64_t n) { return {ModInt(1, n), ModInt(0, n)}; }

    friend bool operator==(const GaussMod& a, const GaussMod& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussMod& a, const GaussMod& b) { return !(a == b); }
};

inline GaussMod gauss_mul(const GaussMod& a, const GaussMod& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline GaussMod operator*(const GaussMod& a, const GaussMod& b) {
    return gauss_mul(a, b);
}

inline GaussMod operator+(const GaussMod& a, const GaussMod& b) {
    return {a.re + b.re, a.im + b.im};
}

inline GaussMod operator-(const GaussMod& a, const GaussMod& b) {
    return {a.re - b.re, a.im - b.im};
}

inline GaussMod conj(const GaussMod& a) { return {a.re, -a.im}; }

inline GaussMod operator-(const GaussMod& a) { return {-a.re, -a.im}; }

inline std::ostream& operator<<(std::ostream& os, const GaussMod& a) {
    return os << a.re.value() << "+" << a.im.value() << "i (mod " << a.modulus()
              << ")";
}

}  // namespace modsphere
