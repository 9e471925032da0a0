#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <random>

#include "bignum.hpp"
#include "modint.hpp"

namespace modsphere {

/**
 * Point of the unit 3-sphere over Z/n: x1^2 + x2^2 + x3^2 + x4^2 = 1.
 *
 * Membership is checked on construction, so a SpherePoint is on the sphere
 * by invariant. The four coordinates share one modulus.
 */
class SpherePoint {
   public:
    SpherePoint(ModInt x1, ModInt x2, ModInt x3, ModInt x4)
        : c_{x1, x2, x3, x4} {
        const std::uint64_t n = x1.modulus();
        for (const ModInt& c : c_)
            if (c.modulus() != n) throw ModulusMismatch(n, c.modulus());
        ModInt s = x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4;
        if (s != ModInt(1, n))
            throw DomainError("point is not on the sphere mod " +
                              std::to_string(n));
    }

    static SpherePoint from_residues(std::int64_t x1, std::int64_t x2,
                                     std::int64_t x3, std::int64_t x4,
                                     std::uint64_t n) {
        return {ModInt(x1, n), ModInt(x2, n), ModInt(x3, n), ModInt(x4, n)};
    }

    /// The group identity O = (1, 0, 0, 0).
    static SpherePoint identity(std::uint64_t n) {
        return from_residues(1, 0, 0, 0, n);
    }

    /// The central involution T = (-1, 0, 0, 0).
    static SpherePoint antipode(std::uint64_t n) {
        return from_residues(-1, 0, 0, 0, n);
    }

    const ModInt& x1() const { return c_[0]; }
    const ModInt& x2() const { return c_[1]; }
    const ModInt& x3() const { return c_[2]; }
    const ModInt& x4() const { return c_[3]; }
    const ModInt& operator[](std::size_t i) const { return c_[i]; }
    std::uint64_t modulus() const { return c_[0].modulus(); }

    friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
        return a.c_ == b.c_;
    }
    friend bool operator!=(const SpherePoint& a, const SpherePoint& b) {
        return !(a == b);
    }

    friend std::ostream& operator<<(std::ostream& os, const SpherePoint& p) {
        return os << "(" << p.c_[0].value() << "," << p.c_[1].value() << ","
                  << p.c_[2].value() << "," << p.c_[3].value() << ") mod "
                  << p.modulus();
    }

   private:
    std::array<ModInt, 4> c_;
};

/**
 * Group law: (x1 | X)(y1 | Y) = (x1 y1 - X.Y | X y1 + x1 Y - X x Y)
 * where X, Y are the vector parts. Quaternion multiplication in disguise.
 */
inline SpherePoint add(const SpherePoint& a, const SpherePoint& b) {
    if (a.modulus() != b.modulus())
        throw ModulusMismatch(a.modulus(), b.modulus());
    const ModInt &a1 = a.x1(), &a2 = a.x2(), &a3 = a.x3(), &a4 = a.x4();
    const ModInt &b1 = b.x1(), &b2 = b.x2(), &b3 = b.x3(), &b4 = b.x4();
    ModInt s = a1 * b1 - (a2 * b2 + a3 * b3 + a4 * b4);
    // cross product of the vector parts
    ModInt cx = a3 * b4 - a4 * b3;
    ModInt cy = a4 * b2 - a2 * b4;
    ModInt cz = a2 * b3 - a3 * b2;
    return {s, a2 * b1 + a1 * b2 - cx, a3 * b1 + a1 * b3 - cy,
            a4 * b1 + a1 * b4 - cz};
}

/// Group inverse: the quaternion conjugate (x1, -x2, -x3, -x4).
/// Full negation of all four coordinates is a different map, T + X.
inline SpherePoint neg(const SpherePoint& a) {
    return {a.x1(), -a.x2(), -a.x3(), -a.x4()};
}

/// 4x4 matrix over Z/n. Produced by phi; closed under multiplication.
class SO4Matrix {
   public:
    explicit SO4Matrix(std::array<std::array<ModInt, 4>, 4> rows)
        : m_(rows) {}

    static SO4Matrix identity(std::uint64_t n) {
        std::array<std::array<ModInt, 4>, 4> rows;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) rows[i][j] = ModInt(i == j ? 1 : 0, n);
        return SO4Matrix(rows);
    }

    const ModInt& at(int i, int j) const { return m_[i][j]; }
    std::uint64_t modulus() const { return m_[0][0].modulus(); }

    friend SO4Matrix operator*(const SO4Matrix& a, const SO4Matrix& b) {
        std::array<std::array<ModInt, 4>, 4> rows;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                ModInt s = a.m_[i][0] * b.m_[0][j];
                for (int k = 1; k < 4; ++k) s += a.m_[i][k] * b.m_[k][j];
                rows[i][j] = s;
            }
        return SO4Matrix(rows);
    }

    SO4Matrix transpose() const {
        std::array<std::array<ModInt, 4>, 4> rows;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) rows[i][j] = m_[j][i];
        return SO4Matrix(rows);
    }

    ModInt det() const {
        ModInt d(0, modulus());
        for (int j = 0; j < 4; ++j) {
            ModInt c = m_[0][j] * minor3(0, j);
            if (j % 2 == 0)
                d += c;
            else
                d -= c;
        }
        return d;
    }

    friend bool operator==(const SO4Matrix& a, const SO4Matrix& b) {
        return a.m_ == b.m_;
    }

   private:
    ModInt minor3(int row, int col) const {
        std::array<int, 3> r, c;
        for (int i = 0, k = 0; i < 4; ++i)
            if (i != row) r[k++] = i;
        for (int j = 0, k = 0; j < 4; ++j)
            if (j != col) c[k++] = j;
        const auto& m = m_;
        return m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] -
                                m[r[1]][c[2]] * m[r[2]][c[1]]) -
               m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] -
                                m[r[1]][c[2]] * m[r[2]][c[0]]) +
               m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] -
                                m[r[1]][c[1]] * m[r[2]][c[0]]);
    }

    std::array<std::array<ModInt, 4>, 4> m_;
};

/// Faithful matrix representation: first row of phi(X) is X itself and
/// phi(X + Y) = phi(X) phi(Y).
inline SO4Matrix phi(const SpherePoint& p) {
    const ModInt &x1 = p.x1(), &x2 = p.x2(), &x3 = p.x3(), &x4 = p.x4();
    std::array<std::array<ModInt, 4>, 4> rows = {{
        {x1, x2, x3, x4},
        {-x2, x1, x4, -x3},
        {-x3, -x4, x1, x2},
        {-x4, x3, -x2, x1},
    }};
    return SO4Matrix(rows);
}

/**
 * 2x2 matrix [[alpha, -conj(beta)], [beta, conj(alpha)]] over the Gaussian
 * integers mod n. Only alpha and beta are stored; the shape is an invariant.
 */
class SU2Matrix {
   public:
    SU2Matrix(GaussMod alpha, GaussMod beta) : a_(alpha), b_(beta) {
        if (a_.modulus() != b_.modulus())
            throw ModulusMismatch(a_.modulus(), b_.modulus());
    }

    static SU2Matrix identity(std::uint64_t n) {
        return {GaussMod::one(n), GaussMod::zero(n)};
    }

    const GaussMod& alpha() const { return a_; }
    const GaussMod& beta() const { return b_; }
    std::uint64_t modulus() const { return a_.modulus(); }

    GaussMod at(int i, int j) const {
        if (i == 0) return j == 0 ? a_ : -conj_g(b_);
        return j == 0 ? b_ : conj_g(a_);
    }

    /// alpha conj(alpha) + beta conj(beta); equals 1 for sphere images.
    GaussMod det() const { return a_ * conj_g(a_) + b_ * conj_g(b_); }

    friend SU2Matrix operator*(const SU2Matrix& x, const SU2Matrix& y) {
        GaussMod alpha = x.a_ * y.a_ - conj_g(x.b_) * y.b_;
        GaussMod beta = x.b_ * y.a_ + conj_g(x.a_) * y.b_;
        return {alpha, beta};
    }

    friend bool operator==(const SU2Matrix& x, const SU2Matrix& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }

   private:
    static GaussMod conj_g(const GaussMod& g) { return conj(g); }

    GaussMod a_;
    GaussMod b_;
};

/// theta(X) has alpha = x1 + x2 i and beta = x3 + x4 i; theta is an
/// isomorphism onto its image and det(theta(X)) = 1.
inline SU2Matrix theta(const SpherePoint& p) {
    return {GaussMod{p.x1(), p.x2()}, GaussMod{p.x3(), p.x4()}};
}

/// Inverse of theta. Rejects matrices with det != 1 via the sphere check.
inline SpherePoint theta_inv(const SU2Matrix& m) {
    return {m.alpha().re, m.alpha().im, m.beta().re, m.beta().im};
}

/// Rational parameter triple for the three-parameter chart of the sphere.
struct RationalPoint3 {
    Rational t;
    Rational u;
    Rational v;
};

/// (t, u, v) -> ((w - 2t^2)/w, 2tu/w, 2t/w, 2tv/w) with w = 1 + t^2 + u^2 + v^2.
/// Requires t != 0 (the chart misses x3 = 0).
inline std::array<Rational, 4> rational_param(const RationalPoint3& p) {
    if (p.t == 0) throw DomainError("chart requires t != 0");
    Rational w = 1 + p.t * p.t + p.u * p.u + p.v * p.v;
    Rational two_t = 2 * p.t;
    return {(w - 2 * p.t * p.t) / w, two_t * p.u / w, two_t / w,
            two_t * p.v / w};
}

/// Inverse chart: t = (1 - x1)/x3, u = x2/x3, v = x4/x3. Requires a point
/// on the rational sphere with x3 != 0.
inline RationalPoint3 rational_param_inv(const std::array<Rational, 4>& q) {
    Rational s = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
    if (s != 1) throw DomainError("not a point of the rational unit sphere");
    if (q[2] == 0) throw DomainError("chart requires x3 != 0");
    return {(1 - q[0]) / q[2], q[1] / q[2], q[3] / q[2]};
}

/**
 * Random sphere point mod n through the rational chart: draw (t, u, v)
 * uniformly, reject when w = 1 + t^2 + u^2 + v^2 is not invertible.
 * The rejection probability is at most 1/2 per draw for odd n.
 */
template <class URBG>
SpherePoint random_point(URBG& rng, std::uint64_t n) {
    if (n < 2) throw DomainError("modulus must be at least 2");
    std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
    for (int tries = 0; tries < 4096; ++tries) {
        ModInt t(static_cast<std::int64_t>(dist(rng)), n);
        ModInt u(static_cast<std::int64_t>(dist(rng)), n);
        ModInt v(static_cast<std::int64_t>(dist(rng)), n);
        ModInt w = ModInt(1, n) + t * t + u * u + v * v;
        if (std::gcd(w.value(), n) != 1) continue;
        ModInt wi = mod_inv(w);
        ModInt two_t = t + t;
        return {(w - (t * t + t * t)) * wi, two_t * u * wi, two_t * wi,
                two_t * v * wi};
    }
    throw DomainError("could not find an invertible chart denominator mod " +
                      std::to_string(n));
}

}  // namespace modsphere
