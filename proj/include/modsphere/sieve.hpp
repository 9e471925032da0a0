#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"

namespace modsphere {

struct PrimePower {
    std::uint64_t prime;
    std::uint32_t exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization with primes in strictly increasing order.
struct Factorization {
    std::uint64_t value = 1;
    std::vector<PrimePower> factors;

    bool is_prime() const {
        return factors.size() == 1 && factors[0].exponent == 1 &&
               factors[0].prime == value;
    }

    /// Overflow-safe check that the factors multiply back to n.
    bool multiplies_to(std::uint64_t n) const {
        unsigned __int128 acc = 1;
        for (const PrimePower& pp : factors)
            for (std::uint32_t i = 0; i < pp.exponent; ++i) {
                acc *= pp.prime;
                if (acc > n) return false;
            }
        return acc == n;
    }
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % n);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t n) {
    std::uint64_t r = 1 % n;
    a %= n;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, n);
        a = mulmod(a, a, n);
        e >>= 1;
    }
    return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin over the first twelve prime witnesses,
/// valid for the whole 64-bit range.
inline bool is_prime(std::uint64_t m) {
    constexpr std::uint64_t witnesses[] = {2,  3,  5,  7,  11, 13,
                                           17, 19, 23, 29, 31, 37};
    if (m < 2) return false;
    for (std::uint64_t p : witnesses) {
        if (m % p == 0) return m == p;
    }
    std::uint64_t d = m - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    for (std::uint64_t a : witnesses) {
        std::uint64_t x = detail::powmod(a, d, m);
        if (x == 1 || x == m - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod(x, x, m);
            if (x == m - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

/// Brent-cycle Pollard rho; returns a nontrivial divisor of odd composite n.
inline std::uint64_t pollard_brent(std::uint64_t n) {
    if (n % 2 == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        auto step = [n, c](std::uint64_t v) {
            std::uint64_t s = mulmod(v, v, n) + c;
            return s >= n ? s - n : s;
        };
        std::uint64_t x = 2, y = 2, ys = 2, d = 1, q = 1, r = 1;
        const std::uint64_t block = 128;
        while (d == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = step(y);
            for (std::uint64_t k = 0; k < r && d == 1; k += block) {
                ys = y;
                std::uint64_t lim = std::min(block, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = step(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
            }
            r <<= 1;
        }
        if (d == n) {
            d = 1;
            while (d == 1) {
                ys = step(ys);
                d = std::gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (d != n) return d;
    }
}

}  // namespace detail

/// Full factorization of a 64-bit integer: trial division by small primes,
/// then Miller-Rabin plus Pollard rho on what remains.
inline Factorization factorize(std::uint64_t m) {
    if (m == 0) throw DomainError("0 has no prime factorization");
    Factorization f;
    f.value = m;
    constexpr std::uint64_t small[] = {2,  3,  5,  7,  11, 13, 17, 19, 23,
                                       29, 31, 37, 41, 43, 47, 53, 59, 61,
                                       67, 71, 73, 79, 83, 89, 97};
    for (std::uint64_t p : small) {
        if (m % p == 0) {
            std::uint32_t e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            f.factors.push_back({p, e});
        }
    }
    if (m > 1) {
        std::vector<std::uint64_t> stack{m}, primes;
        while (!stack.empty()) {
            std::uint64_t t = stack.back();
            stack.pop_back();
            if (is_prime(t)) {
                primes.push_back(t);
                continue;
            }
            std::uint64_t d = detail::pollard_brent(t);
            stack.push_back(d);
            stack.push_back(t / d);
        }
        std::sort(primes.begin(), primes.end());
        for (std::size_t i = 0; i < primes.size();) {
            std::size_t j = i;
            while (j < primes.size() && primes[j] == primes[i]) ++j;
            f.factors.push_back({primes[i], static_cast<std::uint32_t>(j - i)});
            i = j;
        }
    }
    return f;
}

/// Ascending primes <= limit by a simple odd-only sieve.
inline std::vector<std::uint32_t> primes_upto(std::uint32_t limit) {
    std::vector<std::uint32_t> out;
    if (limit >= 2) out.push_back(2);
    if (limit < 3) return out;
    const std::size_t k = (limit - 1) / 2;
    std::vector<bool> comp(k + 1, false);
    for (std::size_t i = 1; (2 * i + 1) <= limit / (2 * i + 1); ++i) {
        if (comp[i]) continue;
        std::uint64_t p = 2 * i + 1;
        for (std::uint64_t j = p * p; j <= limit; j += 2 * p)
            comp[(j - 1) / 2] = true;
    }
    for (std::size_t i = 1; i <= k; ++i)
        if (!comp[i]) out.push_back(static_cast<std::uint32_t>(2 * i + 1));
    return out;
}

/**
 * Smallest-prime-factor values for the odd integers in one window.
 * Entry semantics: spf(m) is the least prime dividing m, and m is prime
 * exactly when spf(m) == m (with 1 mapped to 1 by convention).
 */
class SpfSegment {
   public:
    SpfSegment(std::uint64_t first_odd, std::vector<std::uint32_t> entries)
        : base_(first_odd), spf_(std::move(entries)) {}

    std::uint64_t first() const { return base_; }
    std::uint64_t count() const { return spf_.size(); }
    std::uint64_t past_end() const { return base_ + 2 * spf_.size(); }

    bool covers(std::uint64_t m) const {
        return m % 2 == 1 && m >= base_ && m < past_end();
    }

    std::uint32_t spf(std::uint64_t m) const {
        if (!covers(m))
            throw OutOfRange("value " + std::to_string(m) +
                             " is outside this segment");
        return spf_[(m - base_) / 2];
    }

    bool prime(std::uint64_t m) const { return m != 1 && spf(m) == m; }

   private:
    std::uint64_t base_;
    std::vector<std::uint32_t> spf_;
};

/**
 * Segmented sieve over odd integers up to a fixed limit (< 2^32 so entries
 * stay 32-bit). Base primes up to sqrt(limit) are kept; everything else is
 * produced per segment, so memory stays bounded by the span.
 */
class SegmentedSieve {
   public:
    static constexpr std::uint64_t kMaxLimit = (1ull << 32) - 1;
    static constexpr std::uint64_t kDefaultSpan = 1ull << 22;

    explicit SegmentedSieve(std::uint64_t limit,
                            std::uint64_t span = kDefaultSpan)
        : limit_(std::max<std::uint64_t>(limit, 3)), span_(span) {
        if (limit > kMaxLimit)
            throw SieveRange("sieve limit " + std::to_string(limit) +
                             " exceeds " + std::to_string(kMaxLimit));
        if (span_ == 0) throw DomainError("segment span must be positive");
        auto root = static_cast<std::uint64_t>(
            std::sqrt(static_cast<double>(limit_)));
        while (root * root > limit_) --root;
        while ((root + 1) * (root + 1) <= limit_) ++root;
        base_primes_ =
            primes_upto(static_cast<std::uint32_t>(std::max<std::uint64_t>(root, 2)));
    }

    std::uint64_t limit() const { return limit_; }
    std::uint64_t span() const { return span_; }
    const std::vector<std::uint32_t>& base_primes() const {
        return base_primes_;
    }

    /// Materialize the SPF segment of `span` odd entries starting at an odd
    /// value (clipped at the sieve limit).
    SpfSegment segment_at(std::uint64_t first_odd) const {
        if (first_odd % 2 == 0)
            throw DomainError("segments start on odd values");
        if (first_odd > limit_)
            throw SieveRange("segment start " + std::to_string(first_odd) +
                             " is past the sieve limit");
        std::uint64_t last = std::min(limit_, first_odd + 2 * (span_ - 1));
        if (last % 2 == 0) --last;
        const std::size_t cnt = (last - first_odd) / 2 + 1;
        std::vector<std::uint32_t> e(cnt, 0);
        for (std::size_t bi = 1; bi < base_primes_.size(); ++bi) {
            const std::uint64_t p = base_primes_[bi];
            if (3 * p > last) break;
            // least odd cofactor >= 3 reaching into the window; k = 1 is
            // skipped so primes keep a zero entry until the final fill
            std::uint64_t k = std::max<std::uint64_t>(3, (first_odd + p - 1) / p);
            if (k % 2 == 0) ++k;
            for (std::uint64_t m = k * p; m <= last; m += 2 * p) {
                std::uint32_t& slot = e[(m - first_odd) / 2];
                if (slot == 0) slot = static_cast<std::uint32_t>(p);
            }
        }
        for (std::size_t i = 0; i < cnt; ++i)
            if (e[i] == 0)
                e[i] = static_cast<std::uint32_t>(first_odd + 2 * i);
        return SpfSegment(first_odd, std::move(e));
    }

    /// Visit every prime in [lo, hi] in increasing order.
    template <class F>
    void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& visit) const {
        if (hi > limit_)
            throw SieveRange("prime scan to " + std::to_string(hi) +
                             " exceeds the sieve limit");
        if (lo <= 2 && hi >= 2) visit(std::uint64_t{2});
        std::uint64_t start = std::max<std::uint64_t>(lo, 3) | 1;
        std::vector<bool> comp;
        for (std::uint64_t seg = start; seg <= hi; seg += 2 * span_) {
            std::uint64_t last = std::min(hi, seg + 2 * (span_ - 1));
            if (last % 2 == 0) --last;
            const std::size_t cnt = (last - seg) / 2 + 1;
            comp.assign(cnt, false);
            for (std::size_t bi = 1; bi < base_primes_.size(); ++bi) {
                const std::uint64_t p = base_primes_[bi];
                if (p * p > last) break;
                std::uint64_t first = p * p;
                if (first < seg) {
                    std::uint64_t k = (seg + p - 1) / p;
                    if (k % 2 == 0) ++k;
                    first = k * p;
                }
                for (std::uint64_t m = first; m <= last; m += 2 * p)
                    comp[(m - seg) / 2] = true;
            }
            for (std::size_t i = 0; i < cnt; ++i)
                if (!comp[i]) visit(seg + 2 * i);
        }
    }

    /// Twin pairs (q - 2, q) with q <= x, counted by the larger member.
    std::uint64_t twin_count(std::uint64_t x) const {
        std::uint64_t cnt = 0, prev = 0;
        if (x < 5) return 0;
        for_each_prime(3, x, [&](std::uint64_t p) {
            if (prev + 2 == p) ++cnt;
            prev = p;
        });
        return cnt;
    }

    /**
     * Stream the full factorization of every odd x in [lo, hi] in order.
     * The Factorization handed to `visit` lives in a reused buffer; copy it
     * if it must outlive the call. Two marking passes per window: one to
     * count prime hits, one to divide them out, then the surviving residual
     * (a single prime above sqrt(hi)) is appended.
     */
    template <class F>
    void for_each_odd_factored(std::uint64_t lo, std::uint64_t hi,
                               F&& visit) const {
        if (lo % 2 == 0) throw DomainError("range must start on an odd value");
        if (hi > limit_)
            throw SieveRange("factored scan to " + std::to_string(hi) +
                             " exceeds the sieve limit");
        const std::uint64_t sub = std::min<std::uint64_t>(span_, 1ull << 20);
        std::vector<std::uint32_t> residual;
        std::vector<std::uint8_t> nf;
        std::vector<std::uint32_t> offsets, cursor, fp;
        std::vector<std::uint8_t> fe;
        Factorization buf;
        for (std::uint64_t seg = lo; seg <= hi; seg += 2 * sub) {
            std::uint64_t last = std::min(hi, seg + 2 * (sub - 1));
            if (last % 2 == 0) --last;
            const std::size_t cnt = (last - seg) / 2 + 1;
            residual.resize(cnt);
            for (std::size_t i = 0; i < cnt; ++i)
                residual[i] = static_cast<std::uint32_t>(seg + 2 * i);
            nf.assign(cnt, 0);
            for (std::size_t bi = 1; bi < base_primes_.size(); ++bi) {
                const std::uint64_t p = base_primes_[bi];
                if (p * p > last) break;
                std::uint64_t k = std::max<std::uint64_t>(3, (seg + p - 1) / p);
                if (k % 2 == 0) ++k;
                for (std::uint64_t m = k * p; m <= last; m += 2 * p)
                    ++nf[(m - seg) / 2];
            }
            offsets.assign(cnt + 1, 0);
            for (std::size_t i = 0; i < cnt; ++i)
                offsets[i + 1] = offsets[i] + nf[i];
            fp.resize(offsets[cnt]);
            fe.resize(offsets[cnt]);
            cursor = offsets;
            for (std::size_t bi = 1; bi < base_primes_.size(); ++bi) {
                const std::uint64_t p = base_primes_[bi];
                if (p * p > last) break;
                const auto p32 = static_cast<std::uint32_t>(p);
                std::uint64_t k = std::max<std::uint64_t>(3, (seg + p - 1) / p);
                if (k % 2 == 0) ++k;
                for (std::uint64_t m = k * p; m <= last; m += 2 * p) {
                    const std::size_t idx = (m - seg) / 2;
                    std::uint32_t r = residual[idx];
                    std::uint8_t e = 0;
                    do {
                        r /= p32;
                        ++e;
                    } while (r % p32 == 0);
                    residual[idx] = r;
                    fp[cursor[idx]] = p32;
                    fe[cursor[idx]] = e;
                    ++cursor[idx];
                }
            }
            for (std::size_t i = 0; i < cnt; ++i) {
                buf.value = seg + 2 * i;
                buf.factors.clear();
                for (std::uint32_t j = offsets[i]; j < offsets[i] + nf[i]; ++j)
                    buf.factors.push_back({fp[j], fe[j]});
                if (residual[i] > 1) buf.factors.push_back({residual[i], 1});
                visit(static_cast<const Factorization&>(buf));
            }
        }
    }

   private:
    std::uint64_t limit_;
    std::uint64_t span_;
    std::vector<std::uint32_t> base_primes_;
};

/**
 * Contiguous SPF coverage of the odd integers in [1, limit], built from
 * sieve segments. Supports chained factorization lookups.
 */
class SpfTable {
   public:
    SpfTable(const SegmentedSieve& sieve, std::uint64_t limit)
        : limit_(limit), span_(sieve.span()) {
        if (limit > sieve.limit())
            throw SieveRange("table limit exceeds the sieve limit");
        for (std::uint64_t s = 1; s <= limit; s += 2 * span_)
            segs_.push_back(sieve.segment_at(s));
    }

    std::uint64_t limit() const { return limit_; }
    const std::vector<SpfSegment>& segments() const { return segs_; }

    std::uint32_t spf(std::uint64_t m) const {
        if (m % 2 == 0 || m == 0 || m > limit_)
            throw OutOfRange("spf lookup for " + std::to_string(m) +
                             " is outside the table");
        return segs_[((m - 1) / 2) / span_].spf(m);
    }

    bool prime(std::uint64_t m) const { return m != 1 && spf(m) == m; }

   private:
    std::uint64_t limit_;
    std::uint64_t span_;
    std::vector<SpfSegment> segs_;
};

enum class Fallback { allow, forbid };

/// Factorization by SPF chain lookups, falling back to the general routine
/// when the odd part is beyond the table (or refusing, per policy).
inline Factorization factorize(std::uint64_t m, const SpfTable& table,
                               Fallback fb = Fallback::allow) {
    if (m == 0) throw DomainError("0 has no prime factorization");
    Factorization f;
    f.value = m;
    std::uint64_t odd = m;
    std::uint32_t e2 = 0;
    while (odd % 2 == 0) {
        odd /= 2;
        ++e2;
    }
    if (e2) f.factors.push_back({2, e2});
    if (odd > table.limit()) {
        if (fb == Fallback::forbid)
            throw OutOfRange("odd part " + std::to_string(odd) +
                             " exceeds the SPF table limit " +
                             std::to_string(table.limit()));
        Factorization rest = factorize(odd);
        f.factors.insert(f.factors.end(), rest.factors.begin(),
                         rest.factors.end());
        return f;
    }
    while (odd > 1) {
        const std::uint64_t p = table.spf(odd);
        std::uint32_t e = 0;
        while (odd % p == 0) {
            odd /= p;
            ++e;
        }
        f.factors.push_back({p, e});
    }
    return f;
}

/// Convenience one-shot twin count with a private sieve.
inline std::uint64_t twin_count(std::uint64_t x) {
    return SegmentedSieve(std::max<std::uint64_t>(x, 3)).twin_count(x);
}

}  // namespace modsphere
