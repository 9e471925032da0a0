#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bignum.hpp"
#include "errors.hpp"
#include "sieve.hpp"
#include "summation.hpp"

namespace modsphere {

/// tau(3) limit value used as the reference constant in conjecture scans.
inline constexpr double kTau3Reference = 0.474004103627;

/// E(x) = (1 - 1/x^2)^{-1} in double precision.
inline double euler_factor(double x) { return 1.0 / (1.0 - 1.0 / (x * x)); }

/// E(x) = x^2/(x^2 - 1) exactly.
inline Rational euler_factor_exact(std::uint64_t x) {
    BigInt x2 = BigInt(x) * x;
    return Rational(x2, x2 - 1);
}

namespace detail {

/// log E(p), always positive; log1p keeps it accurate for large p.
inline double euler_log(double p) { return -std::log1p(-1.0 / (p * p)); }

inline double pow_ns(std::uint64_t n, double s) {
    const double x = static_cast<double>(n);
    if (s == 1.0) return x;
    if (s == 2.0) return x * x;
    if (s == 3.0) return x * x * x;
    return std::pow(x, s);
}

inline void check_pair(std::uint64_t n, const Factorization& f1,
                       const Factorization& f2) {
    if (n == 0) throw DomainError("the series starts at n = 1");
    if (f1.value != 2 * n + 1 || f2.value != 2 * n + 3)
        throw BadFactorization("factorizations are not those of 2n+1, 2n+3");
}

}  // namespace detail

/**
 * Determinant of A_n = [[prod E(p) over p | 2n+1, E(2n+1)],
 *                       [E(2n+3),  prod E(p) over p | 2n+3]]
 * computed in log space: det = E1 E2 expm1(sum of factor logs - log E1
 * - log E2). Exactly 0.0 when both 2n+1 and 2n+3 are prime; strictly
 * positive otherwise.
 */
inline double det_A(std::uint64_t n, const Factorization& f1,
                    const Factorization& f2) {
    detail::check_pair(n, f1, f2);
    if (f1.is_prime() && f2.is_prime()) return 0.0;
    const double p1 = static_cast<double>(f1.value);
    const double p2 = static_cast<double>(f2.value);
    double lg = 0.0;
    for (const PrimePower& pp : f1.factors)
        lg += detail::euler_log(static_cast<double>(pp.prime));
    for (const PrimePower& pp : f2.factors)
        lg += detail::euler_log(static_cast<double>(pp.prime));
    lg += std::log1p(-1.0 / (p1 * p1)) + std::log1p(-1.0 / (p2 * p2));
    return euler_factor(p1) * euler_factor(p2) * std::expm1(lg);
}

/// Same determinant as an exact rational.
inline Rational det_A_exact(std::uint64_t n, const Factorization& f1,
                            const Factorization& f2) {
    detail::check_pair(n, f1, f2);
    Rational prod = 1;
    for (const PrimePower& pp : f1.factors)
        prod *= euler_factor_exact(pp.prime);
    for (const PrimePower& pp : f2.factors)
        prod *= euler_factor_exact(pp.prime);
    return prod - euler_factor_exact(f1.value) * euler_factor_exact(f2.value);
}

/// The value matrix for one index n, with its determinant and twin flag.
struct TwinMatrix {
    std::uint64_t n;
    std::uint64_t p1, p2;      // 2n+1, 2n+3
    double prod_e1, prod_e2;   // diagonal: Euler products over prime divisors
    double e1, e2;             // antidiagonal: E(2n+1), E(2n+3)
    double det;                // 0 exactly when (p1, p2) is a twin pair
    bool twin;
};

inline TwinMatrix twin_matrix(std::uint64_t n, const Factorization& f1,
                              const Factorization& f2) {
    detail::check_pair(n, f1, f2);
    double l1 = 0.0, l2 = 0.0;
    for (const PrimePower& pp : f1.factors)
        l1 += detail::euler_log(static_cast<double>(pp.prime));
    for (const PrimePower& pp : f2.factors)
        l2 += detail::euler_log(static_cast<double>(pp.prime));
    TwinMatrix t;
    t.n = n;
    t.p1 = f1.value;
    t.p2 = f2.value;
    t.prod_e1 = std::exp(l1);
    t.prod_e2 = std::exp(l2);
    t.e1 = euler_factor(static_cast<double>(t.p1));
    t.e2 = euler_factor(static_cast<double>(t.p2));
    t.twin = f1.is_prime() && f2.is_prime();
    t.det = det_A(n, f1, f2);
    return t;
}

/// F(s, n): 0 at twin indices, else 1/(1 + det(A_n) n^s).
inline double summand_F(double s, std::uint64_t n, double det) {
    if (det == 0.0) return 0.0;
    return 1.0 / (1.0 + det * detail::pow_ns(n, s));
}

/// Summand of the full series omega: twin indices contribute exactly 1.
inline double omega_summand(double s, std::uint64_t n, double det) {
    return det == 0.0 ? 1.0 : summand_F(s, n, det);
}

/**
 * Streaming evaluator for tau(s, m) = sum over non-twin n <= m of F(s, n)
 * and the twin counter pi2(2m+3).
 *
 * Work is split on a fixed absolute grid of `chunk` indices; each chunk is
 * summed into its own compensated accumulator and the per-chunk results are
 * merged in index order. The grid, not the thread count, determines the
 * floating-point grouping, so results are bit-identical for any `threads`.
 */
class SeriesEngine {
   public:
    struct Options {
        std::vector<double> s_values{1.0, 2.0, 3.0};
        unsigned threads = 1;
        std::uint64_t chunk = 1ull << 19;
        std::uint64_t span = SegmentedSieve::kDefaultSpan;
    };

    struct State {
        std::uint64_t next_n = 1;
        std::uint64_t twin_hits = 0;
        std::vector<NeumaierSum> tau;
    };

    static constexpr std::uint64_t kMaxM = (SegmentedSieve::kMaxLimit - 3) / 2;

    explicit SeriesEngine(Options opt) : opt_(std::move(opt)) {
        if (opt_.s_values.empty())
            throw DomainError("at least one exponent s is required");
        if (opt_.chunk == 0) throw DomainError("chunk must be positive");
        if (opt_.threads == 0) opt_.threads = 1;
    }

    const Options& options() const { return opt_; }

    State fresh() const {
        State st;
        st.tau.assign(opt_.s_values.size(), {});
        return st;
    }

    /// Extend the sums from st.next_n through m inclusive.
    void advance(State& st, std::uint64_t m) const {
        if (st.tau.size() != opt_.s_values.size())
            throw DomainError("state shape does not match the engine");
        if (m > kMaxM)
            throw SieveRange("m = " + std::to_string(m) +
                             " exceeds the series range (max " +
                             std::to_string(kMaxM) + ")");
        if (m < st.next_n) return;
        const SegmentedSieve sieve(2 * m + 3, opt_.span);
        const std::uint64_t first = st.next_n;
        const std::uint64_t c0 = (first - 1) / opt_.chunk;
        const std::uint64_t c1 = (m - 1) / opt_.chunk;
        struct Part {
            std::uint64_t twins = 0;
            std::vector<NeumaierSum> tau;
        };
        std::vector<Part> parts(static_cast<std::size_t>(c1 - c0 + 1));
        std::atomic<std::uint64_t> next{c0};
        auto worker = [&] {
            for (;;) {
                const std::uint64_t c = next.fetch_add(1);
                if (c > c1) break;
                const std::uint64_t lo = std::max(first, 1 + c * opt_.chunk);
                const std::uint64_t hi = std::min(m, (c + 1) * opt_.chunk);
                Part& part = parts[static_cast<std::size_t>(c - c0)];
                part.tau.assign(opt_.s_values.size(), {});
                run_block(sieve, lo, hi, part.twins, part.tau);
            }
        };
        if (opt_.threads <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(opt_.threads);
            for (unsigned t = 0; t < opt_.threads; ++t)
                pool.emplace_back(worker);
            for (std::thread& t : pool) t.join();
        }
        for (const Part& part : parts) {
            st.twin_hits += part.twins;
            for (std::size_t i = 0; i < st.tau.size(); ++i)
                st.tau[i].merge(part.tau[i]);
        }
        st.next_n = m + 1;
    }

   private:
    void run_block(const SegmentedSieve& sieve, std::uint64_t n_lo,
                   std::uint64_t n_hi, std::uint64_t& twins,
                   std::vector<NeumaierSum>& tau) const {
        Factorization prev;
        bool have = false;
        sieve.for_each_odd_factored(
            2 * n_lo + 1, 2 * n_hi + 3, [&](const Factorization& f) {
                if (!have) {
                    prev = f;
                    have = true;
                    return;
                }
                const std::uint64_t n = (prev.value - 1) / 2;
                if (prev.is_prime() && f.is_prime()) {
                    ++twins;
                } else {
                    const double det = det_A(n, prev, f);
                    for (std::size_t i = 0; i < opt_.s_values.size(); ++i)
                        tau[i].add(summand_F(opt_.s_values[i], n, det));
                }
                prev = f;
            });
    }

    Options opt_;
};

struct OmegaPartial {
    double omega;       // pi2 + tau
    std::uint64_t pi2;  // twin pairs with larger prime <= 2m+3
    double tau;
};

/// One-shot partial sum of the series at exponent s through index m.
inline OmegaPartial omega_partial(double s, std::uint64_t m,
                                  SeriesEngine::Options opt = {}) {
    opt.s_values = {s};
    SeriesEngine eng(opt);
    SeriesEngine::State st = eng.fresh();
    eng.advance(st, m);
    const double tau = st.tau[0].value();
    return {static_cast<double>(st.twin_hits) + tau, st.twin_hits, tau};
}

struct TableRow {
    int log10_m;
    std::uint64_t m;
    std::uint64_t pi2;
    double tau1, tau2, tau3;
};

/**
 * Rows (log10 m, pi2(2m+3), tau(1,m), tau(2,m), tau(3,m)) for
 * m = 10, 100, ..., 10^max_exp, computed in one continued pass.
 */
inline std::vector<TableRow> reproduce_table(
    int max_exp, SeriesEngine::Options opt = {},
    const std::function<void(const TableRow&)>& on_row = {}) {
    if (max_exp < 1) throw DomainError("the table needs max_exp >= 1");
    opt.s_values = {1.0, 2.0, 3.0};
    SeriesEngine eng(opt);
    SeriesEngine::State st = eng.fresh();
    std::vector<TableRow> rows;
    std::uint64_t m = 1;
    for (int e = 1; e <= max_exp; ++e) {
        m *= 10;
        eng.advance(st, m);
        TableRow row{e,
                     m,
                     st.twin_hits,
                     st.tau[0].value(),
                     st.tau[1].value(),
                     st.tau[2].value()};
        if (on_row) on_row(row);
        rows.push_back(row);
    }
    return rows;
}

/// 15 significant digits, the round-trip precision the text formats use.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline void write_table_csv(std::ostream& os,
                            const std::vector<TableRow>& rows) {
    os << "log10_m,pi2,tau1,tau2,tau3\n";
    for (const TableRow& r : rows)
        os << r.log10_m << "," << r.pi2 << "," << format_double(r.tau1) << ","
           << format_double(r.tau2) << "," << format_double(r.tau3) << "\n";
}

/// Checkpoint: engine configuration echo plus exact (hexfloat) accumulator
/// state. advance() is deterministic in (state, m), so save + load + advance
/// continues bit-identically to a run that never stopped at the save point
/// with the same milestones.
inline void save_checkpoint(std::ostream& os, const SeriesEngine::Options& opt,
                            const SeriesEngine::State& st) {
    os << "modsphere-series 1\n";
    os << "chunk " << opt.chunk << "\n";
    os << "next_n " << st.next_n << "\n";
    os << "twin_hits " << st.twin_hits << "\n";
    os << std::hexfloat;
    for (std::size_t i = 0; i < opt.s_values.size(); ++i)
        os << "acc " << opt.s_values[i] << " " << st.tau[i].sum << " "
           << st.tau[i].carry << "\n";
    os.unsetf(std::ios_base::floatfield);
}

inline SeriesEngine::State load_checkpoint(std::istream& is,
                                           const SeriesEngine::Options& opt) {
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "modsphere-series" ||
        version != 1)
        throw Error("unrecognized checkpoint header");
    std::string key;
    std::uint64_t chunk = 0;
    SeriesEngine::State st;
    if (!(is >> key >> chunk) || key != "chunk")
        throw Error("malformed checkpoint: expected chunk");
    if (!(is >> key >> st.next_n) || key != "next_n")
        throw Error("malformed checkpoint: expected next_n");
    if (!(is >> key >> st.twin_hits) || key != "twin_hits")
        throw Error("malformed checkpoint: expected twin_hits");
    std::vector<double> s_seen;
    std::string s_tok, sum_tok, carry_tok;
    while (is >> key) {
        if (key != "acc") throw Error("malformed checkpoint: expected acc");
        if (!(is >> s_tok >> sum_tok >> carry_tok))
            throw Error("malformed checkpoint: truncated acc line");
        NeumaierSum acc;
        s_seen.push_back(std::stod(s_tok));
        acc.sum = std::stod(sum_tok);
        acc.carry = std::stod(carry_tok);
        st.tau.push_back(acc);
    }
    if (chunk != opt.chunk || s_seen != opt.s_values)
        throw Error("checkpoint does not match the engine configuration");
    return st;
}

inline void save_checkpoint_file(const std::string& path,
                                 const SeriesEngine::Options& opt,
                                 const SeriesEngine::State& st) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write checkpoint file " + path);
    save_checkpoint(os, opt, st);
    if (!os.good()) throw Error("failed writing checkpoint file " + path);
}

inline SeriesEngine::State load_checkpoint_file(
    const std::string& path, const SeriesEngine::Options& opt) {
    std::ifstream is(path);
    if (!is) throw Error("cannot read checkpoint file " + path);
    return load_checkpoint(is, opt);
}

/**
 * Prefix sums P[k] = sum_{n <= k} of the omega summand at exponent s
 * (twin indices counting 1). P[0] = 0. Each entry is the value of one
 * compensated accumulator, so block differences stay accurate.
 */
inline std::vector<double> omega_prefix(
    double s, std::uint64_t n_hi,
    std::uint64_t span = SegmentedSieve::kDefaultSpan) {
    if (n_hi < 1) throw DomainError("prefix needs n_hi >= 1");
    if (n_hi > SeriesEngine::kMaxM)
        throw SieveRange("prefix range exceeds the series range");
    const SegmentedSieve sieve(2 * n_hi + 3, span);
    std::vector<double> prefix(n_hi + 1, 0.0);
    Factorization prev;
    bool have = false;
    NeumaierSum acc;
    sieve.for_each_odd_factored(3, 2 * n_hi + 3, [&](const Factorization& f) {
        if (!have) {
            prev = f;
            have = true;
            return;
        }
        const std::uint64_t n = (prev.value - 1) / 2;
        acc.add(omega_summand(s, n, det_A(n, prev, f)));
        prefix[n] = acc.value();
        prev = f;
    });
    return prefix;
}

struct ConjectureReport {
    std::uint64_t m;
    double lhs;
    double rhs;
    bool holds;  // lhs < rhs
};

/// Conjectured lower bound (a): 1 + tau(3) < sum_{n=m}^{2m} omega summands
/// at s = 3, checked for every m in [m_lo, m_hi].
inline std::vector<ConjectureReport> check_conjecture_a(
    std::uint64_t m_lo, std::uint64_t m_hi, double tau3 = kTau3Reference,
    std::uint64_t span = SegmentedSieve::kDefaultSpan) {
    if (m_lo < 1 || m_hi < m_lo) throw DomainError("need 1 <= m_lo <= m_hi");
    const std::vector<double> prefix = omega_prefix(3.0, 2 * m_hi, span);
    std::vector<ConjectureReport> out;
    out.reserve(m_hi - m_lo + 1);
    for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
        const double rhs = prefix[2 * m] - prefix[m - 1];
        const double lhs = 1.0 + tau3;
        out.push_back({m, lhs, rhs, lhs < rhs});
    }
    return out;
}

/// Conjectured lower bound (b): sum_{n=m}^{2m} 1/log^2(n+1) < the same
/// block sum at exponent s.
inline std::vector<ConjectureReport> check_conjecture_b(
    double s, std::uint64_t m_lo, std::uint64_t m_hi,
    std::uint64_t span = SegmentedSieve::kDefaultSpan) {
    if (m_lo < 1 || m_hi < m_lo) throw DomainError("need 1 <= m_lo <= m_hi");
    const std::vector<double> prefix = omega_prefix(s, 2 * m_hi, span);
    std::vector<double> logp(2 * m_hi + 1, 0.0);
    NeumaierSum acc;
    for (std::uint64_t n = 1; n <= 2 * m_hi; ++n) {
        const double l = std::log(static_cast<double>(n + 1));
        acc.add(1.0 / (l * l));
        logp[n] = acc.value();
    }
    std::vector<ConjectureReport> out;
    out.reserve(m_hi - m_lo + 1);
    for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
        const double lhs = logp[2 * m] - logp[m - 1];
        const double rhs = prefix[2 * m] - prefix[m - 1];
        out.push_back({m, lhs, rhs, lhs < rhs});
    }
    return out;
}

namespace detail {

template <class F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(const F& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

struct HlEstimate {
    double x;
    double c2;             // twin prime constant
    double closed_form;    // 2 C2 x / log^2 x
    double integral_form;  // 2 C2 times the integral of dt/log^2 t over [2, x]
    std::uint64_t cutoff;  // prime cutoff used for the C2 product
};

/**
 * Hardy-Littlewood style estimate of the twin count up to x. The constant
 * is the Euler product over odd primes up to a cutoff P chosen so the
 * truncation of log C2, about 1/(P log P), is below tail_tol.
 */
inline HlEstimate hl_estimate(double x, double tail_tol = 1e-10) {
    if (!(x > 4.0)) throw DomainError("estimate needs x > 4");
    if (!(tail_tol > 0)) throw DomainError("tail tolerance must be positive");
    std::uint64_t cutoff = 1ull << 16;
    while (cutoff < (1ull << 31) &&
           1.0 / (static_cast<double>(cutoff) *
                  std::log(static_cast<double>(cutoff))) > tail_tol)
        cutoff <<= 1;
    const SegmentedSieve sieve(cutoff);
    NeumaierSum lg;
    sieve.for_each_prime(3, cutoff, [&](std::uint64_t p) {
        const double d = static_cast<double>(p) - 1.0;
        lg.add(std::log1p(-1.0 / (d * d)));
    });
    const double c2 = std::exp(lg.value());
    const double lx = std::log(x);
    const double closed = 2.0 * c2 * x / (lx * lx);
    const auto f = [](double t) {
        const double l = std::log(t);
        return 1.0 / (l * l);
    };
    const double integral =
        2.0 * c2 * detail::integrate(f, 2.0, x, 1e-12 * std::max(1.0, closed));
    return {x, c2, closed, integral, cutoff};
}

}  // namespace modsphere
