#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "modsphere/modsphere.hpp"

using namespace modsphere;

namespace {

void report(int criterion, bool ok, const std::string& detail) {
    std::cout << "[ACCEPT] criterion " << criterion << ": "
              << (ok ? "PASS" : "FAIL") << " - " << detail << std::endl;
    EXPECT_TRUE(ok) << "criterion " << criterion << ": " << detail;
}

// computed once, shared between the table and fit criteria
const std::vector<TableRow>& decade_rows(double* seconds = nullptr) {
    static double elapsed = 0.0;
    static const std::vector<TableRow> rows = [] {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<TableRow> r = reproduce_table(6);
        elapsed = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        return r;
    }();
    if (seconds) *seconds = elapsed;
    return rows;
}

const std::uint64_t kPaperPi2[6] = {4, 15, 61, 342, 2160, 14871};
const double kPaperTau1[6] = {3.225,   18.619,  65.555,
                              229.208, 982.657, 5166.336};
const double kPaperTau2[6] = {1.238501511411617, 2.088852995430603,
                              2.305530261242241, 2.377134528816283,
                              2.409562315521043, 2.427525024274653};
const double kPaperTau3[6] = {0.424789649215940, 0.472943322728998,
                              0.473970392946628, 0.474002620057820,
                              0.474004021326231, 0.474004098679028};

const char* kClassicRows[12] = {
    "HIJKABCDUVWX", "IHKJBADCVUXW", "JKHICDABWXUV", "KJIHDCBAXWVU",
    "ACDBWUVXKIHJ", "BDCAXVUWJHIK", "CABDUWXVIKJH", "DBACVXWUHJKI",
    "UXVWJIKHDACB", "VWUXKHJICBDA", "WVXUHKIJBCAD", "XUWVIJHKADBC"};

std::string fmt(double v) { return format_double(v); }

}  // namespace

TEST(Acceptance, Criterion1TableReproduction) {
    double seconds = 0.0;
    const std::vector<TableRow>& rows = decade_rows(&seconds);
    bool ok = rows.size() == 6;
    double e1 = 0, e2 = 0, e3 = 0;
    for (std::size_t i = 0; ok && i < 6; ++i) {
        if (rows[i].pi2 != kPaperPi2[i]) ok = false;
        e1 = std::max(e1, std::abs(rows[i].tau1 - kPaperTau1[i]));
        e2 = std::max(e2, std::abs(rows[i].tau2 - kPaperTau2[i]));
        e3 = std::max(e3, std::abs(rows[i].tau3 - kPaperTau3[i]));
    }
    ok = ok && e1 <= 1e-2 && e2 <= 1e-9 && e3 <= 1e-9;
    std::ostringstream d;
    d << "m = 10..10^6 single-threaded in " << fmt(seconds)
      << " s; pi2 " << (ok ? "exact" : "MISMATCH") << "; max errors tau1 "
      << fmt(e1) << ", tau2 " << fmt(e2) << ", tau3 " << fmt(e3);
    report(1, ok, d.str());
}

TEST(Acceptance, Criterion2CountingOracleEquivalence) {
    bool ok = true;
    std::uint64_t first_bad = 0;
    for (std::uint64_t n = 1; n <= 500 && ok; ++n)
        if (r4_bruteforce(n) != r4_formula(n)) {
            ok = false;
            first_bad = n;
        }
    std::ostringstream d;
    d << "r4 enumeration vs formula exhaustive n <= 500";
    if (!ok) d << "; first mismatch at n = " << first_bad;
    report(2, ok, d.str());
}

TEST(Acceptance, Criterion3PrimalityCriterion) {
    bool ok = true;
    std::uint64_t first_bad = 0;
    for (std::uint64_t n = 3; n <= 2000 && ok; n += 2)
        if (prime_test_sphere(n) != is_prime(n)) {
            ok = false;
            first_bad = n;
        }
    std::ostringstream d;
    d << "prime_test_sphere vs Miller-Rabin, odd n <= 2000";
    if (!ok) d << "; first mismatch at n = " << first_bad;
    report(3, ok, d.str());
}

TEST(Acceptance, Criterion4TwinCriterion) {
    bool ok = true;
    std::uint64_t first_bad = 0;
    for (std::uint64_t n = 3; n <= 2000 && ok; n += 2)
        if (twin_test_sphere(n) != (is_prime(n) && is_prime(n + 2))) {
            ok = false;
            first_bad = n;
        }
    std::ostringstream d;
    d << "exact rational twin criterion vs Miller-Rabin pair, odd n <= 2000";
    if (!ok) d << "; first mismatch at n = " << first_bad;
    report(4, ok, d.str());
}

TEST(Acceptance, Criterion5GroupAxiomsAndEmbeddings) {
    bool ok = true;
    std::string what = "exhaustive axioms at n = 3, 5";
    for (std::uint64_t n : {3u, 5u}) {
        std::vector<SpherePoint> pts;
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t b = 0; b < n; ++b)
                for (std::uint64_t c = 0; c < n; ++c)
                    for (std::uint64_t d = 0; d < n; ++d)
                        if ((a * a + b * b + c * c + d * d) % n == 1)
                            pts.push_back(SpherePoint::from_residues(
                                static_cast<std::int64_t>(a),
                                static_cast<std::int64_t>(b),
                                static_cast<std::int64_t>(c),
                                static_cast<std::int64_t>(d), n));
        const SpherePoint id = SpherePoint::identity(n);
        for (const SpherePoint& x : pts) {
            if (add(x, id) != x || add(id, x) != x) ok = false;
            if (add(x, neg(x)) != id || add(neg(x), x) != id) ok = false;
        }
        for (const SpherePoint& x : pts)
            for (const SpherePoint& y : pts) {
                // closure: the constructor inside add re-checks membership
                const SpherePoint xy = add(x, y);
                for (const SpherePoint& z : pts)
                    if (add(xy, z) != add(x, add(y, z))) {
                        ok = false;
                        what = "associativity failed at n = " +
                               std::to_string(n);
                    }
            }
        if (!ok) break;
    }
    int phi_checked = 0;
    if (ok) {
        std::mt19937_64 rng(2027);
        const std::uint64_t n = 1000000007;
        for (int rep = 0; rep < 10000; ++rep) {
            const SpherePoint x = random_point(rng, n);
            const SpherePoint y = random_point(rng, n);
            if (phi(add(x, y)) != phi(x) * phi(y)) {
                ok = false;
                what = "phi homomorphism failed";
                break;
            }
            if (theta(x).det() != GaussMod::one(n)) {
                ok = false;
                what = "theta determinant failed";
                break;
            }
            ++phi_checked;
        }
    }
    std::ostringstream d;
    d << what << "; phi/theta checks on " << phi_checked
      << " random pairs at n = 10^9+7";
    report(5, ok, d.str());
}

TEST(Acceptance, Criterion6ChebyshevOracle) {
    bool ok = true;
    std::string what;
    std::mt19937_64 rng(2028);
    for (std::uint64_t n : {3ull, 5ull, 7ull, 11ull}) {
        for (int rep = 0; rep < 50 && ok; ++rep) {
            const SpherePoint p = random_point(rng, n);
            SpherePoint acc = SpherePoint::identity(n);
            for (std::uint64_t k = 0; k <= 64; ++k) {
                if (scalar_mul(p, k) != acc) {
                    ok = false;
                    what = "scalar_mul vs iterated add failed at n = " +
                           std::to_string(n) + ", k = " + std::to_string(k);
                    break;
                }
                acc = add(acc, p);
            }
        }
        if (!ok) break;
    }
    if (ok) {
        const std::uint64_t n = 1000000007;
        std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
        const ModInt one(1, n), two(2, n);
        for (int rep = 0; rep < 4 && ok; ++rep) {
            const ModInt x(static_cast<std::int64_t>(dist(rng)), n);
            std::vector<ModInt> t{one, x}, u{one, two * x};
            for (std::size_t k = 2; k <= 260; ++k) {
                t.push_back(two * x * t[k - 1] - t[k - 2]);
                u.push_back(two * x * u[k - 1] - u[k - 2]);
            }
            for (std::size_t j = 1; j <= 128; ++j) {
                const ModInt a = x * u[j] - u[j - 1];
                const bool six =
                    t[2 * j] == two * t[j] * t[j] - one &&
                    t[2 * j + 1] == two * t[j + 1] * t[j] - x &&
                    t[2 * j + 2] == two * t[j + 1] * t[j + 1] - one &&
                    u[2 * j - 1] ==
                        two * a * (two * x * u[j - 1] - u[j]) + two * x &&
                    u[2 * j] == two * u[j - 1] * a + one &&
                    u[2 * j + 1] == two * u[j] * a;
                if (!six) {
                    ok = false;
                    what = "doubling identity failed at j = " +
                           std::to_string(j);
                    break;
                }
            }
        }
    }
    std::ostringstream d;
    d << "scalar_mul vs iterated add, k <= 64, n in {3,5,7,11}, 50 points "
         "each; six doubling identities mod 10^9+7";
    if (!ok) d << "; " << what;
    report(6, ok, d.str());
}

TEST(Acceptance, Criterion7StructureReports) {
    bool ok = true;
    std::string what;
    const FiniteGroupTable q3 = quotient_by_H(3);
    const std::string letters = "HIJKABCDUVWX";
    for (std::size_t i = 0; i < 12 && ok; ++i) {
        if (q3.label(i) != std::string(1, letters[i])) {
            ok = false;
            what = "label order mismatch";
        }
        for (std::size_t j = 0; j < 12 && ok; ++j)
            if (q3.mul(i, j) != letters.find(kClassicRows[i][j])) {
                ok = false;
                what = "table cell (" + q3.label(i) + ", " + q3.label(j) +
                       ") mismatch";
            }
    }
    if (ok) {
        const auto m4 = is_isomorphic(q3, alternating_group(4));
        if (!m4) {
            ok = false;
            what = "A4 isomorphism not found";
        }
    }
    if (ok) {
        const auto m5 = is_isomorphic(quotient_by_H(5), alternating_group(5));
        if (!m5) {
            ok = false;
            what = "A5 isomorphism not found";
        }
    }
    if (ok) {
        const CircleCosetReport r = circle_coset_report(3);
        if (r.circle_order != 4 || r.sphere2_count != 6 ||
            r.coset_count != 6 || !r.partition_verified) {
            ok = false;
            what = "coset report at p = 3 mismatch";
        }
    }
    std::ostringstream d;
    d << "quotient(3) matches the classical 12x12 table cell-for-cell; A4 "
         "and A5 isomorphisms found; coset report (4, 6, 6)";
    if (!ok) d << "; " << what;
    report(7, ok, d.str());
}

TEST(Acceptance, Criterion8SeriesInternals) {
    bool ok = true;
    std::string what;
    // sample indices for the float-vs-exact audit
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::uint64_t> dist(1, 1000000);
    std::unordered_set<std::uint64_t> wanted;
    while (wanted.size() < 12000) wanted.insert(dist(rng));

    const double kDetBound = 0.6449340668482264;  // pi^2/6 - 1
    std::uint64_t audited = 0, scanned = 0;
    double max_rel = 0.0;
    const SegmentedSieve sieve(2 * 1000000 + 3);
    Factorization prev;
    bool have = false;
    sieve.for_each_odd_factored(3, 2 * 1000000 + 3, [&](const Factorization& f) {
        if (!have) {
            prev = f;
            have = true;
            return;
        }
        const std::uint64_t n = (prev.value - 1) / 2;
        if (!(prev.is_prime() && f.is_prime())) {
            const double det = det_A(n, prev, f);
            const double nn = static_cast<double>(n);
            if (!(det > 0.0 && det < kDetBound)) {
                ok = false;
                what = "det bound violated at n = " + std::to_string(n);
            }
            if (!(summand_F(3.0, n, det) < 3.0 / (nn * nn))) {
                ok = false;
                what = "summand bound violated at n = " + std::to_string(n);
            }
            ++scanned;
            if (wanted.count(n)) {
                const double exact = to_double(det_A_exact(n, prev, f));
                const double rel = std::abs(det - exact) / std::abs(exact);
                max_rel = std::max(max_rel, rel);
                ++audited;
            }
        }
        prev = f;
    });
    ok = ok && audited >= 10000 && max_rel <= 1e-12;

    // determinism across thread counts
    bool deterministic = true;
    {
        SeriesEngine::Options opt;
        opt.chunk = 1 << 14;
        opt.threads = 1;
        const SeriesEngine one(opt);
        opt.threads = 4;
        const SeriesEngine four(opt);
        SeriesEngine::State a = one.fresh(), b = four.fresh();
        one.advance(a, 100000);
        four.advance(b, 100000);
        deterministic = a.twin_hits == b.twin_hits;
        for (std::size_t i = 0; i < a.tau.size(); ++i)
            deterministic = deterministic && a.tau[i].sum == b.tau[i].sum &&
                            a.tau[i].carry == b.tau[i].carry;
    }
    ok = ok && deterministic;
    std::ostringstream d;
    d << "float det audited against exact rationals on " << audited
      << " sampled non-twin n (max rel err " << fmt(max_rel)
      << "); bounds 0 < det < pi^2/6 - 1 and F(3,n) < 3/n^2 on " << scanned
      << " non-twin n <= 10^6; thread counts 1 and 4 bit-identical: "
      << (deterministic ? "yes" : "NO");
    if (!ok && !what.empty()) d << "; " << what;
    report(8, ok, d.str());
}

TEST(Acceptance, Criterion9ModelFit) {
    const double a0 = 2.47299, b0 = 1.63688, c0 = 0.325582;
    std::vector<std::pair<double, double>> synth;
    for (int x = 1; x <= 10; ++x)
        synth.push_back({static_cast<double>(x),
                         a0 - b0 / (static_cast<double>(x) * x + c0)});
    const ModelFit sf = fit_shifted_inverse_square(synth);
    bool ok = std::abs(sf.a - a0) <= 1e-6 && std::abs(sf.b - b0) <= 1e-6 &&
              std::abs(sf.c - c0) <= 1e-6;

    std::vector<std::pair<double, double>> own;
    for (const TableRow& r : decade_rows())
        own.push_back({static_cast<double>(r.log10_m), r.tau2});
    const ModelFit of = fit_shifted_inverse_square(own);
    const bool in_window = std::abs(of.a - 2.47299) <= 0.15;
    std::ostringstream d;
    d << "synthetic recovery within 1e-6 (a err " << fmt(std::abs(sf.a - a0))
      << "); own-data fit over x = 1..6 gives a = " << fmt(of.a) << ", b = "
      << fmt(of.b) << ", c = " << fmt(of.c) << " (reference window 2.47299 "
      << "+/- 0.15: " << (in_window ? "inside" : "outside")
      << ", reported only)";
    report(9, ok, d.str());
}
