#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "modsphere/fit.hpp"
#include "modsphere/series.hpp"

using namespace modsphere;

namespace {

double rational_to_double(const Rational& r) { return to_double(r); }

struct PaperRow {
    std::uint64_t pi2;
    double tau1, tau2, tau3;
};

// the reference values the table rows must land on
const PaperRow kReference[] = {
    {4, 3.225, 1.238501511411617, 0.424789649215940},
    {15, 18.619, 2.088852995430603, 0.472943322728998},
    {61, 65.555, 2.305530261242241, 0.473970392946628},
};

}  // namespace

TEST(EulerFactor, FloatAndExact) {
    EXPECT_DOUBLE_EQ(euler_factor(3.0), 9.0 / 8.0);
    EXPECT_EQ(euler_factor_exact(3), Rational(9, 8));
    EXPECT_EQ(euler_factor_exact(5), Rational(25, 24));
    EXPECT_EQ(euler_factor_exact(7), Rational(49, 48));
}

TEST(DetA, TwinIndicesVanishExactly) {
    // n = 1, 2, 8 give the twin pairs (3,5), (5,7), (17,19)
    for (std::uint64_t n : {1ull, 2ull, 8ull}) {
        const Factorization f1 = factorize(2 * n + 1);
        const Factorization f2 = factorize(2 * n + 3);
        ASSERT_TRUE(f1.is_prime() && f2.is_prime());
        EXPECT_EQ(det_A(n, f1, f2), 0.0);
        EXPECT_EQ(det_A_exact(n, f1, f2), Rational(0));
    }
}

TEST(DetA, KnownExactValue) {
    // n = 3: the pair (7, 9) gives det = (49/48)(9/8 - 81/80) = 147/1280
    const Factorization f1 = factorize(7), f2 = factorize(9);
    const Rational exact = det_A_exact(3, f1, f2);
    EXPECT_EQ(exact, Rational(147, 1280));
    const double f = det_A(3, f1, f2);
    EXPECT_NEAR(f, 147.0 / 1280.0, 1e-15);
    const TwinMatrix t = twin_matrix(3, f1, f2);
    EXPECT_EQ(t.p1, 7u);
    EXPECT_EQ(t.p2, 9u);
    EXPECT_FALSE(t.twin);
    EXPECT_NEAR(t.det, f, 0.0);
    EXPECT_NEAR(t.prod_e1, 49.0 / 48.0, 1e-15);
    EXPECT_NEAR(t.prod_e2, 9.0 / 8.0, 1e-15);
}

TEST(DetA, FloatTracksExactAudit) {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::uint64_t> dist(1, 1000000);
    int checked = 0;
    while (checked < 2000) {
        const std::uint64_t n = dist(rng);
        const Factorization f1 = factorize(2 * n + 1);
        const Factorization f2 = factorize(2 * n + 3);
        if (f1.is_prime() && f2.is_prime()) continue;
        const double f = det_A(n, f1, f2);
        const double x = rational_to_double(det_A_exact(n, f1, f2));
        ASSERT_NEAR(f, x, std::abs(x) * 1e-12) << "n=" << n;
        ++checked;
    }
}

TEST(DetA, GuardsMalformedInput) {
    EXPECT_THROW(det_A(0, factorize(1), factorize(3)), DomainError);
    EXPECT_THROW(det_A(3, factorize(9), factorize(7)), BadFactorization);
    EXPECT_THROW(det_A_exact(4, factorize(7), factorize(9)),
                 BadFactorization);
}

TEST(Summand, KnownValues) {
    const double det3 = det_A(3, factorize(7), factorize(9));
    EXPECT_NEAR(summand_F(3.0, 3, det3), 1280.0 / 5249.0, 1e-15);
    EXPECT_EQ(summand_F(3.0, 1, 0.0), 0.0);
    EXPECT_EQ(omega_summand(3.0, 1, 0.0), 1.0);
    EXPECT_EQ(omega_summand(3.0, 3, det3), summand_F(3.0, 3, det3));
}

TEST(Table, ReproducesReferenceRows) {
    const std::vector<TableRow> rows = reproduce_table(3);
    ASSERT_EQ(rows.size(), 3u);
    std::uint64_t m = 1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        m *= 10;
        EXPECT_EQ(rows[i].log10_m, static_cast<int>(i) + 1);
        EXPECT_EQ(rows[i].m, m);
        EXPECT_EQ(rows[i].pi2, kReference[i].pi2);
        EXPECT_NEAR(rows[i].tau1, kReference[i].tau1, 1e-2);
        EXPECT_NEAR(rows[i].tau2, kReference[i].tau2, 1e-12);
        EXPECT_NEAR(rows[i].tau3, kReference[i].tau3, 1e-12);
        EXPECT_GT(rows[i].tau1, rows[i].tau2);
        EXPECT_GT(rows[i].tau2, rows[i].tau3);
    }
    EXPECT_EQ(rows[2].pi2, twin_count(2003));
}

TEST(Table, RowCallbackAndCsv) {
    int called = 0;
    const std::vector<TableRow> rows =
        reproduce_table(2, {}, [&](const TableRow&) { ++called; });
    EXPECT_EQ(called, 2);
    std::ostringstream os;
    write_table_csv(os, rows);
    const std::string text = os.str();
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "log10_m,pi2,tau1,tau2,tau3");
    EXPECT_NE(text.find("\n1,4,"), std::string::npos);
    EXPECT_NE(text.find("\n2,15,"), std::string::npos);
}

TEST(OmegaPartial, SplitsIntoTwinAndTauParts) {
    const OmegaPartial part = omega_partial(3.0, 1000);
    EXPECT_EQ(part.pi2, twin_count(2003));
    EXPECT_DOUBLE_EQ(part.omega, static_cast<double>(part.pi2) + part.tau);
    EXPECT_NEAR(part.tau, kReference[2].tau3, 1e-12);
}

TEST(SeriesEngine, DeterministicAcrossThreadCounts) {
    SeriesEngine::Options opt;
    opt.chunk = 1 << 10;
    opt.threads = 1;
    SeriesEngine one(opt);
    opt.threads = 4;
    SeriesEngine four(opt);
    SeriesEngine::State a = one.fresh(), b = four.fresh();
    one.advance(a, 20000);
    four.advance(b, 20000);
    EXPECT_EQ(a.twin_hits, b.twin_hits);
    ASSERT_EQ(a.tau.size(), b.tau.size());
    for (std::size_t i = 0; i < a.tau.size(); ++i) {
        EXPECT_EQ(a.tau[i].sum, b.tau[i].sum) << "s index " << i;
        EXPECT_EQ(a.tau[i].carry, b.tau[i].carry) << "s index " << i;
    }
}

TEST(SeriesEngine, IncrementalAdvanceMatchesOneShot) {
    SeriesEngine::Options opt;
    opt.chunk = 1 << 10;
    const SeriesEngine eng(opt);
    SeriesEngine::State steps = eng.fresh(), oneshot = eng.fresh();
    eng.advance(steps, 100);
    eng.advance(steps, 5000);
    eng.advance(steps, 20000);
    eng.advance(oneshot, 20000);
    EXPECT_EQ(steps.twin_hits, oneshot.twin_hits);
    for (std::size_t i = 0; i < steps.tau.size(); ++i)
        EXPECT_EQ(steps.tau[i].value(), oneshot.tau[i].value());
}

TEST(SeriesEngine, Guards) {
    SeriesEngine::Options opt;
    opt.s_values.clear();
    EXPECT_THROW(SeriesEngine{opt}, DomainError);
    opt = {};
    opt.chunk = 0;
    EXPECT_THROW(SeriesEngine{opt}, DomainError);
    opt = {};
    const SeriesEngine eng(opt);
    SeriesEngine::State st = eng.fresh();
    EXPECT_THROW(eng.advance(st, SeriesEngine::kMaxM + 1), SieveRange);
    st.tau.clear();
    EXPECT_THROW(eng.advance(st, 10), DomainError);
}

TEST(Checkpoint, ResumedRunIsBitIdentical) {
    SeriesEngine::Options opt;
    opt.chunk = 1 << 10;
    const SeriesEngine eng(opt);

    SeriesEngine::State uninterrupted = eng.fresh();
    eng.advance(uninterrupted, 5000);
    std::stringstream store;
    save_checkpoint(store, eng.options(), uninterrupted);
    eng.advance(uninterrupted, 20000);

    SeriesEngine::State resumed = load_checkpoint(store, eng.options());
    eng.advance(resumed, 20000);

    EXPECT_EQ(resumed.next_n, uninterrupted.next_n);
    EXPECT_EQ(resumed.twin_hits, uninterrupted.twin_hits);
    for (std::size_t i = 0; i < resumed.tau.size(); ++i) {
        EXPECT_EQ(resumed.tau[i].sum, uninterrupted.tau[i].sum);
        EXPECT_EQ(resumed.tau[i].carry, uninterrupted.tau[i].carry);
    }
}

TEST(Checkpoint, RejectsMismatchedConfiguration) {
    SeriesEngine::Options opt;
    opt.chunk = 1 << 10;
    const SeriesEngine eng(opt);
    SeriesEngine::State st = eng.fresh();
    eng.advance(st, 100);

    std::stringstream store;
    save_checkpoint(store, eng.options(), st);
    SeriesEngine::Options other = opt;
    other.chunk = 1 << 11;
    EXPECT_THROW(load_checkpoint(store, other), Error);

    std::stringstream different_s;
    save_checkpoint(different_s, eng.options(), st);
    other = opt;
    other.s_values = {2.0};
    EXPECT_THROW(load_checkpoint(different_s, other), Error);

    std::stringstream garbage("not-a-checkpoint 9");
    EXPECT_THROW(load_checkpoint(garbage, opt), Error);
}

TEST(Checkpoint, FileRoundTrip) {
    const std::string path = testing::TempDir() + "modsphere_ckpt_test.txt";
    SeriesEngine::Options opt;
    opt.chunk = 1 << 10;
    const SeriesEngine eng(opt);
    SeriesEngine::State st = eng.fresh();
    eng.advance(st, 1234);
    save_checkpoint_file(path, eng.options(), st);
    const SeriesEngine::State back = load_checkpoint_file(path, eng.options());
    EXPECT_EQ(back.next_n, st.next_n);
    EXPECT_EQ(back.twin_hits, st.twin_hits);
    for (std::size_t i = 0; i < st.tau.size(); ++i)
        EXPECT_EQ(back.tau[i].value(), st.tau[i].value());
    EXPECT_THROW(load_checkpoint_file("/nonexistent/ckpt", eng.options()),
                 Error);
}

TEST(OmegaPrefix, MatchesDirectSummation) {
    const std::vector<double> prefix = omega_prefix(3.0, 60);
    ASSERT_EQ(prefix.size(), 61u);
    EXPECT_EQ(prefix[0], 0.0);
    NeumaierSum acc;
    for (std::uint64_t n = 1; n <= 60; ++n) {
        const Factorization f1 = factorize(2 * n + 1);
        const Factorization f2 = factorize(2 * n + 3);
        acc.add(omega_summand(3.0, n, det_A(n, f1, f2)));
        ASSERT_NEAR(prefix[n], acc.value(), 1e-15) << "n=" << n;
        ASSERT_GE(prefix[n], prefix[n - 1]);
    }
}

TEST(Conjectures, ScansReportBlockBounds) {
    const std::vector<ConjectureReport> a = check_conjecture_a(10, 100);
    ASSERT_EQ(a.size(), 91u);
    for (const ConjectureReport& r : a) {
        EXPECT_DOUBLE_EQ(r.lhs, 1.0 + kTau3Reference);
        EXPECT_TRUE(r.holds) << "m=" << r.m;
        EXPECT_LT(r.lhs, r.rhs);
    }
    EXPECT_EQ(a.front().m, 10u);
    EXPECT_EQ(a.back().m, 100u);

    for (double s : {2.0, 3.0}) {
        const std::vector<ConjectureReport> b = check_conjecture_b(s, 10, 60);
        for (const ConjectureReport& r : b)
            EXPECT_TRUE(r.holds) << "s=" << s << " m=" << r.m;
    }
    EXPECT_THROW(check_conjecture_a(0, 10), DomainError);
    EXPECT_THROW(check_conjecture_b(3.0, 20, 10), DomainError);
}

TEST(HardyLittlewood, TwinConstantAndForms) {
    const HlEstimate est = hl_estimate(2000003.0, 1e-7);
    EXPECT_NEAR(est.c2, 0.660161815846869, 1e-6);
    EXPECT_EQ(est.cutoff, 1ull << 20);
    const double lx = std::log(est.x);
    EXPECT_DOUBLE_EQ(est.closed_form, 2.0 * est.c2 * est.x / (lx * lx));
    EXPECT_GT(est.integral_form, est.closed_form);
    // the integral form tracks the true count to about a percent here
    EXPECT_NEAR(est.integral_form / 14871.0, 1.0, 0.05);
    EXPECT_NEAR(est.closed_form / 14871.0, 0.85, 0.1);
    EXPECT_THROW(hl_estimate(4.0), DomainError);
    EXPECT_THROW(hl_estimate(10.0, 0.0), DomainError);
}

TEST(FormatDouble, FifteenSignificantDigits) {
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(0.474004103627), "0.474004103627");
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int rep = 0; rep < 100; ++rep) {
        const double v = dist(rng);
        const double back = std::stod(format_double(v));
        EXPECT_NEAR(back, v, std::abs(v) * 1e-14);
    }
}

TEST(ModelFitting, RecoversSyntheticCoefficients) {
    const double a = 2.47299, b = 1.63688, c = 0.325582;
    std::vector<std::pair<double, double>> pts;
    for (int x = 1; x <= 10; ++x)
        pts.push_back({static_cast<double>(x),
                       a - b / (static_cast<double>(x) * x + c)});
    const ModelFit fit = fit_shifted_inverse_square(pts);
    EXPECT_NEAR(fit.a, a, 1e-6);
    EXPECT_NEAR(fit.b, b, 1e-6);
    EXPECT_NEAR(fit.c, c, 1e-6);
    EXPECT_LT(fit.rss, 1e-18);
}

TEST(ModelFitting, ToleratesMildNoise) {
    const double a = 2.47299, b = 1.63688, c = 0.325582;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> noise(-1e-5, 1e-5);
    std::vector<std::pair<double, double>> pts;
    for (int x = 1; x <= 12; ++x)
        pts.push_back({static_cast<double>(x),
                       a - b / (static_cast<double>(x) * x + c) + noise(rng)});
    const ModelFit fit = fit_shifted_inverse_square(pts);
    EXPECT_NEAR(fit.a, a, 1e-3);
    EXPECT_NEAR(fit.b, b, 1e-2);
    EXPECT_NEAR(fit.c, c, 1e-2);
}

TEST(ModelFitting, RejectsUnderdeterminedInput) {
    std::vector<std::pair<double, double>> three{
        {1.0, 1.0}, {2.0, 2.0}, {3.0, 2.5}};
    EXPECT_THROW(fit_shifted_inverse_square(three), SingularFit);
}
