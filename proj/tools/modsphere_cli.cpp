#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modsphere/modsphere.hpp"

using nlohmann::json;
using namespace modsphere;

namespace {

std::uint64_t env_u64(const char* name, std::uint64_t fallback) {
    const char* raw = std::getenv(name);
    if (!raw || !*raw) return fallback;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || v == 0)
        throw Error(std::string(name) + " must be a positive integer");
    return v;
}

unsigned default_threads() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(
        env_u64("MODSPHERE_THREADS", hw));
}

std::uint64_t default_span() {
    return env_u64("MODSPHERE_SEGMENT_SPAN", SegmentedSieve::kDefaultSpan);
}

SpherePoint parse_point(const std::string& text, std::uint64_t mod) {
    std::vector<std::int64_t> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        parts.push_back(std::stoll(item, &used));
        if (used != item.size())
            throw CLI::ValidationError("point",
                                       "residues must be integers: " + item);
    }
    if (parts.size() != 4)
        throw CLI::ValidationError(
            "point", "expected four comma-separated residues, got " + text);
    return SpherePoint::from_residues(parts[0], parts[1], parts[2], parts[3],
                                      mod);
}

std::string point_str(const SpherePoint& p) {
    std::ostringstream os;
    os << p.x1().value() << "," << p.x2().value() << "," << p.x3().value()
       << "," << p.x4().value();
    return os.str();
}

json point_json(const SpherePoint& p) {
    return json::array(
        {p.x1().value(), p.x2().value(), p.x3().value(), p.x4().value()});
}

void emit(const std::string& text) { std::cout << text << "\n"; }

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

const char* method_name(CountMethod m) {
    switch (m) {
        case CountMethod::enumeration:
            return "enumeration";
        case CountMethod::formula:
            return "formula";
        default:
            return "both";
    }
}

// ----------------------------------------------------------------- count --

struct CountArgs {
    std::uint64_t n = 0;
    std::uint64_t limit = 3000;
    std::string method = "auto";
    std::string format = "text";
};

void run_count(const CountArgs& a) {
    CountMethod m;
    if (a.method == "enumeration")
        m = CountMethod::enumeration;
    else if (a.method == "formula")
        m = CountMethod::formula;
    else if (a.method == "both")
        m = CountMethod::both;
    else
        m = a.n <= a.limit ? CountMethod::both : CountMethod::formula;
    const CountReport rep = count_report(a.n, m, a.limit);
    const std::string r4 = rep.r4.str();
    if (a.format == "json") {
        json j{{"n", rep.n}, {"r4", r4}, {"method", method_name(rep.method)}};
        j["prime_criterion"] = rep.prime_criterion
                                   ? json(*rep.prime_criterion)
                                   : json(nullptr);
        emit_json(j);
    } else if (a.format == "csv") {
        emit("n,r4,method,prime_criterion");
        std::string crit = rep.prime_criterion
                               ? (*rep.prime_criterion ? "true" : "false")
                               : "";
        emit(std::to_string(rep.n) + "," + r4 + "," +
             method_name(rep.method) + "," + crit);
    } else {
        emit("n       " + std::to_string(rep.n));
        emit("r4      " + r4);
        emit(std::string("method  ") + method_name(rep.method));
        if (rep.prime_criterion)
            emit(std::string("prime by r4 = n^3 - n criterion: ") +
                 (*rep.prime_criterion ? "true" : "false"));
    }
}

// ------------------------------------------------------------ prime-test --

void run_prime_test(std::uint64_t n, const std::string& method,
                    std::uint64_t limit, const std::string& format) {
    CountMethod m = CountMethod::formula;
    if (method == "enumeration") m = CountMethod::enumeration;
    if (method == "both") m = CountMethod::both;
    const bool verdict = prime_test_sphere(n, m, limit);
    if (format == "json")
        emit_json(json{{"n", n},
                       {"method", method_name(m)},
                       {"prime_by_criterion", verdict}});
    else
        emit(std::to_string(n) + " prime by sphere criterion: " +
             (verdict ? "true" : "false"));
}

void run_twin_test(std::uint64_t n, const std::string& format) {
    const bool verdict = twin_test_sphere(n);
    if (format == "json")
        emit_json(json{{"n", n}, {"twin_by_criterion", verdict}});
    else
        emit("(" + std::to_string(n) + ", " + std::to_string(n + 2) +
             ") twin primes by exact criterion: " +
             (verdict ? "true" : "false"));
}

// ---------------------------------------------------------------- series --

struct SeriesArgs {
    double s = 3.0;
    std::uint64_t m = 0;
    unsigned threads = 1;
    std::uint64_t chunk = 1ull << 19;
    std::uint64_t span = SegmentedSieve::kDefaultSpan;
    std::string checkpoint;
    std::string format = "text";
};

void run_series(const SeriesArgs& a) {
    SeriesEngine::Options opt;
    opt.s_values = {a.s};
    opt.threads = a.threads;
    opt.chunk = a.chunk;
    opt.span = a.span;
    const SeriesEngine eng(opt);
    SeriesEngine::State st;
    bool resumed = false;
    if (!a.checkpoint.empty() && std::ifstream(a.checkpoint).good()) {
        st = load_checkpoint_file(a.checkpoint, opt);
        resumed = true;
        std::cerr << "resuming from checkpoint at n = " << st.next_n << "\n";
    } else {
        st = eng.fresh();
    }
    eng.advance(st, a.m);
    if (!a.checkpoint.empty()) {
        save_checkpoint_file(a.checkpoint, opt, st);
        std::cerr << "checkpoint saved to " << a.checkpoint << "\n";
    }
    const std::uint64_t m_eff = st.next_n - 1;
    if (resumed && m_eff > a.m)
        std::cerr << "checkpoint already covered n <= " << m_eff << "\n";
    const double tau = st.tau[0].value();
    const double omega = static_cast<double>(st.twin_hits) + tau;
    if (a.format == "json") {
        emit_json(json{{"s", a.s},
                       {"m", m_eff},
                       {"pi2", st.twin_hits},
                       {"tau", tau},
                       {"omega", omega}});
    } else if (a.format == "csv") {
        emit("s,m,pi2,tau,omega");
        emit(format_double(a.s) + "," + std::to_string(m_eff) + "," +
             std::to_string(st.twin_hits) + "," + format_double(tau) + "," +
             format_double(omega));
    } else {
        emit("s      " + format_double(a.s));
        emit("m      " + std::to_string(m_eff));
        emit("pi2    " + std::to_string(st.twin_hits));
        emit("tau    " + format_double(tau));
        emit("omega  " + format_double(omega));
    }
}

// ----------------------------------------------------------------- table --

struct TableArgs {
    int max_exp = 0;
    unsigned threads = 1;
    std::uint64_t chunk = 1ull << 19;
    std::uint64_t span = SegmentedSieve::kDefaultSpan;
    std::string format = "csv";
    std::string out;
};

void write_table(std::ostream& os, const std::vector<TableRow>& rows,
                 const std::string& format) {
    if (format == "csv") {
        write_table_csv(os, rows);
        return;
    }
    if (format == "json") {
        json arr = json::array();
        for (const TableRow& r : rows)
            arr.push_back(json{{"log10_m", r.log10_m},
                               {"pi2", r.pi2},
                               {"tau1", r.tau1},
                               {"tau2", r.tau2},
                               {"tau3", r.tau3}});
        os << json{{"rows", arr}}.dump(2) << "\n";
        return;
    }
    os << "log10(m)  pi2(2m+3)  tau(1,m)            tau(2,m)            "
          "tau(3,m)\n";
    for (const TableRow& r : rows) {
        std::ostringstream line;
        line << r.log10_m << "         " << r.pi2;
        std::string s = line.str();
        s.resize(21, ' ');
        s += format_double(r.tau1);
        s.resize(41, ' ');
        s += format_double(r.tau2);
        s.resize(61, ' ');
        s += format_double(r.tau3);
        os << s << "\n";
    }
}

void run_table(const TableArgs& a) {
    SeriesEngine::Options opt;
    opt.threads = a.threads;
    opt.chunk = a.chunk;
    opt.span = a.span;
    const std::vector<TableRow> rows =
        reproduce_table(a.max_exp, opt, [](const TableRow& r) {
            std::cerr << "decade " << r.log10_m << " done, pi2 = " << r.pi2
                      << "\n";
        });
    if (a.out.empty()) {
        write_table(std::cout, rows, a.format);
    } else {
        std::ofstream os(a.out);
        if (!os) throw Error("cannot write " + a.out);
        write_table(os, rows, a.format);
        std::cerr << "wrote " << a.out << "\n";
    }
}

// ----------------------------------------------------------------- group --

struct GroupArgs {
    std::uint64_t mod = 0;
    std::string point;
    std::string point2;
    std::string k = "1";
    std::string format = "text";
};

void run_group(const std::string& op, const GroupArgs& a) {
    const SpherePoint p = parse_point(a.point, a.mod);
    if (op == "mul") {
        const SpherePoint q = parse_point(a.point2, a.mod);
        const SpherePoint r = add(p, q);
        if (a.format == "json")
            emit_json(json{{"mod", a.mod},
                           {"op", "mul"},
                           {"point", point_json(p)},
                           {"point2", point_json(q)},
                           {"result", point_json(r)}});
        else
            emit(point_str(r));
        return;
    }
    if (op == "pow") {
        const BigInt k(a.k);
        const SpherePoint r = scalar_mul(p, k);
        if (a.format == "json")
            emit_json(json{{"mod", a.mod},
                           {"op", "pow"},
                           {"point", point_json(p)},
                           {"k", a.k},
                           {"result", point_json(r)}});
        else
            emit(point_str(r));
        return;
    }
    const std::uint64_t ord = element_order(p);
    if (a.format == "json")
        emit_json(json{{"mod", a.mod},
                       {"op", "order"},
                       {"point", point_json(p)},
                       {"result", ord}});
    else
        emit(std::to_string(ord));
}

// ------------------------------------------------------------- structure --

void run_quotient(std::uint32_t p, const std::string& format) {
    const FiniteGroupTable q = quotient_by_H(p);
    if (format == "json") {
        json table = json::array();
        for (std::size_t i = 0; i < q.size(); ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < q.size(); ++j)
                row.push_back(q.mul(i, j));
            table.push_back(std::move(row));
        }
        emit_json(json{{"p", p},
                       {"order", q.size()},
                       {"labels", q.labels()},
                       {"table", table}});
    } else {
        std::cout << q.to_text();
    }
}

void run_iso(std::uint32_t p, std::string with, const std::string& format) {
    const FiniteGroupTable q = quotient_by_H(p);
    if (with == "auto") {
        if (q.size() == 12)
            with = "a4";
        else if (q.size() == 60)
            with = "a5";
        else {
            if (format == "json")
                emit_json(json{{"p", p},
                               {"order", q.size()},
                               {"with", nullptr},
                               {"isomorphic", false},
                               {"note", "no alternating group of this order"}});
            else
                emit("quotient order " + std::to_string(q.size()) +
                     " matches no alternating group");
            return;
        }
    }
    const FiniteGroupTable target = alternating_group(with == "a4" ? 4 : 5);
    const auto map = is_isomorphic(q, target);
    if (format == "json") {
        json j{{"p", p},
               {"order", q.size()},
               {"with", with},
               {"isomorphic", map.has_value()}};
        if (map) {
            json mapping = json::object();
            for (std::size_t i = 0; i < q.size(); ++i)
                mapping[q.label(i)] = target.label((*map)[i]);
            j["mapping"] = std::move(mapping);
        }
        emit_json(j);
    } else if (map) {
        emit("isomorphic to " + with);
        for (std::size_t i = 0; i < q.size(); ++i)
            emit("  " + q.label(i) + " -> " + target.label((*map)[i]));
    } else {
        emit("not isomorphic to " + with);
    }
}

void run_cosets(std::uint32_t p, const std::string& format) {
    const CircleCosetReport r = circle_coset_report(p);
    if (format == "json") {
        emit_json(json{{"p", r.p},
                       {"circle_order", r.circle_order},
                       {"sphere2_count", r.sphere2_count},
                       {"coset_count", r.coset_count},
                       {"partition_verified", r.partition_verified}});
    } else {
        emit("p                  " + std::to_string(r.p));
        emit("circle order       " + std::to_string(r.circle_order));
        emit("two-sphere points  " + std::to_string(r.sphere2_count));
        emit("right cosets       " + std::to_string(r.coset_count));
        emit(std::string("partition checked  ") +
             (r.partition_verified ? "true" : "false"));
    }
}

// ------------------------------------------------------------------- fit --

struct FitArgs {
    int max_exp = 4;
    std::string samples;
    unsigned threads = 1;
    std::string format = "text";
};

void run_fit(const FitArgs& a) {
    std::vector<std::pair<double, double>> pts;
    if (!a.samples.empty()) {
        std::stringstream ss(a.samples);
        std::string pair;
        while (std::getline(ss, pair, ',')) {
            const std::size_t colon = pair.find(':');
            if (colon == std::string::npos)
                throw CLI::ValidationError("samples",
                                           "expected x:y pairs, got " + pair);
            pts.push_back({std::stod(pair.substr(0, colon)),
                           std::stod(pair.substr(colon + 1))});
        }
    } else {
        SeriesEngine::Options opt;
        opt.threads = a.threads;
        const std::vector<TableRow> rows =
            reproduce_table(a.max_exp, opt, [](const TableRow& r) {
                std::cerr << "decade " << r.log10_m << " done\n";
            });
        for (const TableRow& r : rows)
            pts.push_back({static_cast<double>(r.log10_m), r.tau2});
    }
    const ModelFit fit = fit_shifted_inverse_square(pts);
    if (a.format == "json") {
        json samples = json::array();
        for (const auto& [x, y] : pts) samples.push_back(json::array({x, y}));
        emit_json(json{{"a", fit.a},
                       {"b", fit.b},
                       {"c", fit.c},
                       {"rss", fit.rss},
                       {"iterations", fit.iterations},
                       {"samples", samples}});
    } else {
        emit("model y = a - b / (x^2 + c)");
        emit("a           " + format_double(fit.a));
        emit("b           " + format_double(fit.b));
        emit("c           " + format_double(fit.c));
        emit("rss         " + format_double(fit.rss));
        emit("iterations  " + std::to_string(fit.iterations));
    }
}

// ------------------------------------------------------------ conjecture --

struct ConjectureArgs {
    std::string which;
    std::uint64_t m_lo = 0;
    std::uint64_t m_hi = 0;
    double tau3 = kTau3Reference;
    double s = 2.0;
    std::uint64_t span = SegmentedSieve::kDefaultSpan;
    bool all = false;
    std::string format = "text";
};

void run_conjecture(const ConjectureArgs& a) {
    const std::vector<ConjectureReport> reports =
        a.which == "a"
            ? check_conjecture_a(a.m_lo, a.m_hi, a.tau3, a.span)
            : check_conjecture_b(a.s, a.m_lo, a.m_hi, a.span);
    std::uint64_t failures = 0;
    for (const ConjectureReport& r : reports)
        if (!r.holds) ++failures;
    if (a.format == "json") {
        json rows = json::array();
        for (const ConjectureReport& r : reports)
            if (a.all || !r.holds)
                rows.push_back(json{{"m", r.m},
                                    {"lhs", r.lhs},
                                    {"rhs", r.rhs},
                                    {"holds", r.holds}});
        emit_json(json{{"which", a.which},
                       {"m_lo", a.m_lo},
                       {"m_hi", a.m_hi},
                       {"checked", reports.size()},
                       {"failures", failures},
                       {"rows", rows}});
        return;
    }
    if (a.format == "csv") {
        emit("m,lhs,rhs,holds");
        for (const ConjectureReport& r : reports)
            if (a.all || !r.holds)
                emit(std::to_string(r.m) + "," + format_double(r.lhs) + "," +
                     format_double(r.rhs) + "," + (r.holds ? "true" : "false"));
        return;
    }
    for (const ConjectureReport& r : reports)
        if (a.all || !r.holds)
            emit("m = " + std::to_string(r.m) + "  lhs " +
                 format_double(r.lhs) + "  rhs " + format_double(r.rhs) +
                 (r.holds ? "  holds" : "  FAILS"));
    emit("checked m in [" + std::to_string(a.m_lo) + ", " +
         std::to_string(a.m_hi) + "]: " +
         (failures == 0 ? "all hold"
                        : std::to_string(failures) + " failures"));
}

// ------------------------------------------------------------------- hl --

void run_hl(double x, double tol, const std::string& format) {
    const HlEstimate est = hl_estimate(x, tol);
    if (format == "json") {
        emit_json(json{{"x", est.x},
                       {"c2", est.c2},
                       {"closed_form", est.closed_form},
                       {"integral_form", est.integral_form},
                       {"cutoff", est.cutoff}});
    } else if (format == "csv") {
        emit("x,c2,closed_form,integral_form,cutoff");
        emit(format_double(est.x) + "," + format_double(est.c2) + "," +
             format_double(est.closed_form) + "," +
             format_double(est.integral_form) + "," +
             std::to_string(est.cutoff));
    } else {
        emit("x              " + format_double(est.x));
        emit("C2             " + format_double(est.c2));
        emit("2 C2 x/log^2x  " + format_double(est.closed_form));
        emit("integral form  " + format_double(est.integral_form));
        emit("prime cutoff   " + std::to_string(est.cutoff));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "modsphere: the group of points on the 3-sphere mod n, twin-prime "
        "series, and structure reports"};
    app.require_subcommand(1);
    const auto format_check = CLI::IsMember({"text", "csv", "json"});

    CountArgs count_args;
    CLI::App* count = app.add_subcommand("count", "point count R4(n)");
    count->add_option("n", count_args.n, "modulus")->required();
    count->add_option("--limit", count_args.limit,
                      "enumeration size cap (default 3000)");
    count->add_option("--method", count_args.method,
                      "enumeration, formula, both or auto")
        ->check(CLI::IsMember({"enumeration", "formula", "both", "auto"}));
    count->add_option("--format", count_args.format)->check(format_check);
    count->callback([&] { run_count(count_args); });

    std::uint64_t pt_n = 0;
    std::string pt_method = "formula", pt_format = "text";
    std::uint64_t pt_limit = 3000;
    CLI::App* ptest =
        app.add_subcommand("prime-test", "primality by R4(n) = n^3 - n");
    ptest->add_option("n", pt_n, "odd candidate >= 3")->required();
    ptest->add_option("--method", pt_method)
        ->check(CLI::IsMember({"enumeration", "formula", "both"}));
    ptest->add_option("--limit", pt_limit);
    ptest->add_option("--format", pt_format)->check(format_check);
    ptest->callback([&] { run_prime_test(pt_n, pt_method, pt_limit, pt_format); });

    std::uint64_t tw_n = 0;
    std::string tw_format = "text";
    CLI::App* ttest = app.add_subcommand(
        "twin-test", "twin primality of (n, n+2) by the exact product");
    ttest->add_option("n", tw_n, "odd candidate >= 3")->required();
    ttest->add_option("--format", tw_format)->check(format_check);
    ttest->callback([&] { run_twin_test(tw_n, tw_format); });

    SeriesArgs series_args;
    series_args.threads = default_threads();
    series_args.span = default_span();
    CLI::App* series = app.add_subcommand(
        "series", "partial sum of the twin series at exponent s");
    series->add_option("--s", series_args.s, "series exponent (default 3)");
    series->add_option("--m", series_args.m, "summation bound")->required();
    series->add_option("--threads", series_args.threads);
    series->add_option("--chunk", series_args.chunk,
                       "work unit in n (default 2^19)");
    series->add_option("--span", series_args.span,
                       "sieve segment entries (default 2^22)");
    series->add_option("--checkpoint", series_args.checkpoint,
                       "state file to resume from and update");
    series->add_option("--format", series_args.format)->check(format_check);
    series->callback([&] { run_series(series_args); });

    TableArgs table_args;
    table_args.threads = default_threads();
    table_args.span = default_span();
    CLI::App* table = app.add_subcommand(
        "table", "decade table of pi2 and tau(s, m) for s = 1, 2, 3");
    table->add_option("--max-exp", table_args.max_exp, "last decade, 1..7")
        ->required()
        ->check(CLI::Range(1, 7));
    table->add_option("--threads", table_args.threads);
    table->add_option("--chunk", table_args.chunk);
    table->add_option("--span", table_args.span);
    table->add_option("--format", table_args.format)->check(format_check);
    table->add_option("--out", table_args.out, "write to a file");
    table->callback([&] { run_table(table_args); });

    GroupArgs group_args;
    CLI::App* group =
        app.add_subcommand("group", "group calculator on sphere points");
    group->require_subcommand(1);
    for (const char* op : {"mul", "pow", "order"}) {
        CLI::App* sub = group->add_subcommand(
            op, op == std::string("mul")
                    ? "product of two points"
                    : (op == std::string("pow") ? "k-fold multiple by the "
                                                  "Chebyshev ladder"
                                                : "order of a point"));
        sub->add_option("--mod", group_args.mod, "modulus")->required();
        sub->add_option("--point", group_args.point, "x1,x2,x3,x4")
            ->required();
        if (op == std::string("mul"))
            sub->add_option("--point2", group_args.point2, "second point")
                ->required();
        if (op == std::string("pow"))
            sub->add_option("--k", group_args.k,
                            "multiplier, any non-negative integer")
                ->required();
        sub->add_option("--format", group_args.format)->check(format_check);
        sub->callback([&, op] { run_group(op, group_args); });
    }

    std::uint32_t st_p = 3;
    std::string st_with = "auto", st_format = "text";
    CLI::App* structure =
        app.add_subcommand("structure", "quotient and coset reports");
    structure->require_subcommand(1);
    CLI::App* quot = structure->add_subcommand(
        "quotient", "Cayley table of S(Z/p) / {O, T}");
    quot->add_option("--p", st_p, "odd prime <= 31")->required();
    quot->add_option("--format", st_format)->check(format_check);
    quot->callback([&] { run_quotient(st_p, st_format); });
    CLI::App* iso = structure->add_subcommand(
        "iso", "match the quotient against an alternating group");
    iso->add_option("--p", st_p, "odd prime <= 31")->required();
    iso->add_option("--with", st_with)
        ->check(CLI::IsMember({"a4", "a5", "auto"}));
    iso->add_option("--format", st_format)->check(format_check);
    iso->callback([&] { run_iso(st_p, st_with, st_format); });
    CLI::App* cosets = structure->add_subcommand(
        "cosets", "circle subgroup cosets and the two-sphere count");
    cosets->add_option("--p", st_p, "odd prime <= 31")->required();
    cosets->add_option("--format", st_format)->check(format_check);
    cosets->callback([&] { run_cosets(st_p, st_format); });

    FitArgs fit_args;
    fit_args.threads = default_threads();
    CLI::App* fit = app.add_subcommand(
        "fit", "fit tau(2, 10^x) to the model a - b/(x^2 + c)");
    fit->add_option("--max-exp", fit_args.max_exp,
                    "fit over decades 1..max-exp (default 4)")
        ->check(CLI::Range(1, 7));
    fit->add_option("--samples", fit_args.samples,
                    "explicit x:y pairs, comma separated");
    fit->add_option("--threads", fit_args.threads);
    fit->add_option("--format", fit_args.format)->check(format_check);
    fit->callback([&] { run_fit(fit_args); });

    ConjectureArgs conj_args;
    conj_args.span = default_span();
    CLI::App* conj = app.add_subcommand(
        "conjecture", "scan the block-sum conjectures over a range of m");
    conj->add_option("which", conj_args.which, "a or b")
        ->required()
        ->check(CLI::IsMember({"a", "b"}));
    conj->add_option("--m-lo", conj_args.m_lo)->required();
    conj->add_option("--m-hi", conj_args.m_hi)->required();
    conj->add_option("--tau3", conj_args.tau3,
                     "tau(3) reference for conjecture a");
    conj->add_option("--s", conj_args.s, "exponent for conjecture b");
    conj->add_option("--span", conj_args.span);
    conj->add_flag("--all", conj_args.all, "print every m, not just failures");
    conj->add_option("--format", conj_args.format)->check(format_check);
    conj->callback([&] { run_conjecture(conj_args); });

    double hl_x = 0, hl_tol = 1e-10;
    std::string hl_format = "text";
    CLI::App* hl = app.add_subcommand(
        "hl-estimate", "Hardy-Littlewood style twin count estimate");
    hl->add_option("x", hl_x, "upper bound, > 4")->required();
    hl->add_option("--tol", hl_tol, "tail tolerance for the C2 product");
    hl->add_option("--format", hl_format)->check(format_check);
    hl->callback([&] { run_hl(hl_x, hl_tol, hl_format); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const LimitExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const SieveRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const OutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
