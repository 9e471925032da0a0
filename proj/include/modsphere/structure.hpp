#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "sieve.hpp"
#include "sphere.hpp"

namespace modsphere {

/**
 * Finite group presented as a Cayley table over element indices 0..k-1.
 * Construction validates the group axioms: a two-sided identity, the Latin
 * square property, and (for k <= 200) associativity by Light's test over a
 * greedy generating set.
 */
class FiniteGroupTable {
   public:
    static constexpr std::size_t kAssocCheckLimit = 200;

    FiniteGroupTable(std::vector<std::string> labels,
                     std::vector<std::vector<std::uint16_t>> table)
        : labels_(std::move(labels)), t_(std::move(table)) {
        const std::size_t k = t_.size();
        if (k == 0 || k > 65535 || labels_.size() != k)
            throw DomainError("table and label shapes disagree");
        for (const auto& row : t_) {
            if (row.size() != k) throw DomainError("table is not square");
            for (std::uint16_t v : row)
                if (v >= k) throw DomainError("table entry out of range");
        }
        identity_ = find_identity();
        check_latin();
        if (k <= kAssocCheckLimit) check_associative();
    }

    std::size_t size() const { return t_.size(); }
    std::size_t identity() const { return identity_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::uint16_t mul(std::size_t i, std::size_t j) const { return t_[i][j]; }

    std::uint32_t element_order(std::size_t i) const {
        std::uint32_t ord = 1;
        std::size_t x = i;
        while (x != identity_) {
            x = t_[x][i];
            ++ord;
        }
        return ord;
    }

    /// Sorted multiset of element orders; an isomorphism invariant.
    std::vector<std::uint32_t> order_profile() const {
        std::vector<std::uint32_t> p(size());
        for (std::size_t i = 0; i < size(); ++i) p[i] = element_order(i);
        std::sort(p.begin(), p.end());
        return p;
    }

    /// Greedy generating sequence: repeatedly adjoin the smallest element
    /// outside the closure so far.
    std::vector<std::uint16_t> generators() const {
        const std::size_t k = size();
        std::vector<std::uint16_t> gens;
        std::vector<bool> reached(k, false);
        std::size_t covered = 0;
        auto close = [&] {
            std::vector<std::uint16_t> queue{
                static_cast<std::uint16_t>(identity_)};
            std::fill(reached.begin(), reached.end(), false);
            reached[identity_] = true;
            covered = 1;
            while (!queue.empty()) {
                const std::uint16_t q = queue.back();
                queue.pop_back();
                for (std::uint16_t g : gens) {
                    const std::uint16_t r = t_[q][g];
                    if (!reached[r]) {
                        reached[r] = true;
                        ++covered;
                        queue.push_back(r);
                    }
                }
            }
        };
        close();
        while (covered < k) {
            std::uint16_t next = 0;
            while (reached[next]) ++next;
            gens.push_back(next);
            close();
        }
        return gens;
    }

    std::string to_text() const {
        std::size_t w = 1;
        for (const std::string& l : labels_) w = std::max(w, l.size());
        std::ostringstream os;
        auto pad = [&](const std::string& s) {
            os << s;
            for (std::size_t i = s.size(); i < w + 1; ++i) os << ' ';
        };
        pad("*");
        for (const std::string& l : labels_) pad(l);
        os << '\n';
        for (std::size_t i = 0; i < size(); ++i) {
            pad(labels_[i]);
            for (std::size_t j = 0; j < size(); ++j) pad(labels_[t_[i][j]]);
            os << '\n';
        }
        return os.str();
    }

   private:
    std::size_t find_identity() const {
        const std::size_t k = size();
        for (std::size_t e = 0; e < k; ++e) {
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j)
                ok = t_[e][j] == j && t_[j][e] == j;
            if (ok) return e;
        }
        throw DomainError("table has no two-sided identity");
    }

    void check_latin() const {
        const std::size_t k = size();
        std::vector<bool> seen(k);
        for (std::size_t i = 0; i < k; ++i) {
            std::fill(seen.begin(), seen.end(), false);
            for (std::size_t j = 0; j < k; ++j) {
                if (seen[t_[i][j]])
                    throw DomainError("row " + labels_[i] +
                                      " repeats an entry");
                seen[t_[i][j]] = true;
            }
            std::fill(seen.begin(), seen.end(), false);
            for (std::size_t j = 0; j < k; ++j) {
                if (seen[t_[j][i]])
                    throw DomainError("column " + labels_[i] +
                                      " repeats an entry");
                seen[t_[j][i]] = true;
            }
        }
    }

    /// Light's associativity test: a(gb) = (ag)b for every generator g
    /// of a generating set implies full associativity.
    void check_associative() const {
        const std::size_t k = size();
        for (std::uint16_t g : generators())
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b)
                    if (t_[t_[a][g]][b] != t_[a][t_[g][b]])
                        throw DomainError("operation is not associative");
    }

    std::vector<std::string> labels_;
    std::vector<std::vector<std::uint16_t>> t_;
    std::size_t identity_;
};

namespace detail {

inline std::uint32_t point_key(const SpherePoint& p) {
    return static_cast<std::uint32_t>(p.x1().value()) |
           static_cast<std::uint32_t>(p.x2().value()) << 8 |
           static_cast<std::uint32_t>(p.x3().value()) << 16 |
           static_cast<std::uint32_t>(p.x4().value()) << 24;
}

}  // namespace detail

/// All points of the sphere mod a prime p <= 31, in lexicographic order
/// of (x1, x2, x3, x4).
inline std::vector<SpherePoint> enumerate_sphere(std::uint32_t p) {
    if (!is_prime(p)) throw DomainError("enumeration expects a prime modulus");
    if (p > 31) throw LimitExceeded("exhaustive enumeration capped at p = 31");
    std::vector<SpherePoint> pts;
    for (std::uint32_t a = 0; a < p; ++a)
        for (std::uint32_t b = 0; b < p; ++b)
            for (std::uint32_t c = 0; c < p; ++c)
                for (std::uint32_t d = 0; d < p; ++d)
                    if ((a * a + b * b + c * c + d * d) % p == 1)
                        pts.push_back(SpherePoint::from_residues(a, b, c, d, p));
    return pts;
}

/**
 * Cayley table of the quotient of the sphere group mod p by the central
 * subgroup {O, T}. Cosets are named by their lexicographically smaller
 * member. At p = 3 the element order and single-letter labels follow the
 * classical 12-element presentation (isomorphic to A4).
 */
inline FiniteGroupTable quotient_by_H(std::uint32_t p) {
    if (p < 3 || !is_prime(p)) throw DomainError("p must be an odd prime");
    if (p > 31) throw LimitExceeded("quotient table capped at p = 31");
    const std::vector<SpherePoint> pts = enumerate_sphere(p);
    const SpherePoint tt = SpherePoint::antipode(p);
    std::vector<SpherePoint> reps;
    std::vector<std::string> labels;
    if (p == 3) {
        static constexpr int kReps[12][4] = {
            {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0},
            {1, 1, 1, 1}, {1, 2, 1, 2}, {1, 1, 2, 2}, {1, 2, 2, 1},
            {1, 1, 1, 2}, {1, 1, 2, 1}, {1, 2, 2, 2}, {1, 2, 1, 1}};
        static const char* kNames[12] = {"H", "I", "J", "K", "A", "B",
                                         "C", "D", "U", "V", "W", "X"};
        for (int i = 0; i < 12; ++i) {
            reps.push_back(SpherePoint::from_residues(
                kReps[i][0], kReps[i][1], kReps[i][2], kReps[i][3], 3));
            labels.emplace_back(kNames[i]);
        }
    } else {
        for (const SpherePoint& x : pts) {
            const SpherePoint y = add(tt, x);  // the coset partner of x
            bool x_smaller = false;
            for (int i = 0; i < 4; ++i) {
                if (x[i].value() != y[i].value()) {
                    x_smaller = x[i].value() < y[i].value();
                    break;
                }
            }
            if (!x_smaller) continue;
            reps.push_back(x);
            std::ostringstream os;
            os << "(" << x.x1().value() << "," << x.x2().value() << ","
               << x.x3().value() << "," << x.x4().value() << ")";
            labels.push_back(os.str());
        }
    }
    const std::size_t k = reps.size();
    std::unordered_map<std::uint32_t, std::uint16_t> coset_of;
    coset_of.reserve(2 * k);
    for (std::size_t i = 0; i < k; ++i) {
        coset_of[detail::point_key(reps[i])] = static_cast<std::uint16_t>(i);
        coset_of[detail::point_key(add(tt, reps[i]))] =
            static_cast<std::uint16_t>(i);
    }
    if (coset_of.size() != pts.size())
        throw Error("coset representatives do not cover the sphere");
    std::vector<std::vector<std::uint16_t>> table(
        k, std::vector<std::uint16_t>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            table[i][j] = coset_of.at(detail::point_key(add(reps[i], reps[j])));
    return FiniteGroupTable(std::move(labels), std::move(table));
}

namespace detail {

inline std::string cycle_notation(const std::vector<std::uint8_t>& perm) {
    const std::size_t k = perm.size();
    std::vector<bool> seen(k, false);
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = 0; i < k; ++i) {
        if (seen[i] || perm[i] == i) continue;
        os << "(";
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            os << j + 1;
            j = perm[j];
        }
        os << ")";
        any = true;
    }
    return any ? os.str() : "e";
}

}  // namespace detail

/// The alternating group A_k (3 <= k <= 5) on {1..k}, elements in
/// lexicographic one-line order, labels in cycle notation. Composition is
/// (sigma tau)(i) = sigma(tau(i)).
inline FiniteGroupTable alternating_group(int k) {
    if (k < 3 || k > 5)
        throw DomainError("alternating groups supported for 3 <= k <= 5");
    std::vector<std::uint8_t> line(k);
    for (int i = 0; i < k; ++i) line[i] = static_cast<std::uint8_t>(i);
    std::vector<std::vector<std::uint8_t>> perms;
    std::map<std::vector<std::uint8_t>, std::uint16_t> index;
    do {
        int inversions = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (line[i] > line[j]) ++inversions;
        if (inversions % 2 == 0) {
            index[line] = static_cast<std::uint16_t>(perms.size());
            perms.push_back(line);
        }
    } while (std::next_permutation(line.begin(), line.end()));
    const std::size_t m = perms.size();
    std::vector<std::string> labels(m);
    std::vector<std::vector<std::uint16_t>> table(
        m, std::vector<std::uint16_t>(m));
    std::vector<std::uint8_t> comp(k);
    for (std::size_t i = 0; i < m; ++i) {
        labels[i] = detail::cycle_notation(perms[i]);
        for (std::size_t j = 0; j < m; ++j) {
            for (int v = 0; v < k; ++v) comp[v] = perms[i][perms[j][v]];
            table[i][j] = index.at(comp);
        }
    }
    return FiniteGroupTable(std::move(labels), std::move(table));
}

/**
 * Isomorphism search by generator images. Generators of g are mapped to
 * same-order candidates in h; each candidate tuple is extended through the
 * reachability tree and fully verified. Returns the element mapping when
 * one exists.
 */
inline std::optional<std::vector<std::size_t>> is_isomorphic(
    const FiniteGroupTable& g, const FiniteGroupTable& h) {
    if (g.size() != h.size()) return std::nullopt;
    const std::size_t k = g.size();
    if (k > FiniteGroupTable::kAssocCheckLimit)
        throw LimitExceeded("isomorphism search capped at order 200");
    if (g.order_profile() != h.order_profile()) return std::nullopt;

    const std::vector<std::uint16_t> gens = g.generators();
    // breadth-first derivation of every element from the generators
    struct Deriv {
        std::uint16_t parent, gen;
    };
    std::vector<Deriv> deriv(k);
    std::vector<std::uint16_t> bfs_order;
    {
        std::vector<bool> reached(k, false);
        reached[g.identity()] = true;
        std::vector<std::uint16_t> queue{
            static_cast<std::uint16_t>(g.identity())};
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const std::uint16_t q = queue[qi];
            for (std::size_t gi = 0; gi < gens.size(); ++gi) {
                const std::uint16_t r = g.mul(q, gens[gi]);
                if (!reached[r]) {
                    reached[r] = true;
                    deriv[r] = {q, static_cast<std::uint16_t>(gi)};
                    bfs_order.push_back(r);
                    queue.push_back(r);
                }
            }
        }
    }

    std::vector<std::uint32_t> g_order(k), h_order(k);
    for (std::size_t i = 0; i < k; ++i) {
        g_order[i] = g.element_order(i);
        h_order[i] = h.element_order(i);
    }

    std::vector<std::size_t> img(k);
    std::vector<std::uint16_t> gen_img(gens.size());

    auto try_build = [&]() -> bool {
        std::vector<bool> used(k, false);
        img[g.identity()] = h.identity();
        used[h.identity()] = true;
        for (std::uint16_t x : bfs_order) {
            const std::size_t y =
                h.mul(img[deriv[x].parent], gen_img[deriv[x].gen]);
            if (used[y]) return false;
            used[y] = true;
            img[x] = y;
        }
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                if (img[g.mul(a, b)] != h.mul(img[a], img[b])) return false;
        return true;
    };

    std::vector<std::vector<std::uint16_t>> candidates(gens.size());
    for (std::size_t gi = 0; gi < gens.size(); ++gi)
        for (std::size_t y = 0; y < k; ++y)
            if (h_order[y] == g_order[gens[gi]])
                candidates[gi].push_back(static_cast<std::uint16_t>(y));

    const auto search = [&](auto&& self, std::size_t gi) -> bool {
        if (gi == gens.size()) return try_build();
        for (std::uint16_t cand : candidates[gi]) {
            gen_img[gi] = cand;
            if (self(self, gi + 1)) return true;
        }
        return false;
    };
    if (search(search, 0)) return img;
    return std::nullopt;
}

/// Circle subgroup and its cosets inside the sphere group mod p.
struct CircleCosetReport {
    std::uint32_t p;
    std::uint64_t circle_order;   // solutions of x1^2 + x3^2 = 1
    std::uint64_t sphere2_count;  // solutions of x^2 + y^2 + z^2 = 1
    std::uint64_t coset_count;    // (p^3 - p) / circle_order
    bool partition_verified;      // right cosets partition into equal classes
};

inline CircleCosetReport circle_coset_report(std::uint32_t p) {
    if (p < 3 || !is_prime(p)) throw DomainError("p must be an odd prime");
    if (p > 31) throw LimitExceeded("coset enumeration capped at p = 31");
    std::uint64_t sphere2 = 0;
    for (std::uint32_t a = 0; a < p; ++a)
        for (std::uint32_t b = 0; b < p; ++b)
            for (std::uint32_t c = 0; c < p; ++c)
                if ((a * a + b * b + c * c) % p == 1) ++sphere2;
    const std::vector<SpherePoint> pts = enumerate_sphere(p);
    std::vector<SpherePoint> circle;
    for (std::uint32_t a = 0; a < p; ++a)
        for (std::uint32_t c = 0; c < p; ++c)
            if ((a * a + c * c) % p == 1)
                circle.push_back(SpherePoint::from_residues(a, 0, c, 0, p));
    const std::uint64_t group_order =
        static_cast<std::uint64_t>(p) * p * p - p;
    if (pts.size() != group_order)
        throw Error("sphere enumeration does not match p^3 - p");
    if (group_order % circle.size() != 0)
        throw Error("circle order does not divide the group order");
    // partition into right cosets Cg and confirm the class count
    std::unordered_map<std::uint32_t, std::uint32_t> klass;
    klass.reserve(pts.size());
    std::uint32_t classes = 0;
    for (const SpherePoint& x : pts) {
        if (klass.count(detail::point_key(x))) continue;
        ++classes;
        std::uint32_t fresh = 0;
        for (const SpherePoint& c : circle) {
            const std::uint32_t key = detail::point_key(add(c, x));
            if (klass.emplace(key, classes).second) ++fresh;
        }
        if (fresh != circle.size())
            throw Error("cosets of the circle are not disjoint");
    }
    CircleCosetReport rep;
    rep.p = p;
    rep.circle_order = circle.size();
    rep.sphere2_count = sphere2;
    rep.coset_count = group_order / circle.size();
    rep.partition_verified = classes == rep.coset_count;
    if (rep.coset_count != sphere2)
        throw Error("coset count does not match the two-sphere count");
    return rep;
}

/// A pair (g, c) with c on the circle but g c g^{-1} off it, witnessing
/// that the circle subgroup is not normal.
struct NonNormalWitness {
    SpherePoint g;
    SpherePoint c;
    SpherePoint conjugate;
};

inline std::optional<NonNormalWitness> find_nonnormal_witness(
    std::uint32_t p) {
    if (p < 3 || !is_prime(p)) throw DomainError("p must be an odd prime");
    if (p > 31) throw LimitExceeded("witness search capped at p = 31");
    const std::vector<SpherePoint> pts = enumerate_sphere(p);
    std::vector<SpherePoint> circle;
    for (std::uint32_t a = 0; a < p; ++a)
        for (std::uint32_t c = 0; c < p; ++c)
            if ((a * a + c * c) % p == 1)
                circle.push_back(SpherePoint::from_residues(a, 0, c, 0, p));
    for (const SpherePoint& g : pts)
        for (const SpherePoint& c : circle) {
            const SpherePoint z = add(add(g, c), neg(g));
            if (z.x2().value() != 0 || z.x4().value() != 0)
                return NonNormalWitness{g, c, z};
        }
    return std::nullopt;
}

}  // namespace modsphere
