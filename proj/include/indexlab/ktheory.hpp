#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "intpoly.hpp"

namespace indexlab {

// Class of a polynomial in the coinvariant quotient, written in the basis of
// monomials x_2^{j_1} ... x_n^{j_{n-1}} with 0 <= j_k <= k; the first
// variable never appears in a reduced representative.
struct CoinvariantElement {
    std::size_t n = 0;
    IntPoly::TermMap coordinates;

    bool is_zero() const { return coordinates.empty(); }

    friend bool operator==(const CoinvariantElement& a, const CoinvariantElement& b) {
        return a.n == b.n && a.coordinates == b.coordinates;
    }
    friend bool operator!=(const CoinvariantElement& a, const CoinvariantElement& b) {
        return !(a == b);
    }
};

namespace ktheory_detail {

// smallest variable (1-based) whose exponent reaches its rewriting cap, or 0
inline std::size_t reducible_at(const Exponents& e) {
    for (std::size_t k = 1; k <= e.size(); ++k)
        if (e[k - 1] >= k) return k;
    return 0;
}

// x_k^k is congruent to x_k^k - h_k(x_k, ..., x_n); every replacement
// monomial is strictly smaller in lex order at the same degree, so the
// rewriting terminates with the unique basis expansion.
inline IntPoly rewrite_tail(std::size_t n, std::size_t k) {
    Exponents lead(n, 0);
    lead[k - 1] = static_cast<unsigned>(k);
    IntPoly tail = IntPoly::monomial(n, std::move(lead), 1);
    tail -= complete_homogeneous(n, static_cast<unsigned>(k), k - 1);
    return tail;
}

}  // namespace ktheory_detail

inline CoinvariantElement reduce_mod_jn(const IntPoly& p, std::size_t n) {
    if (p.n_vars() != n) throw dimension_mismatch("polynomial has wrong variable count");
    std::vector<IntPoly> tails(n + 1, IntPoly(n));
    std::vector<char> have(n + 1, 0);

    IntPoly::TermMap pending = p.terms();
    CoinvariantElement out;
    out.n = n;
    Exponents scratch(n);
    while (!pending.empty()) {
        // rewriting only ever produces terms below the one being processed,
        // so taking the largest term first touches each monomial once
        auto node = pending.extract(std::prev(pending.end()));
        const Exponents& e = node.key();
        const Int& c = node.mapped();
        const std::size_t k = ktheory_detail::reducible_at(e);
        if (k == 0) {
            auto it = out.coordinates.find(e);
            if (it == out.coordinates.end()) {
                out.coordinates.emplace(e, c);
            } else {
                it->second += c;
                if (it->second == 0) out.coordinates.erase(it);
            }
            continue;
        }
        if (!have[k]) {
            tails[k] = ktheory_detail::rewrite_tail(n, k);
            have[k] = 1;
        }
        for (const auto& [te, tc] : tails[k].terms()) {
            for (std::size_t i = 0; i < n; ++i) scratch[i] = e[i] + te[i];
            scratch[k - 1] -= static_cast<unsigned>(k);
            const Int add = c * tc;
            auto it = pending.find(scratch);
            if (it == pending.end()) {
                pending.emplace(scratch, add);
            } else {
                it->second += add;
                if (it->second == 0) pending.erase(it);
            }
        }
    }
    return out;
}

inline IntPoly lift(const CoinvariantElement& c) {
    IntPoly out(c.n);
    for (const auto& [e, v] : c.coordinates) out.add_term(e, v);
    return out;
}

inline std::vector<Exponents> artin_basis(std::size_t n) {
    std::vector<Exponents> basis;
    Exponents e(n, 0);
    auto walk = [&](auto&& self, std::size_t k) -> void {
        if (k == n) {
            basis.push_back(e);
            return;
        }
        for (unsigned j = 0; j <= k; ++j) {
            e[k] = j;
            self(self, k + 1);
        }
        e[k] = 0;
    };
    walk(walk, 0);
    return basis;
}

inline std::size_t coinvariant_rank(std::size_t n) { return artin_basis(n).size(); }

inline IntPoly vandermonde(std::size_t n) {
    if (n < 2) throw index_out_of_range("vandermonde needs at least two variables");
    IntPoly out = IntPoly::constant(n, 1);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            out = out * (IntPoly::variable(n, i) - IntPoly::variable(n, j));
    return out;
}

inline int permutation_sign(const std::vector<std::size_t>& perm) {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

// det(x_i^{k-1}) by permutation expansion; the independent route against the
// pairwise product form.
inline IntPoly vandermonde_determinant(std::size_t n) {
    if (n < 2) throw index_out_of_range("vandermonde needs at least two variables");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    IntPoly out(n);
    do {
        Exponents e(n, 0);
        for (std::size_t i = 0; i < n; ++i) e[i] = static_cast<unsigned>(perm[i]);
        out.add_term(std::move(e), permutation_sign(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

// q_k(x) = sum_j (-1)^j C(n, k-j) x^j, the exterior-power class of the
// complementary bundle evaluated at one line's class.
inline IntPoly q_poly(std::size_t k, std::size_t n) {
    if (k > n) throw index_out_of_range("exterior power degree exceeds the rank");
    IntPoly out(1);
    for (std::size_t j = 0; j <= k; ++j) {
        Int c = binomial(static_cast<unsigned>(n), static_cast<unsigned>(k - j));
        if (j % 2 == 1) c = -c;
        out.add_term(Exponents{static_cast<unsigned>(j)}, std::move(c));
    }
    return out;
}

struct DnWitness {
    bool ok = false;
    CoinvariantElement reduced;
    CoinvariantElement expected;
};

// The staircase monomial x_2 x_3^2 ... x_n^{n-1} with the given coefficient.
inline CoinvariantElement staircase_class(std::size_t n, Int coefficient) {
    CoinvariantElement out;
    out.n = n;
    Exponents e(n, 0);
    for (std::size_t k = 1; k < n; ++k) e[k] = static_cast<unsigned>(k);
    if (coefficient != 0) out.coordinates.emplace(std::move(e), std::move(coefficient));
    return out;
}

// Reduction of the Vandermonde determinant: n! times the staircase monomial.
// Both construction routes of the determinant must agree exactly before the
// reduction is trusted.
inline DnWitness verify_dn(std::size_t n, std::size_t cap = 5) {
    if (n < 2) throw index_out_of_range("need at least two variables");
    if (n > cap) throw too_large("vandermonde reduction capped");
    const IntPoly by_product = vandermonde(n);
    const IntPoly by_determinant = vandermonde_determinant(n);
    DnWitness w;
    w.reduced = reduce_mod_jn(by_product, n);
    w.expected = staircase_class(n, factorial(static_cast<unsigned>(n)));
    w.ok = by_product == by_determinant && w.reduced == w.expected;
    return w;
}

// prod_{j<n} (x_n - x_j) is congruent to n x_n^{n-1}.
inline bool verify_nun(std::size_t n) {
    if (n < 2) throw index_out_of_range("need at least two variables");
    IntPoly p = IntPoly::constant(n, 1);
    for (std::size_t j = 0; j + 1 < n; ++j)
        p = p * (IntPoly::variable(n, n - 1) - IntPoly::variable(n, j));
    Exponents e(n, 0);
    e[n - 1] = static_cast<unsigned>(n - 1);
    p -= IntPoly::monomial(n, std::move(e), Int(n));
    return reduce_mod_jn(p, n).is_zero();
}

// Formal element of the exterior algebra over n odd generators with
// polynomial coefficients; the key is the generator subset as a bitmask.
struct ExteriorElement {
    std::size_t n = 0;
    std::map<std::uint32_t, IntPoly> parts;

    static ExteriorElement scalar(std::size_t n) {
        ExteriorElement out;
        out.n = n;
        out.parts.emplace(0u, IntPoly::constant(n, 1));
        return out;
    }

    // right-multiplies by sum_i alpha_i c_i; moving alpha_i into its sorted
    // slot passes one sign flip per already-present higher generator
    ExteriorElement times_odd_sum(const std::vector<IntPoly>& coeffs) const {
        if (coeffs.size() != n) throw dimension_mismatch("one coefficient per generator");
        ExteriorElement out;
        out.n = n;
        for (const auto& [mask, poly] : parts) {
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint32_t bit = 1u << i;
                if (mask & bit) continue;
                const std::uint32_t higher = mask >> (i + 1);
                const int sign = std::popcount(higher) % 2 == 0 ? 1 : -1;
                IntPoly contribution = poly * coeffs[i] * Int(sign);
                if (contribution.is_zero()) continue;
                auto [it, fresh] = out.parts.emplace(mask | bit, contribution);
                if (!fresh) {
                    it->second += contribution;
                    if (it->second.is_zero()) out.parts.erase(it);
                }
            }
        }
        return out;
    }
};

struct PiStarBResult {
    bool ok = false;
    int sign = 0;
    Int magnitude;
    CoinvariantElement reduced;
    CoinvariantElement expected;
};

// Coefficient of the top exterior monomial in prod_k (sum_i alpha_i x_i
// q_{k-1}(x_i)), computed once through the exterior algebra and once as the
// permutation determinant, then shifted to the reduced generators and taken
// down to the coinvariant basis.
inline PiStarBResult pi_star_b(std::size_t n) {
    if (n < 2) throw index_out_of_range("need at least two generators");
    if (n > 4) throw too_large("exterior expansion capped at four generators");

    std::vector<std::vector<IntPoly>> factor(n);  // factor[k][i] = x_i q_k(x_i)
    for (std::size_t k = 0; k < n; ++k) {
        factor[k].reserve(n);
        const IntPoly qk = q_poly(k, n);
        for (std::size_t i = 0; i < n; ++i) {
            IntPoly ci(n);
            for (const auto& [e, c] : qk.terms()) {
                Exponents mono(n, 0);
                mono[i] = e[0] + 1;
                ci.add_term(std::move(mono), c);
            }
            factor[k].push_back(std::move(ci));
        }
    }

    ExteriorElement acc = ExteriorElement::scalar(n);
    for (std::size_t k = 0; k < n; ++k) acc = acc.times_odd_sum(factor[k]);
    const std::uint32_t full = (1u << n) - 1u;
    auto it = acc.parts.find(full);
    IntPoly top = it == acc.parts.end() ? IntPoly(n) : it->second;

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    IntPoly determinant(n);
    do {
        IntPoly prod = IntPoly::constant(n, permutation_sign(perm));
        for (std::size_t k = 0; k < n; ++k) prod = prod * factor[k][perm[k]];
        determinant += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));

    IntPoly shifted = top;
    for (std::size_t i = 0; i < n; ++i) {
        IntPoly one_plus = IntPoly::constant(n, 1) + IntPoly::variable(n, i);
        shifted = shifted.substitute(i, one_plus);
    }

    PiStarBResult out;
    out.sign = (n * (n - 1) / 2) % 2 == 0 ? 1 : -1;
    out.magnitude = factorial(static_cast<unsigned>(n));
    out.reduced = reduce_mod_jn(shifted, n);
    out.expected = staircase_class(n, Int(out.sign) * out.magnitude);
    out.ok = top == determinant && !out.reduced.is_zero() && out.reduced == out.expected;
    return out;
}

}  // namespace indexlab
