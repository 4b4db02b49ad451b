#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace indexlab {

using Int = boost::multiprecision::cpp_int;

// Exponent vector of one monomial; entry i is the power of the (i+1)-th
// variable.  All vectors inside one polynomial share the variable count.
using Exponents = std::vector<unsigned>;

inline unsigned exponent_degree(const Exponents& e) {
    unsigned d = 0;
    for (unsigned p : e) d += p;
    return d;
}

// Graded lexicographic term order: total degree first, then lexicographic
// with earlier variables weighing more.
struct grlex_less {
    bool operator()(const Exponents& a, const Exponents& b) const {
        const unsigned da = exponent_degree(a), db = exponent_degree(b);
        if (da != db) return da < db;
        for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return a.size() < b.size();
    }
};

// Sparse polynomial over arbitrary-precision integers; no zero coefficients
// are ever stored and terms sit in the canonical graded order.
class IntPoly {
  public:
    using TermMap = std::map<Exponents, Int, grlex_less>;

    explicit IntPoly(std::size_t n_vars) : n_(n_vars) {}

    static IntPoly constant(std::size_t n_vars, Int c) {
        IntPoly p(n_vars);
        p.add_term(Exponents(n_vars, 0), std::move(c));
        return p;
    }

    static IntPoly variable(std::size_t n_vars, std::size_t i) {
        if (i >= n_vars) throw index_out_of_range("variable index");
        Exponents e(n_vars, 0);
        e[i] = 1;
        IntPoly p(n_vars);
        p.add_term(e, 1);
        return p;
    }

    static IntPoly monomial(std::size_t n_vars, Exponents e, Int c) {
        if (e.size() != n_vars) throw dimension_mismatch("exponent vector length");
        IntPoly p(n_vars);
        p.add_term(std::move(e), std::move(c));
        return p;
    }

    std::size_t n_vars() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    Int coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Int(0) : it->second;
    }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, exponent_degree(e));
        return d;
    }

    void add_term(Exponents e, Int c) {
        if (e.size() != n_) throw dimension_mismatch("exponent vector length");
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(std::move(e), std::move(c));
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    IntPoly& operator+=(const IntPoly& o) {
        require_same_vars(o);
        for (const auto& [e, c] : o.terms_) accumulate(e, c);
        return *this;
    }

    IntPoly& operator-=(const IntPoly& o) {
        require_same_vars(o);
        for (const auto& [e, c] : o.terms_) accumulate(e, -c);
        return *this;
    }

    IntPoly& operator*=(const Int& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, v] : terms_) v *= c;
        return *this;
    }

    friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
    friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a -= b; }
    friend IntPoly operator*(IntPoly a, const Int& c) { return a *= c; }
    friend IntPoly operator*(const Int& c, IntPoly a) { return a *= c; }

    IntPoly operator-() const {
        IntPoly out(n_);
        for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
        return out;
    }

    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        a.require_same_vars(b);
        IntPoly out(a.n_);
        Exponents e(a.n_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
                out.accumulate(e, ca * cb);
            }
        }
        return out;
    }

    IntPoly pow(unsigned k) const {
        IntPoly out = constant(n_, 1);
        for (unsigned i = 0; i < k; ++i) out = out * *this;
        return out;
    }

    // replaces the given variable by a polynomial in the same variable set
    IntPoly substitute(std::size_t var, const IntPoly& value) const {
        if (var >= n_) throw index_out_of_range("substitution variable");
        require_same_vars(value);
        unsigned max_pow = 0;
        for (const auto& [e, c] : terms_) max_pow = std::max(max_pow, e[var]);
        std::vector<IntPoly> powers;
        powers.reserve(max_pow + 1);
        powers.push_back(constant(n_, 1));
        for (unsigned k = 1; k <= max_pow; ++k) powers.push_back(powers.back() * value);

        IntPoly out(n_);
        for (const auto& [e, c] : terms_) {
            Exponents rest = e;
            const unsigned p = rest[var];
            rest[var] = 0;
            out += monomial(n_, std::move(rest), c) * powers[p];
        }
        return out;
    }

    IntPoly swap_vars(std::size_t i, std::size_t j) const {
        if (i >= n_ || j >= n_) throw index_out_of_range("swap variable");
        IntPoly out(n_);
        for (const auto& [e, c] : terms_) {
            Exponents se = e;
            std::swap(se[i], se[j]);
            out.terms_.emplace(std::move(se), c);
        }
        return out;
    }

    friend bool operator==(const IntPoly& a, const IntPoly& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

  private:
    void require_same_vars(const IntPoly& o) const {
        if (n_ != o.n_) throw dimension_mismatch("polynomials over different variable sets");
    }

    void accumulate(const Exponents& e, Int c) {
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, std::move(c));
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::size_t n_;
    TermMap terms_;
};

// e_k(x_1, ..., x_n); e_0 = 1.  Built from the generating product
// (1 + x_1 t)...(1 + x_n t) one factor at a time.
inline IntPoly elementary_symmetric(std::size_t n_vars, std::size_t k) {
    if (k > n_vars) throw index_out_of_range("elementary symmetric degree");
    std::vector<IntPoly> by_t_degree;
    by_t_degree.reserve(k + 1);
    for (std::size_t d = 0; d <= k; ++d)
        by_t_degree.push_back(d == 0 ? IntPoly::constant(n_vars, 1) : IntPoly(n_vars));
    for (std::size_t i = 0; i < n_vars; ++i) {
        const IntPoly xi = IntPoly::variable(n_vars, i);
        for (std::size_t d = std::min(k, i + 1); d >= 1; --d)
            by_t_degree[d] += by_t_degree[d - 1] * xi;
    }
    return by_t_degree[k];
}

// h_degree(x_{first+1}, ..., x_n) as a polynomial in all n variables: the sum
// of every monomial of the given total degree in the trailing variables.
inline IntPoly complete_homogeneous(std::size_t n_vars, unsigned degree, std::size_t first) {
    if (first >= n_vars) throw index_out_of_range("complete homogeneous variable range");
    IntPoly out(n_vars);
    Exponents e(n_vars, 0);
    auto place = [&](auto&& self, std::size_t var, unsigned remaining) -> void {
        if (var + 1 == n_vars) {
            e[var] = remaining;
            out.add_term(e, 1);
            e[var] = 0;
            return;
        }
        for (unsigned p = 0; p <= remaining; ++p) {
            e[var] = p;
            self(self, var + 1, remaining - p);
        }
        e[var] = 0;
    };
    place(place, first, degree);
    return out;
}

inline Int factorial(unsigned n) {
    Int out = 1;
    for (unsigned k = 2; k <= n; ++k) out *= k;
    return out;
}

inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    Int out = 1;
    for (unsigned j = 1; j <= k; ++j) {
        out *= n - k + j;
        out /= j;
    }
    return out;
}

}  // namespace indexlab
