#pragma once

/**
 * @file semirings.hpp
 * @brief Concrete Rota-Baxter (semi)rings and operator-identity checks.
 *
 * Carriers:
 *   - max-plus   (R u {-inf}, max, +)        with ReLU (weight +1) and identity (weight -1)
 *   - unit interval ([0,1], max, *)          with threshold c_lambda (weight -1, R1-compatible)
 *   - Boolean    ({0,1}, or, and)            with identity (weight -1)
 *   - Laurent series over a commutative coefficient ring, with the polar
 *     projection (weight -1), truncated to a declared exponent window.
 *
 * A Rota-Baxter operator R of weight +1 satisfies
 *     R(a).R(b) = R(a.R(b)) + R(R(a).b) + R(a.b)
 * and of weight -1
 *     R(a).R(b) + R(a.b) = R(a.R(b)) + R(R(a).b)
 * where (+,.) are the carrier's two operations.  The extra property used by
 * weight -1 semiring factorizations ("R1"):
 *     R(x.y) + R(x).R(y) = R(x).R(y).
 */

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "rational.hpp"

namespace mk {

// ---------------------------------------------------------------------------
// Carriers
// ---------------------------------------------------------------------------

struct MaxPlus {
    using V = double;
    static constexpr double NEG_INF = -std::numeric_limits<double>::infinity();
    static V zero() { return NEG_INF; }
    static V one() { return 0.0; }
    static V add(V a, V b) { return std::max(a, b); }
    static V mul(V a, V b) {
        if (a == NEG_INF || b == NEG_INF) return NEG_INF; // absorbing
        return a + b;
    }
    static bool eq(V a, V b, double tol) {
        if (a == NEG_INF || b == NEG_INF) return a == b;
        return std::abs(a - b) <= tol;
    }
};

struct Viterbi { // ([0,1], max, *)
    using V = double;
    static V zero() { return 0.0; }
    static V one() { return 1.0; }
    static V add(V a, V b) { return std::max(a, b); }
    static V mul(V a, V b) { return a * b; }
    static bool eq(V a, V b, double tol) { return std::abs(a - b) <= tol; }
};

struct BoolSR { // ({0,1}, or, and)
    using V = int;
    static V zero() { return 0; }
    static V one() { return 1; }
    static V add(V a, V b) { return a | b; }
    static V mul(V a, V b) { return a & b; }
    static bool eq(V a, V b, double) { return a == b; }
};

/**
 * Truncated Laurent series with coefficients in a commutative ring C
 * (anything with +, *, unary -, is_zero-like emptiness via ==C{}).
 * Exponents outside [min_exp, max_exp] are dropped and flagged.
 */
template <typename C>
struct Laurent {
    static constexpr int DEFAULT_MIN = -8, DEFAULT_MAX = 8;
    std::map<int, C> coeff;   // exponent -> coefficient (no zero entries)
    int min_exp = DEFAULT_MIN, max_exp = DEFAULT_MAX;
    bool truncated = false;   // set when a term fell outside the window

    void add_term(int e, const C& c) {
        if (c == C{}) return;
        if (e < min_exp || e > max_exp) {
            truncated = true;
            return;
        }
        auto it = coeff.find(e);
        if (it == coeff.end()) {
            coeff.emplace(e, c);
        } else {
            it->second = it->second + c;
            if (it->second == C{}) coeff.erase(it);
        }
    }

    friend Laurent operator+(const Laurent& a, const Laurent& b) {
        Laurent r = a;
        r.truncated = a.truncated || b.truncated;
        for (auto& [e, c] : b.coeff) r.add_term(e, c);
        return r;
    }
    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        r.min_exp = a.min_exp;
        r.max_exp = a.max_exp;
        r.truncated = a.truncated || b.truncated;
        for (auto& [e1, c1] : a.coeff)
            for (auto& [e2, c2] : b.coeff) r.add_term(e1 + e2, c1 * c2);
        return r;
    }
    Laurent operator-() const {
        Laurent r = *this;
        for (auto& [e, c] : r.coeff) c = -c;
        return r;
    }
    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }
    friend bool operator==(const Laurent& a, const Laurent& b) { return a.coeff == b.coeff; }

    /// Polar projection: keep exponents < 0 (a weight -1 Rota-Baxter operator).
    Laurent polar() const {
        Laurent r;
        r.min_exp = min_exp;
        r.max_exp = max_exp;
        r.truncated = truncated;
        for (auto& [e, c] : coeff)
            if (e < 0) r.coeff.emplace(e, c);
        return r;
    }
    /// Regular part: 1 - polar.
    Laurent regular() const {
        Laurent r;
        r.min_exp = min_exp;
        r.max_exp = max_exp;
        r.truncated = truncated;
        for (auto& [e, c] : coeff)
            if (e >= 0) r.coeff.emplace(e, c);
        return r;
    }
    static Laurent unit() {
        Laurent r;
        r.add_term(0, unit_coeff());
        return r;
    }
    static C unit_coeff();
};

template <> inline Rational Laurent<Rational>::unit_coeff() { return Rational(1); }
template <> inline double Laurent<double>::unit_coeff() { return 1.0; }

using LaurentQ = Laurent<Rational>;

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

inline double relu(double x) { return std::max(x, 0.0); } // weight +1 on max-plus

/// Threshold operator on [0,1]: x below lambda passes, at/above saturates to 1.
/// Weight -1 on ([0,1], max, *), satisfies the R1 property.
struct Threshold {
    double lambda;
    explicit Threshold(double l) : lambda(l) {
        if (l < 0.0 || l > 1.0) throw std::invalid_argument("threshold: lambda outside [0,1]");
    }
    double operator()(double x) const { return x < lambda ? x : 1.0; }
};

/// A named Rota-Baxter operator over carrier S.
template <typename S>
struct RBOperator {
    using V = typename S::V;
    std::string name;
    int weight;                  // +1 or -1
    bool r1 = false;             // satisfies the R1 property (weight -1 use)
    std::function<V(V)> apply;
};

inline RBOperator<MaxPlus> rb_relu() { return {"relu", +1, false, [](double x) { return relu(x); }}; }
inline RBOperator<MaxPlus> rb_id_maxplus() { return {"id", -1, true, [](double x) { return x; }}; }
inline RBOperator<Viterbi> rb_threshold(double lambda) {
    return {"threshold", -1, true, Threshold(lambda)};
}
inline RBOperator<BoolSR> rb_id_bool() { return {"id", -1, true, [](int x) { return x; }}; }

// ---------------------------------------------------------------------------
// Identity checks
// ---------------------------------------------------------------------------

/// Weight-appropriate Rota-Baxter identity over a semiring carrier.
template <typename S>
bool check_rb_identity(const RBOperator<S>& R, typename S::V x, typename S::V y,
                       double tol = 1e-9) {
    auto Rx = R.apply(x), Ry = R.apply(y);
    auto lhs_prod = S::mul(Rx, Ry);
    auto t1 = R.apply(S::mul(x, Ry));
    auto t2 = R.apply(S::mul(Rx, y));
    auto txy = R.apply(S::mul(x, y));
    if (R.weight == +1) return S::eq(lhs_prod, S::add(S::add(t1, t2), txy), tol);
    return S::eq(S::add(lhs_prod, txy), S::add(t1, t2), tol);
}

/// R1 property: R(x.y) + R(x).R(y) = R(x).R(y).
template <typename S>
bool check_r1(const RBOperator<S>& R, typename S::V x, typename S::V y, double tol = 1e-9) {
    auto prod = S::mul(R.apply(x), R.apply(y));
    return S::eq(S::add(R.apply(S::mul(x, y)), prod), prod, tol);
}

/// Weight -1 Rota-Baxter identity for the Laurent polar projection (ring form).
template <typename C>
bool check_rb_polar(const Laurent<C>& x, const Laurent<C>& y) {
    auto Rx = x.polar(), Ry = y.polar();
    auto lhs = Rx * Ry + (x * y).polar();
    auto rhs = (x * Ry).polar() + (Rx * y).polar();
    return lhs == rhs;
}

} // namespace mk
