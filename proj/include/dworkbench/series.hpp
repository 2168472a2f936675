#pragma once

// Truncated power series over exact coefficient rings, zeta series from
// point counts, the delta operator and its inverse, rational-function
// reconstruction from series, Newton polygons, and the weak-visibility
// search. Everything here is exact arbitrary-precision arithmetic.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dworkbench/util.hpp"

namespace dwb::series {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------

template <class R>
struct TruncatedSeries {
    std::vector<R> c;  // c[0..M]

    TruncatedSeries() = default;
    explicit TruncatedSeries(int order) : c(size_t(order) + 1, R(0)) {}

    int order() const { return int(c.size()) - 1; }

    static TruncatedSeries one(int order) {
        TruncatedSeries s(order);
        s.c[0] = R(1);
        return s;
    }

    bool operator==(const TruncatedSeries& o) const { return c == o.c; }
};

template <class R>
TruncatedSeries<R> ts_add(const TruncatedSeries<R>& a, const TruncatedSeries<R>& b) {
    int m = std::min(a.order(), b.order());
    TruncatedSeries<R> r(m);
    for (int i = 0; i <= m; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

template <class R>
TruncatedSeries<R> ts_mul(const TruncatedSeries<R>& a, const TruncatedSeries<R>& b) {
    int m = std::min(a.order(), b.order());
    TruncatedSeries<R> r(m);
    for (int i = 0; i <= m; ++i)
        for (int j = 0; i + j <= m; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

// multiplicative inverse; requires constant term 1, so no division is needed
template <class R>
TruncatedSeries<R> ts_inverse(const TruncatedSeries<R>& a) {
    if (a.c.empty() || a.c[0] != R(1))
        throw std::invalid_argument("series inverse requires constant term 1");
    int m = a.order();
    TruncatedSeries<R> b(m);
    b.c[0] = R(1);
    for (int k = 1; k <= m; ++k) {
        R s(0);
        for (int j = 1; j <= k; ++j) s += a.c[j] * b.c[k - j];
        b.c[k] = -s;
    }
    return b;
}

// t -> u*t
template <class R>
TruncatedSeries<R> ts_scale_var(const TruncatedSeries<R>& a, const R& u) {
    TruncatedSeries<R> r(a.order());
    R pw(1);
    for (int i = 0; i <= a.order(); ++i) {
        r.c[i] = a.c[i] * pw;
        pw *= u;
    }
    return r;
}

// exp of a series with zero constant term, via the ODE A' = S'A
// (k*A_k = sum_{j<=k} j*S_j*A_{k-j}); needs exact division by k.
inline TruncatedSeries<Rational> ts_exp(const TruncatedSeries<Rational>& s) {
    if (!s.c.empty() && s.c[0] != 0)
        throw std::invalid_argument("ts_exp requires zero constant term");
    int m = s.order();
    TruncatedSeries<Rational> a(m);
    a.c[0] = 1;
    for (int k = 1; k <= m; ++k) {
        Rational acc(0);
        for (int j = 1; j <= k; ++j) acc += Rational(j) * s.c[j] * a.c[k - j];
        a.c[k] = acc / k;
    }
    return a;
}

// ---------------------------------------------------------------------------
// zeta series and the delta calculus

// exp( sum N_m t^m / m ) truncated to the number of supplied counts
inline TruncatedSeries<Rational> zeta_series(const std::vector<uint64_t>& counts, int64_t /*q*/) {
    int m = int(counts.size());
    TruncatedSeries<Rational> logz(m);
    for (int i = 1; i <= m; ++i) logz.c[i] = Rational(Int(counts[i - 1]), Int(i));
    return ts_exp(logz);
}

// delta(G)(t) = G(t) / G(qt); defined on series with constant term 1
template <class R>
TruncatedSeries<R> delta(const TruncatedSeries<R>& g, const R& q) {
    return ts_mul(g, ts_inverse(ts_scale_var(g, q)));
}

// The unique Z with Z(t) = G(t) Z(qt): z_k = (1-q^k)^{-1} sum_{j<k} g_{k-j} q^j z_j.
// Exact rational recursion; the infinite-product form is only used as a
// cross-check modulo powers of q.
inline TruncatedSeries<Rational> delta_inverse(const TruncatedSeries<Rational>& g,
                                               const Rational& q) {
    if (g.c.empty() || g.c[0] != 1)
        throw std::invalid_argument("delta_inverse requires constant term 1");
    int m = g.order();
    TruncatedSeries<Rational> z(m);
    z.c[0] = 1;
    Rational qk(1);
    for (int k = 1; k <= m; ++k) {
        qk *= q;
        if (qk == 1) throw std::invalid_argument("delta_inverse: q^k = 1 in range");
        Rational acc(0);
        Rational qj(1);
        for (int j = 0; j < k; ++j) {
            acc += g.c[k - j] * qj * z.c[j];
            qj *= q;
        }
        z.c[k] = acc / (Rational(1) - qk);
    }
    return z;
}

// finite partial product prod_{i=0}^{L} G(q^i t)
inline TruncatedSeries<Rational> delta_inverse_partial(const TruncatedSeries<Rational>& g,
                                                       const Rational& q, int L) {
    TruncatedSeries<Rational> acc = TruncatedSeries<Rational>::one(g.order());
    Rational qi(1);
    for (int i = 0; i <= L; ++i) {
        acc = ts_mul(acc, ts_scale_var(g, qi));
        qi *= q;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// integer polynomials and rational functions

using IntPoly = std::vector<Int>;  // constant term first, no trailing zeros
using RatPoly = std::vector<Rational>;

inline void poly_trim(IntPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
inline void poly_trim(RatPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int poly_deg(const IntPoly& f) { return int(f.size()) - 1; }

inline RatPoly to_rat(const IntPoly& f) {
    RatPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = Rational(f[i]);
    return r;
}

inline RatPoly rat_mul(const RatPoly& a, const RatPoly& b) {
    if (a.empty() || b.empty()) return {};
    RatPoly r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    poly_trim(r);
    return r;
}

// division with remainder over Q
inline std::pair<RatPoly, RatPoly> rat_divmod(RatPoly f, const RatPoly& g) {
    poly_trim(f);
    if (g.empty()) throw std::invalid_argument("division by zero polynomial");
    RatPoly q;
    if (f.size() >= g.size()) q.assign(f.size() - g.size() + 1, Rational(0));
    while (f.size() >= g.size()) {
        Rational c = f.back() / g.back();
        size_t shift = f.size() - g.size();
        q[shift] = c;
        for (size_t i = 0; i < g.size(); ++i) f[shift + i] -= c * g[i];
        poly_trim(f);
    }
    return {q, f};
}

inline RatPoly rat_gcd(RatPoly a, RatPoly b) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        RatPoly r = rat_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

// clear denominators and divide by integer content; sign fixed so the lowest
// nonzero coefficient is positive
inline IntPoly primitive_part(const RatPoly& f) {
    Int lcm = 1;
    for (auto& c : f) {
        Int den = boost::multiprecision::denominator(c);
        lcm = boost::multiprecision::lcm(lcm, den);
    }
    IntPoly g(f.size());
    for (size_t i = 0; i < f.size(); ++i)
        g[i] = boost::multiprecision::numerator(f[i] * Rational(lcm));
    Int content = 0;
    for (auto& c : g) content = boost::multiprecision::gcd(content, c);
    if (content != 0)
        for (auto& c : g) c /= content;
    for (auto& c : g)
        if (c != 0) {
            if (c < 0)
                for (auto& x : g) x = -x;
            break;
        }
    IntPoly h = g;
    poly_trim(h);
    return h;
}

// Ratio of coprime integer polynomials with constant terms 1.
struct RationalFunction {
    IntPoly num{Int(1)};
    IntPoly den{Int(1)};

    void validate() const {
        if (num.empty() || den.empty() || num[0] != 1 || den[0] != 1)
            throw std::invalid_argument("rational function must have constant terms 1");
    }
};

// reduce a P/Q pair over Q to the canonical coprime integer form
inline RationalFunction reduce_fraction(const RatPoly& p, const RatPoly& q) {
    RatPoly g = rat_gcd(p, q);
    RatPoly pn = p, qn = q;
    if (int(g.size()) > 1) {
        pn = rat_divmod(p, g).first;
        qn = rat_divmod(q, g).first;
    }
    if (pn.empty() || qn.empty() || pn[0] == 0 || qn[0] == 0)
        throw std::invalid_argument("fraction does not normalize to constant terms 1");
    Rational p0 = pn[0], q0 = qn[0];
    for (auto& c : pn) c /= p0;
    for (auto& c : qn) c /= q0;
    RationalFunction rf;
    rf.num = primitive_part(pn);
    rf.den = primitive_part(qn);
    if (rf.num.empty()) rf.num = {Int(1)};
    if (rf.den.empty()) rf.den = {Int(1)};
    rf.validate();
    return rf;
}

// series expansion of num/den to the requested order
inline TruncatedSeries<Rational> expand(const RationalFunction& f, int order) {
    TruncatedSeries<Rational> num(order), den(order);
    for (int i = 0; i <= order && i < int(f.num.size()); ++i) num.c[i] = Rational(f.num[i]);
    for (int i = 0; i <= order && i < int(f.den.size()); ++i) den.c[i] = Rational(f.den[i]);
    return ts_mul(num, ts_inverse(den));
}

struct PadeNoSolution : std::runtime_error {
    explicit PadeNoSolution(const std::string& w) : std::runtime_error(w) {}
};
struct PadeValidationMismatch : std::runtime_error {
    explicit PadeValidationMismatch(const std::string& w) : std::runtime_error(w) {}
};

// P/Q with deg <= B matching the series through its whole supplied order
// (>= 2B required); the denominator degree is grown from 0 so scarce data
// cannot admit a spurious higher-degree solution. Every supplied coefficient
// beyond order 2B acts as validation.
inline RationalFunction pade_reconstruct(const TruncatedSeries<Rational>& s, int B) {
    if (s.order() < 2 * B) throw PadeNoSolution("need at least 2B+1 series coefficients");
    if (s.c[0] != 1) throw std::invalid_argument("series must have constant term 1");

    for (int b = 0; b <= B; ++b) {
        // unknowns q_1..q_b; equations sum_{j=0..b} q_j c_{k-j} = 0 for
        // every k with B < k <= order
        int mrows = s.order() - B, ncols = b;
        std::vector<std::vector<Rational>> A(size_t(mrows),
                                             std::vector<Rational>(size_t(ncols) + 1, Rational(0)));
        for (int i = 0; i < mrows; ++i) {
            int k = B + 1 + i;
            for (int j = 1; j <= b; ++j)
                A[size_t(i)][size_t(j - 1)] = (k - j >= 0) ? s.c[size_t(k - j)] : Rational(0);
            A[size_t(i)][size_t(ncols)] = -s.c[size_t(k)];
        }
        std::vector<int> pivot_col(size_t(mrows), -1);
        int rank = 0;
        for (int col = 0; col < ncols && rank < mrows; ++col) {
            int piv = -1;
            for (int row = rank; row < mrows; ++row)
                if (A[size_t(row)][size_t(col)] != 0) {
                    piv = row;
                    break;
                }
            if (piv < 0) continue;
            std::swap(A[size_t(rank)], A[size_t(piv)]);
            Rational inv = A[size_t(rank)][size_t(col)];
            for (auto& x : A[size_t(rank)]) x /= inv;
            for (int row = 0; row < mrows; ++row) {
                if (row == rank || A[size_t(row)][size_t(col)] == 0) continue;
                Rational f = A[size_t(row)][size_t(col)];
                for (int cc = col; cc <= ncols; ++cc)
                    A[size_t(row)][size_t(cc)] -= f * A[size_t(rank)][size_t(cc)];
            }
            pivot_col[size_t(rank)] = col;
            ++rank;
        }
        bool consistent = true;
        for (int row = rank; row < mrows; ++row)
            if (A[size_t(row)][size_t(ncols)] != 0) consistent = false;
        if (!consistent) continue;

        RatPoly qpoly(size_t(b) + 1, Rational(0));
        qpoly[0] = 1;
        for (int row = 0; row < rank; ++row)
            qpoly[size_t(pivot_col[size_t(row)] + 1)] = A[size_t(row)][size_t(ncols)];
        poly_trim(qpoly);

        RatPoly ppoly(size_t(B) + 1, Rational(0));
        for (int k = 0; k <= B; ++k) {
            Rational acc(0);
            for (int j = 0; j <= k && j < int(qpoly.size()); ++j)
                acc += qpoly[size_t(j)] * s.c[size_t(k - j)];
            ppoly[size_t(k)] = acc;
        }
        poly_trim(ppoly);

        RationalFunction rf;
        try {
            rf = reduce_fraction(ppoly, qpoly);
        } catch (const std::invalid_argument&) {
            continue;  // reduced form is not integral: spurious solution
        }
        TruncatedSeries<Rational> back = expand(rf, s.order());
        if (back.c == s.c) return rf;
    }
    throw PadeNoSolution("no validated solution with denominator degree <= " + std::to_string(B));
}

// escalate the degree bound until validation passes
inline RationalFunction pade_auto(const TruncatedSeries<Rational>& s, int B0, int Bmax) {
    std::string last;
    for (int B = B0; B <= Bmax && 2 * B <= s.order(); ++B) {
        try {
            return pade_reconstruct(s, B);
        } catch (const PadeNoSolution& e) {
            last = e.what();
        } catch (const PadeValidationMismatch& e) {
            last = e.what();
        }
    }
    throw PadeNoSolution("no valid reconstruction up to the degree ceiling" +
                         (last.empty() ? std::string() : "; last: " + last));
}

// ---------------------------------------------------------------------------
// Newton polygons

// ord_p of an exact integer; nullopt for zero
inline std::optional<int64_t> int_ord_p(const Int& x, int64_t p) {
    if (x == 0) return std::nullopt;
    Int v = boost::multiprecision::abs(x);
    int64_t ord = 0;
    while (v % p == 0) {
        v /= p;
        ++ord;
    }
    return ord;
}

struct NewtonPolygon {
    // lower convex hull of (k, ord_p(c_k)); slopes are reported in ord_q
    // units, i.e. ord_p / a
    std::vector<std::pair<int64_t, int64_t>> vertices;  // (k, ord_p)
    std::vector<Rational> slopes;                       // one per lattice step, ord_q units
    int a = 1;

    Rational min_slope() const {
        if (slopes.empty()) throw std::logic_error("polygon has no segments");
        return slopes.front();
    }
};

// hull of explicit (k, ord) points (ord in ord_p units); `a` converts to ord_q
inline NewtonPolygon newton_polygon_from_points(std::vector<std::pair<int64_t, int64_t>> pts,
                                                int a) {
    if (pts.empty()) throw std::invalid_argument("newton polygon of no points");
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<int64_t, int64_t>> hull;
    for (auto& pt : pts) {
        while (hull.size() >= 2) {
            auto& p1 = hull[hull.size() - 2];
            auto& p2 = hull[hull.size() - 1];
            // drop p2 if it lies on or above segment p1-pt
            Int lhs = Int(p2.second - p1.second) * Int(pt.first - p1.first);
            Int rhs = Int(pt.second - p1.second) * Int(p2.first - p1.first);
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    NewtonPolygon np;
    np.a = a;
    np.vertices = hull;
    for (size_t i = 1; i < hull.size(); ++i) {
        Rational s(Int(hull[i].second - hull[i - 1].second),
                   Int(hull[i].first - hull[i - 1].first) * a);
        int64_t len = hull[i].first - hull[i - 1].first;
        for (int64_t k = 0; k < len; ++k) np.slopes.push_back(s);
    }
    return np;
}

inline NewtonPolygon newton_polygon(const IntPoly& f, int64_t p, int a) {
    std::vector<std::pair<int64_t, int64_t>> pts;
    for (size_t k = 0; k < f.size(); ++k)
        if (auto o = int_ord_p(f[k], p)) pts.push_back({int64_t(k), *o});
    if (pts.empty()) throw std::invalid_argument("newton polygon of the zero polynomial");
    return newton_polygon_from_points(std::move(pts), a);
}

// ---------------------------------------------------------------------------
// weak visibility

struct VisibilityHit {
    int zeta_index;
    int shift;  // m, as in F(t/q^m)
    enum class Side { zero, pole } side;
};

struct VisibilityReport {
    std::vector<VisibilityHit> hits;
    int range = 0;
    bool witnessed() const { return !hits.empty(); }
};

inline bool divides_over_Q(const IntPoly& d, const IntPoly& f) {
    if (int(d.size()) <= 1) return true;
    if (f.size() < d.size()) return false;
    auto [q, rem] = rat_divmod(to_rat(f), to_rat(d));
    (void)q;
    return rem.empty();
}

// F(q^m t) cleared to integer coefficients: its reciprocal roots are the
// reciprocal roots of F multiplied by q^m
inline IntPoly shift_factor(const IntPoly& f, int64_t q, int m) {
    IntPoly g(f.size());
    int deg = poly_deg(f);
    for (int k = 0; k <= deg; ++k) {
        Int scale = 1;
        if (m >= 0)
            for (int i = 0; i < m * k; ++i) scale *= q;
        else
            for (int i = 0; i < (-m) * (deg - k); ++i) scale *= q;
        g[size_t(k)] = f[size_t(k)] * scale;
    }
    // clear integer content so divisibility over Q is tested on the
    // primitive representative
    RatPoly rp = to_rat(g);
    return primitive_part(rp);
}

// For each shift m in [-range, range], test whether the rescaled factor
// F(q^m t), cleared to integer coefficients, divides a numerator or a
// denominator; a hit at shift m witnesses the q^m-multiples of the factor's
// reciprocal roots. An empty report means "not witnessed within range",
// never a refutation.
inline VisibilityReport weak_visibility_check(const IntPoly& factor,
                                              const std::vector<RationalFunction>& zetas,
                                              int64_t q, int range) {
    if (factor.empty() || factor[0] != 1)
        throw std::invalid_argument("factor must have constant term 1");
    VisibilityReport rep;
    rep.range = range;
    for (int m = -range; m <= range; ++m) {
        IntPoly fm = shift_factor(factor, q, m);
        for (int zi = 0; zi < int(zetas.size()); ++zi) {
            if (divides_over_Q(fm, zetas[zi].num))
                rep.hits.push_back({zi, m, VisibilityHit::Side::zero});
            if (divides_over_Q(fm, zetas[zi].den))
                rep.hits.push_back({zi, m, VisibilityHit::Side::pole});
        }
    }
    return rep;
}

}  // namespace dwb::series
