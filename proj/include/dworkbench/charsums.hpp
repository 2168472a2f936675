#pragma once

// Exact cyclotomic-integer arithmetic and toric exponential sums. Character
// values live in Z[zeta_p], represented canonically modulo the p-th
// cyclotomic polynomial; nothing here is ever approximated by floats.

#include <vector>

#include "dworkbench/geometry.hpp"
#include "dworkbench/series.hpp"

namespace dwb::charsums {

using geometry::CountOptions;
using geometry::MultiPoly;
using geometry::PolySystem;
using geometry::Region;
using series::Int;
using series::Rational;
using series::TruncatedSeries;

// Element of Z[X]/Phi_p(X) (or its rational version), X -> zeta_p, stored in
// the basis 1, X, ..., X^{p-2}.
template <class T>
struct Cyclo {
    int64_t p = 0;
    std::vector<T> c;  // length p-1

    Cyclo() = default;
    explicit Cyclo(int64_t prime) : p(prime), c(size_t(prime - 1), T(0)) {}

    static Cyclo from_int(int64_t prime, T v) {
        Cyclo r(prime);
        r.c[0] = std::move(v);
        return r;
    }

    // zeta_p^k as a canonical element
    static Cyclo root_power(int64_t prime, int64_t k) {
        Cyclo r(prime);
        k = ((k % prime) + prime) % prime;
        if (k < prime - 1)
            r.c[size_t(k)] = T(1);
        else  // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
            for (auto& x : r.c) x = T(-1);
        return r;
    }

    bool is_zero() const {
        for (auto& x : c)
            if (x != T(0)) return false;
        return true;
    }

    // the element is a rational number iff all higher coordinates vanish
    bool is_scalar() const {
        for (size_t i = 1; i < c.size(); ++i)
            if (c[i] != T(0)) return false;
        return true;
    }

    bool operator==(const Cyclo& o) const { return p == o.p && c == o.c; }
};

template <class T>
Cyclo<T> operator+(const Cyclo<T>& a, const Cyclo<T>& b) {
    Cyclo<T> r(a.p);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

template <class T>
Cyclo<T> operator-(const Cyclo<T>& a, const Cyclo<T>& b) {
    Cyclo<T> r(a.p);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

template <class T>
Cyclo<T> operator*(const Cyclo<T>& a, const Cyclo<T>& b) {
    // multiply in Z[X]/(X^p - 1) by cyclic convolution, then reduce to the
    // Phi_p basis using 1 + X + ... + X^{p-1} = 0
    int64_t p = a.p;
    std::vector<T> full(size_t(p), T(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == T(0)) continue;
        for (size_t j = 0; j < b.c.size(); ++j) {
            size_t k = i + j;
            if (k >= size_t(p)) k -= size_t(p);
            full[k] += a.c[i] * b.c[j];
        }
    }
    Cyclo<T> r(p);
    for (size_t i = 0; i + 1 < size_t(p); ++i) r.c[i] = full[i] - full[size_t(p) - 1];
    return r;
}

template <class T>
Cyclo<T> cyclo_scale(const Cyclo<T>& a, const T& s) {
    Cyclo<T> r(a.p);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] * s;
    return r;
}

// Galois action zeta -> zeta^k, gcd(k, p) = 1
template <class T>
Cyclo<T> cyclo_galois(const Cyclo<T>& a, int64_t k) {
    Cyclo<T> r(a.p);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == T(0)) continue;
        r = r + cyclo_scale(Cyclo<T>::root_power(a.p, int64_t(i) * k), a.c[i]);
    }
    return r;
}

using CycloInt = Cyclo<Int>;
using CycloRat = Cyclo<Rational>;

inline CycloRat to_rational(const CycloInt& a) {
    CycloRat r(a.p);
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = Rational(a.c[i]);
    return r;
}

// ---------------------------------------------------------------------------

// zeta_p^{Tr(x)} for a field element (absolute trace to F_p)
inline CycloInt character(const fields::FieldElement& x) {
    return CycloInt::root_power(x.p(), fields::trace_to_prime(x));
}

// S*_m(g): sum of zeta_p^{Tr g(x)} over the m-torus points, computed by
// bucketing points by the trace of the value, so the cyclotomic element is
// assembled once from integer counters.
inline CycloInt toric_exp_sum(const MultiPoly& g, const fields::FieldSpec& spec, int m,
                              const CountOptions& opt = {}) {
    PolySystem wrapper(spec, g.n, {}, PolySystem::KeepOrderTag{});
    auto ext = geometry::extension_for(wrapper, m, opt);
    fields::DenseField F(ext);
    uint64_t q = F.size();
    uint64_t total = checked_pow(q - 1, uint64_t(g.n), opt.enum_cap);

    geometry::CompiledPoly cg = geometry::compile_poly(g, F);
    int64_t p = spec.p;

    int nt = geometry::effective_threads(opt.threads);
    std::vector<int64_t> zero(size_t(p), 0);
    auto buckets = parallel_chunks<std::vector<int64_t>>(
        total, nt, zero,
        [&](uint64_t b, uint64_t e) {
            std::vector<int64_t> acc(size_t(p), 0);
            std::vector<uint32_t> pt(g.n);
            for (uint64_t i = b; i < e; ++i) {
                geometry::decode_point(i, g.n, q - 1, Region::torus, pt.data());
                ++acc[size_t(F.trace(cg.eval(F, pt.data())))];
            }
            return acc;
        },
        [&](std::vector<int64_t> a, std::vector<int64_t> b) {
            for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
            return a;
        });

    CycloInt s(p);
    for (int64_t t = 0; t < p; ++t)
        s = s + cyclo_scale(CycloInt::root_power(p, t), Int(buckets[size_t(t)]));
    return s;
}

// g = sum_i x_{n+i} f_i in n+r variables; deg g = d_1 + 1
inline MultiPoly dwork_construction(const PolySystem& sys) {
    if (sys.r() == 0) throw InputError("dwork_construction: empty system");
    MultiPoly g;
    int n = sys.n;
    int r = sys.r();
    g.n = n + r;
    for (int i = 0; i < r; ++i)
        for (auto& [e, c] : sys.polys[i].terms) {
            geometry::Exponents ne(n + r, 0);
            for (int v = 0; v < n; ++v) ne[v] = e[v];
            ne[n + i] = 1;
            g.add_term(ne, c, sys.field.p);
        }
    return g;
}

// ---------------------------------------------------------------------------
// the inclusion-exclusion identity
//   S*_m(g) = sum_{J subset {1..r}} (-1)^{r-|J|} q^{m|J|} |Z*_J(F_{q^m})|
// Both sides are computed exactly. The left side groups the torus sum over
// the auxiliary variables as a product of inner sums, each of which is
// evaluated by literal enumeration (a regrouping of finitely many terms, not
// an appeal to orthogonality).

struct IdentityRecord {
    int m = 0;
    CycloInt lhs;
    CycloInt rhs;
    std::vector<uint64_t> torus_counts;  // |Z*_J|, J in subset-mask order
    bool matches = false;
};

inline CycloInt toric_sum_of_dwork_poly(const PolySystem& sys, int m, const CountOptions& opt) {
    auto ext = geometry::extension_for(sys, m, opt);
    fields::DenseField F(ext);
    uint64_t q = F.size();
    int64_t p = sys.field.p;
    int n = sys.n;
    int r = sys.r();
    uint64_t total = checked_pow(q - 1, uint64_t(n), opt.enum_cap);

    auto polys = geometry::compile_system(sys, geometry::all_indices(sys), F);

    // inner[v] = sum over y in F^x of zeta^{Tr(yv)}, as trace buckets
    std::vector<CycloInt> inner(size_t(q), CycloInt(p));
    for (uint64_t v = 0; v < q; ++v) {
        std::vector<int64_t> cnt(size_t(p), 0);
        for (uint64_t y = 1; y < q; ++y)
            ++cnt[size_t(F.trace(F.mul(uint32_t(y), uint32_t(v))))];
        CycloInt s(p);
        for (int64_t t = 0; t < p; ++t)
            s = s + cyclo_scale(CycloInt::root_power(p, t), Int(cnt[size_t(t)]));
        inner[size_t(v)] = s;
    }

    int nt = geometry::effective_threads(opt.threads);
    CycloInt zero(p);
    return parallel_chunks<CycloInt>(
        total, nt, zero,
        [&](uint64_t b, uint64_t e) {
            CycloInt acc(p);
            std::vector<uint32_t> pt(n);
            for (uint64_t i = b; i < e; ++i) {
                geometry::decode_point(i, n, q - 1, Region::torus, pt.data());
                CycloInt prod = CycloInt::from_int(p, Int(1));
                for (int k = 0; k < r; ++k)
                    prod = prod * inner[polys[size_t(k)].eval(F, pt.data())];
                acc = acc + prod;
            }
            return acc;
        },
        [](CycloInt a, CycloInt b) { return a + b; });
}

inline IdentityRecord inclusion_exclusion_check(const PolySystem& sys, int m,
                                                const CountOptions& opt = {}) {
    IdentityRecord rec;
    rec.m = m;
    int64_t p = sys.field.p;
    int r = sys.r();

    rec.lhs = toric_sum_of_dwork_poly(sys, m, opt);

    Int qm = 1;
    for (int i = 0; i < m * sys.field.a; ++i) qm *= p;

    CycloInt rhs(p);
    for (int mask = 0; mask < (1 << r); ++mask) {
        std::vector<int> subset;
        for (int i = 0; i < r; ++i)
            if (mask & (1 << i)) subset.push_back(i + 1);
        uint64_t cnt = geometry::count(sys, subset, m, Region::torus, opt);
        rec.torus_counts.push_back(cnt);
        Int coeff = Int(cnt);
        for (int i = 0; i < int(subset.size()); ++i) coeff *= qm;
        if ((r - int(subset.size())) % 2 == 1) coeff = -coeff;
        rhs = rhs + CycloInt::from_int(p, coeff);
    }
    rec.rhs = rhs;
    rec.matches = rec.lhs == rec.rhs;
    return rec;
}

inline void require_identity(const IdentityRecord& rec) {
    if (!rec.matches)
        throw IdentityViolation("inclusion-exclusion identity failed at m = " +
                                std::to_string(rec.m) + " (arithmetic bug)");
}

// ---------------------------------------------------------------------------

// L*(t) = exp( sum S*_m(g) t^m / m ) with exact cyclotomic-rational
// coefficients; g is the auxiliary polynomial of the system.
inline TruncatedSeries<CycloRat> l_star_series(const PolySystem& sys, int M,
                                               const CountOptions& opt = {}) {
    int64_t p = sys.field.p;
    std::vector<CycloInt> sums;
    for (int m = 1; m <= M; ++m) sums.push_back(toric_sum_of_dwork_poly(sys, m, opt));

    // exp via the ODE recursion, coefficients in Q(zeta_p)
    TruncatedSeries<CycloRat> a(M);
    a.c[0] = CycloRat::from_int(p, Rational(1));
    for (int k = 1; k <= M; ++k) {
        CycloRat acc(p);
        for (int j = 1; j <= k; ++j)
            acc = acc + to_rational(sums[size_t(j - 1)]) * a.c[size_t(k - j)];
        a.c[size_t(k)] = cyclo_scale(acc, Rational(1, k));
    }
    return a;
}

// the rational projection, valid when every coefficient is a scalar
inline TruncatedSeries<Rational> l_star_rational(const TruncatedSeries<CycloRat>& l) {
    TruncatedSeries<Rational> out(l.order());
    for (int k = 0; k <= l.order(); ++k) {
        if (!l.c[size_t(k)].is_scalar())
            throw IdentityViolation("L* coefficient at t^" + std::to_string(k) +
                                    " has a nonrational cyclotomic part");
        out.c[size_t(k)] = l.c[size_t(k)].c[0];
    }
    return out;
}

}  // namespace dwb::charsums
