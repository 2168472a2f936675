#pragma once

// The truncated Dwork operator at q = p: Artin-Hasse series, the root gamma
// with val(gamma) = val(pi), the splitting function theta(z) = E(gamma z),
// Teichmuller lifts, the coefficient product G(x), the matrix of
// alpha = psi o (mult by G) on monomial bases of the spaces B_I truncated by
// total degree, traces and Fredholm determinants with certified precision
// floors, the trace-formula check against exact exponential sums, and the
// weight lower bound for first slopes.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dworkbench/charsums.hpp"
#include "dworkbench/geometry.hpp"
#include "dworkbench/padic.hpp"
#include "dworkbench/series.hpp"

namespace dwb::dwork {

using geometry::Exponents;
using geometry::MultiPoly;
using geometry::PolySystem;
using padic::PadicRing;
using padic::PElem;
using series::Rational;

// ---------------------------------------------------------------------------
// Artin-Hasse exponential and the splitting function

struct ArtinHasseData {
    int64_t p = 0;
    int mprec = 0;
    int D_E = 0;
    std::vector<int64_t> E;      // E_k mod p^mprec, p-integral
    PElem gamma;                 // root of sum z^{p^m}/p^m with val_pi = 1
    std::vector<PElem> theta;    // theta_k = E_k * gamma^k, val >= k
    PElem zeta_image;            // theta(1), a primitive p-th root of unity

    PadicRing ring() const { return PadicRing(p, mprec); }
};

// Coefficients of exp( sum_{p^m <= D} z^{p^m}/p^m ) via the derivative
// recursion k E_k = sum_{p^m <= k} E_{k - p^m}, run in exact rational
// arithmetic and reduced at the end (every coefficient must be p-integral).
inline std::vector<Rational> artin_hasse_rational(int64_t p, int D) {
    std::vector<Rational> E(size_t(D) + 1);
    E[0] = 1;
    for (int k = 1; k <= D; ++k) {
        Rational acc(0);
        for (int64_t pm = 1; pm <= k; pm *= p) acc += E[size_t(k - pm)];
        E[size_t(k)] = acc / k;
    }
    return E;
}

inline int64_t rational_mod_pk(const Rational& x, int64_t p, int64_t pk) {
    series::Int num = boost::multiprecision::numerator(x);
    series::Int den = boost::multiprecision::denominator(x);
    if (den % p == 0) throw std::domain_error("value is not p-integral");
    series::Int n = num % pk;
    if (n < 0) n += pk;
    series::Int d = den % pk;
    // invert d mod pk
    series::Int a = d, b = pk, u = 1, v = 0;
    while (b != 0) {
        series::Int q = a / b;
        series::Int t = a - q * b;
        a = b;
        b = t;
        t = u - q * v;
        u = v;
        v = t;
    }
    series::Int inv = u % pk;
    if (inv < 0) inv += pk;
    return int64_t((n * inv) % pk);
}

inline std::vector<int64_t> artin_hasse(int64_t p, int D_E, int mprec) {
    auto E = artin_hasse_rational(p, D_E);
    int64_t pk = 1;
    for (int i = 0; i < mprec; ++i) pk *= p;
    std::vector<int64_t> out(E.size());
    for (size_t k = 0; k < E.size(); ++k) out[k] = rational_mod_pk(E[k], p, pk);
    return out;
}

// Newton iteration for the root gamma of sum z^{p^m}/p^m with gamma = pi
// mod pi^2, run at inflated internal precision to absorb the exact divisions
// by p^m.
inline PElem gamma_root(int64_t p, int mprec) {
    if (mprec < 2) throw InputError("gamma_root needs precision >= 2");
    // terms with p^m - m(p-1) beyond the cap cannot affect the result
    int mT = 0;
    {
        int guess_prec = mprec + 8;
        while (ipow(p, mT + 1) - int64_t(mT + 1) * (p - 1) <= int64_t(p - 1) * guess_prec) ++mT;
    }
    PadicRing R(p, mprec + mT + 2);
    int target = int(p - 1) * mprec;

    auto eval_h = [&](const PElem& z) {
        PElem acc = R.zero();
        for (int m = 0; m <= mT; ++m)
            acc = R.add(acc, R.div_pk(R.pow(z, uint64_t(ipow(p, m))), m));
        return acc;
    };
    auto eval_dh = [&](const PElem& z) {
        PElem acc = R.zero();
        for (int m = 0; m <= mT; ++m)
            acc = R.add(acc, R.pow(z, uint64_t(ipow(p, m) - 1)));
        return acc;
    };

    PElem z = R.pi();
    for (int it = 0; it < 64; ++it) {
        PElem h = eval_h(z);
        if (R.val_pi(h) >= R.cap()) break;
        PElem step = R.mul(h, R.inv_unit(eval_dh(z)));
        z = R.sub(z, step);
        if (R.val_pi(step) >= R.cap()) break;
    }
    PElem resid = eval_h(z);
    if (R.val_pi(resid) < target)
        throw std::runtime_error("gamma root iteration stagnated (precision too low)");

    PadicRing out_ring(p, mprec);
    PElem g = out_ring.reduce_from(z);
    if (out_ring.val_pi(g) != 1) throw std::logic_error("gamma does not have val_pi 1");
    if (out_ring.val_pi(out_ring.sub(g, out_ring.pi())) < 2)
        throw std::logic_error("gamma is not congruent to pi mod pi^2");
    return g;
}

inline ArtinHasseData make_artin_hasse(int64_t p, int mprec, int D_E = 0) {
    ArtinHasseData ah;
    ah.p = p;
    ah.mprec = mprec;
    PadicRing R(p, mprec);
    int cap = R.cap();
    ah.D_E = std::max(D_E, cap + 1);
    ah.E = artin_hasse(p, ah.D_E, mprec);
    ah.gamma = gamma_root(p, mprec);

    ah.theta.reserve(size_t(ah.D_E) + 1);
    PElem gk = R.from_int(1);
    for (int k = 0; k <= ah.D_E; ++k) {
        PElem t = R.mul_int(gk, ah.E[size_t(k)]);
        if (R.val_pi(t) < std::min(k, cap))
            throw std::logic_error("theta coefficient " + std::to_string(k) +
                                   " has valuation below k");
        ah.theta.push_back(std::move(t));
        gk = R.mul(gk, ah.gamma);
    }

    PElem one = R.from_int(1);
    PElem z = R.zero();
    for (int k = 0; k <= std::min(ah.D_E, cap); ++k) z = R.add(z, ah.theta[size_t(k)]);
    ah.zeta_image = z;
    if (!R.is_zero(R.sub(R.pow(z, uint64_t(p)), one)))
        throw std::logic_error("theta(1)^p != 1 at working precision");
    if (R.val_pi(R.sub(z, one)) != 1)
        throw std::logic_error("theta(1) is not a primitive p-th root of unity");
    return ah;
}

// embed an exact cyclotomic integer via zeta_p -> theta(1)
inline PElem embed_cyclo(const ArtinHasseData& ah, const charsums::CycloInt& x) {
    PadicRing R(ah.p, ah.mprec);
    int64_t pk = R.coord_modulus();
    PElem acc = R.zero();
    PElem zpow = R.from_int(1);
    for (size_t i = 0; i < x.c.size(); ++i) {
        series::Int res = x.c[i] % pk;
        if (res < 0) res += pk;
        acc = R.add(acc, R.mul_int(zpow, int64_t(res)));
        zpow = R.mul(zpow, ah.zeta_image);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// the coefficient product G(x) = prod_u theta(A_u x^u)

struct SplittingProduct {
    int N = 0;
    int D_G = 0;
    int d = 0;  // deg g
    std::map<Exponents, PElem> coeff;
    std::map<Exponents, int> val_lb;  // recorded valuation lower bound
};

inline SplittingProduct splitting_product(const MultiPoly& g, const ArtinHasseData& ah, int D_G) {
    PadicRing R(ah.p, ah.mprec);
    SplittingProduct sp;
    sp.N = g.n;
    sp.D_G = D_G;
    sp.d = std::max(g.degree(), 1);

    Exponents zero(size_t(g.n), 0);
    sp.coeff[zero] = R.from_int(1);
    sp.val_lb[zero] = 0;

    for (auto& [u, coeffs] : g.terms) {
        if (int(coeffs.size()) > 1)
            throw InputError("the truncated operator is restricted to q = p (a = 1)");
        int64_t au = coeffs.empty() ? 0 : coeffs[0];
        PElem A = R.teichmuller(au);
        int usum = std::accumulate(u.begin(), u.end(), 0);

        // powers of the factor theta(A x^u): k-th term theta_k A^k x^{ku}
        int kmax = usum == 0 ? std::min(ah.D_E, R.cap()) : D_G / usum;
        std::vector<PElem> factor;
        PElem Ak = R.from_int(1);
        for (int k = 0; k <= kmax; ++k) {
            if (k > ah.D_E) break;
            factor.push_back(R.mul(ah.theta[size_t(k)], Ak));
            Ak = R.mul(Ak, A);
        }

        if (usum == 0) {
            // constant factor theta(A)
            PElem c = R.zero();
            for (auto& f : factor) c = R.add(c, f);
            for (auto& [w, val] : sp.coeff) val = R.mul(val, c);
            continue;
        }

        std::map<Exponents, PElem> next;
        std::map<Exponents, int> next_lb;
        for (auto& [w, val] : sp.coeff) {
            int wsum = std::accumulate(w.begin(), w.end(), 0);
            for (int k = 0; k < int(factor.size()); ++k) {
                if (wsum + k * usum > D_G) break;
                Exponents nw = w;
                for (int v = 0; v < g.n; ++v) nw[size_t(v)] += k * u[size_t(v)];
                PElem add = R.mul(val, factor[size_t(k)]);
                auto it = next.find(nw);
                if (it == next.end()) {
                    next.emplace(nw, std::move(add));
                    next_lb[nw] = sp.val_lb[w] + k;
                } else {
                    it->second = R.add(it->second, add);
                    next_lb[nw] = std::min(next_lb[nw], sp.val_lb[w] + k);
                }
            }
        }
        sp.coeff = std::move(next);
        sp.val_lb = std::move(next_lb);
    }
    return sp;
}

// ---------------------------------------------------------------------------
// the truncated matrix of alpha on B_I

struct DworkMatrix {
    int64_t p = 0;
    int mprec = 0;
    int N = 0;
    int D = 0;
    int d = 1;  // deg g
    std::vector<int> I;  // 1-based coordinates forced positive
    std::vector<Exponents> basis;
    std::vector<PElem> entries;  // row-major: entries[row * basis.size() + col]

    size_t dim() const { return basis.size(); }
    const PElem& at(size_t row, size_t col) const { return entries[row * basis.size() + col]; }

    PadicRing ring() const { return PadicRing(p, mprec); }

    // valuation floor certifying truncated traces and determinant
    // coefficients against the untruncated operator
    int truncation_floor() const {
        PadicRing R(p, mprec);
        return int(std::min<int64_t>(ceil_div(int64_t(p - 1) * (D + 1), d), R.cap()));
    }
};

inline std::vector<Exponents> monomial_basis(int N, int D, const std::vector<int>& I) {
    std::vector<bool> forced(size_t(N), false);
    for (int i : I) {
        if (i < 1 || i > N) throw InputError("subset index out of range");
        forced[size_t(i - 1)] = true;
    }
    std::vector<Exponents> basis;
    Exponents cur(size_t(N), 0);
    // lexicographic depth-first enumeration of |u| <= D with u_i >= 1 on I
    auto rec = [&](auto&& self, int var, int rem) -> void {
        if (var == N) {
            basis.push_back(cur);
            return;
        }
        int lo = forced[size_t(var)] ? 1 : 0;
        for (int e = lo; e <= rem; ++e) {
            cur[size_t(var)] = e;
            self(self, var + 1, rem - e);
        }
        cur[size_t(var)] = 0;
    };
    rec(rec, 0, D);
    return basis;
}

inline DworkMatrix alpha_matrix(const MultiPoly& g, const ArtinHasseData& ah,
                                const std::vector<int>& I, int D,
                                const SplittingProduct* precomputed = nullptr) {
    SplittingProduct local;
    const SplittingProduct* sp = precomputed;
    if (!sp) {
        local = splitting_product(g, ah, int(ah.p) * D);
        sp = &local;
    }
    if (sp->D_G < int(ah.p) * D)
        throw InputError("splitting product truncated below p*D; insufficient D_G");

    DworkMatrix M;
    M.p = ah.p;
    M.mprec = ah.mprec;
    M.N = g.n;
    M.D = D;
    M.d = sp->d;
    M.I = I;
    M.basis = monomial_basis(g.n, D, I);

    PadicRing R(ah.p, ah.mprec);
    size_t n = M.basis.size();
    M.entries.assign(n * n, R.zero());
    for (size_t row = 0; row < n; ++row) {
        const Exponents& u = M.basis[row];
        for (size_t col = 0; col < n; ++col) {
            const Exponents& v = M.basis[col];
            Exponents w(u.size());
            bool ok = true;
            for (size_t i = 0; i < u.size(); ++i) {
                int x = int(ah.p) * u[i] - v[i];
                if (x < 0) {
                    ok = false;
                    break;
                }
                w[i] = x;
            }
            if (!ok) continue;
            auto it = sp->coeff.find(w);
            if (it != sp->coeff.end()) M.entries[row * n + col] = it->second;
        }
    }
    return M;
}

// drop basis monomials outside the cone described by the linear inequality
// u_1 + ... + u_n <= sum_j d_j u_{n+j}; only meaningful for the auxiliary
// polynomial of a system with degrees d_j
inline bool in_lp_cone(const Exponents& u, int n, const std::vector<int>& degrees) {
    int64_t lhs = 0, rhs = 0;
    for (int i = 0; i < n; ++i) lhs += u[size_t(i)];
    for (size_t j = 0; j < degrees.size(); ++j) rhs += int64_t(degrees[j]) * u[size_t(n) + j];
    return lhs <= rhs;
}

inline DworkMatrix cone_filtered(const DworkMatrix& M, int n, const std::vector<int>& degrees) {
    DworkMatrix F = M;
    F.basis.clear();
    std::vector<size_t> keep;
    for (size_t i = 0; i < M.basis.size(); ++i)
        if (in_lp_cone(M.basis[i], n, degrees)) {
            keep.push_back(i);
            F.basis.push_back(M.basis[i]);
        }
    size_t m = keep.size();
    F.entries.assign(m * m, PElem(size_t(M.p - 1), 0));
    for (size_t r = 0; r < m; ++r)
        for (size_t c = 0; c < m; ++c) F.entries[r * m + c] = M.at(keep[r], keep[c]);
    return F;
}

// ---------------------------------------------------------------------------
// traces and Fredholm determinants

inline std::vector<PElem> mat_mul(const PadicRing& R, const std::vector<PElem>& A,
                                  const std::vector<PElem>& B, size_t n, int threads = 0) {
    std::vector<PElem> C(n * n, R.zero());
    int nt = geometry::effective_threads(threads);
    parallel_chunks<int>(
        n, nt, 0,
        [&](uint64_t r0, uint64_t r1) {
            for (uint64_t i = r0; i < r1; ++i)
                for (size_t k = 0; k < n; ++k) {
                    const PElem& a = A[size_t(i) * n + k];
                    if (R.is_zero(a)) continue;
                    for (size_t j = 0; j < n; ++j) {
                        const PElem& b = B[k * n + j];
                        if (R.is_zero(b)) continue;
                        C[size_t(i) * n + j] = R.add(C[size_t(i) * n + j], R.mul(a, b));
                    }
                }
            return 0;
        },
        [](int, int) { return 0; });
    return C;
}

inline PElem mat_trace(const PadicRing& R, const std::vector<PElem>& A, size_t n) {
    PElem t = R.zero();
    for (size_t i = 0; i < n; ++i) t = R.add(t, A[i * n + i]);
    return t;
}

// Tr(alpha^m) for m = 1..m_max on the truncated basis
inline std::vector<PElem> traces(const DworkMatrix& M, int m_max, int threads = 0) {
    PadicRing R = M.ring();
    size_t n = M.dim();
    std::vector<PElem> out;
    std::vector<PElem> P = M.entries;
    out.push_back(mat_trace(R, P, n));
    for (int m = 2; m <= m_max; ++m) {
        P = mat_mul(R, P, M.entries, n, threads);
        out.push_back(mat_trace(R, P, n));
    }
    return out;
}

struct FredholmSeries {
    std::vector<PElem> c;            // det(1 - t alpha) mod t^{K+1}
    std::vector<int> certified_val;  // per-coefficient certified pi-precision
};

// det(1 - t alpha) from traces via log-derivative recursion; division by k
// costs (p-1) ord_p(k) of certified precision per step
inline FredholmSeries fredholm_from_traces(const PadicRing& R, const std::vector<PElem>& tr,
                                           int K, int trace_floor) {
    if (K > int(tr.size())) throw InputError("need K traces to compute K determinant coefficients");
    FredholmSeries f;
    f.c.assign(size_t(K) + 1, R.zero());
    f.certified_val.assign(size_t(K) + 1, R.cap());
    f.c[0] = R.from_int(1);
    for (int k = 1; k <= K; ++k) {
        PElem acc = R.zero();
        int floor_k = std::min(trace_floor, R.cap());
        for (int m = 1; m <= k; ++m) {
            acc = R.add(acc, R.mul(tr[size_t(m - 1)], f.c[size_t(k - m)]));
            floor_k = std::min(floor_k, f.certified_val[size_t(k - m)]);
        }
        int loss = int(R.p() - 1) * ord_p(k, R.p(), R.mprec());
        f.c[size_t(k)] = R.neg(R.div_int(acc, k));
        f.certified_val[size_t(k)] = std::max(0, floor_k - loss);
        if (f.certified_val[size_t(k)] == 0)
            throw std::runtime_error("determinant coefficient " + std::to_string(k) +
                                     " exceeds the precision-certifiable range");
    }
    return f;
}

// det(1 - tA) mod t^{K+1} by the division-free Samuelson-Berkowitz
// recursion, truncated to degree K throughout; no precision is lost to
// divisions, so every coefficient is certified to the truncation floor.
inline FredholmSeries char_series_direct(const DworkMatrix& M, int K, int threads = 0) {
    (void)threads;
    PadicRing R = M.ring();
    size_t n = M.dim();
    int kmax = int(std::min<size_t>(size_t(K), n));
    std::vector<PElem> C{R.from_int(1)};
    if (n > 0) {
        C.push_back(R.neg(M.at(0, 0)));
        for (size_t r = 2; r <= n; ++r) {
            // first column of the Toeplitz factor:
            // 1, -a_rr, -(R S), -(R A S), -(R A^2 S), ...
            std::vector<PElem> col;
            col.push_back(R.from_int(1));
            col.push_back(R.neg(M.at(r - 1, r - 1)));
            size_t inner = r - 1;
            std::vector<PElem> w(inner);
            for (size_t i = 0; i < inner; ++i) w[i] = M.at(i, r - 1);  // S
            for (int j = 0; j + 2 <= K && j + 2 <= int(r); ++j) {
                PElem rs = R.zero();
                for (size_t i = 0; i < inner; ++i)
                    rs = R.add(rs, R.mul(M.at(r - 1, i), w[i]));  // R . w
                col.push_back(R.neg(rs));
                if (j + 3 > K || j + 3 > int(r)) break;
                std::vector<PElem> w2(inner, R.zero());
                for (size_t i = 0; i < inner; ++i) {
                    if (R.is_zero(w[i])) continue;
                    for (size_t i2 = 0; i2 < inner; ++i2)
                        w2[i2] = R.add(w2[i2], R.mul(M.at(i2, i), w[i]));
                }
                w = std::move(w2);
            }
            int clen = int(std::min<size_t>(size_t(kmax), r)) + 1;
            std::vector<PElem> Cn(size_t(clen), R.zero());
            for (int i = 0; i < clen; ++i)
                for (int j = 0; j < int(C.size()) && j <= i; ++j) {
                    int t = i - j;
                    if (t < int(col.size()))
                        Cn[size_t(i)] = R.add(Cn[size_t(i)], R.mul(col[size_t(t)], C[size_t(j)]));
                }
            C = std::move(Cn);
        }
    }
    FredholmSeries f;
    f.c.assign(size_t(K) + 1, R.zero());
    f.certified_val.assign(size_t(K) + 1, M.truncation_floor());
    f.certified_val[0] = R.cap();
    for (int k = 0; k <= K && k < int(C.size()); ++k) f.c[size_t(k)] = C[size_t(k)];
    return f;
}

// ---------------------------------------------------------------------------
// trace formula verification

struct TraceFormulaRecord {
    int m = 0;
    int D = 0;
    int floor = 0;        // certified truncation floor V(D), pi units
    int val_diff = 0;     // valuation of the two-sided difference, saturating
    bool pass = false;
    charsums::CycloInt exact_sum;  // S*_m in Z[zeta_p]
};

// (q^m - 1)^N Tr(alpha^m) against the exponential sum S*_m embedded via
// zeta_p -> theta(1); q = p throughout this module.
inline TraceFormulaRecord verify_trace_formula(const MultiPoly& g, const ArtinHasseData& ah,
                                               const DworkMatrix& M, int m,
                                               const geometry::CountOptions& opt = {}) {
    PadicRing R(ah.p, ah.mprec);
    fields::FieldSpec spec{ah.p, 1, {}};
    TraceFormulaRecord rec;
    rec.m = m;
    rec.D = M.D;
    rec.floor = M.truncation_floor();
    rec.exact_sum = charsums::toric_exp_sum(g, spec, m, opt);

    auto tr = traces(M, m, opt.threads);
    int64_t qm1 = ipow(ah.p, m) - 1;
    int64_t scale = 1;
    for (int i = 0; i < g.n; ++i) scale *= qm1;  // (q^m-1)^N, small at desk scale
    PElem lhs = R.mul_int(tr[size_t(m - 1)], scale);
    PElem rhs = embed_cyclo(ah, rec.exact_sum);
    rec.val_diff = R.val_pi(R.sub(lhs, rhs));
    rec.pass = rec.val_diff >= rec.floor;
    return rec;
}

// ---------------------------------------------------------------------------
// weight bound and first-slope checks

struct WeightProgram {
    int n = 0;
    int r = 0;
    std::vector<int> degrees;  // d_1 >= ... >= d_r
    std::vector<int> I;        // subset of {1..n+r}, 1-based
    int d1_override = 0;       // used when r = 0 (bare auxiliary polynomial)

    int d1() const {
        if (r > 0) return degrees.at(0);
        if (d1_override < 1) throw InputError("weight program needs a leading degree");
        return d1_override;
    }
    std::vector<int> I_prime() const {
        std::vector<int> v;
        for (int i : I)
            if (i <= n) v.push_back(i);
        return v;
    }
    std::vector<int> I_second() const {
        std::vector<int> v;
        for (int i : I)
            if (i > n) v.push_back(i);
        return v;
    }
};

struct WeightBoundResult {
    Rational closed_form;               // (|I'| + sum_{i in I''} (d1 - d_i)) / d1
    std::optional<int64_t> enumerated;  // min of w(u) over the constrained cone
    int64_t floor_second = 0;           // |I''|, the unconditional q-order floor
    int box = 0;                        // enumeration bound on w
};

inline WeightBoundResult weight_bound(const WeightProgram& wp) {
    WeightBoundResult res;
    auto Ip = wp.I_prime();
    auto Is = wp.I_second();
    int d1 = wp.d1();
    int64_t num = int64_t(Ip.size());
    for (int i : Is) num += d1 - wp.degrees.at(size_t(i - wp.n - 1));
    res.closed_form = Rational(num, d1);
    res.floor_second = int64_t(Is.size());

    // minimize w = sum of the last r coordinates subject to the cone
    // inequality; the first n coordinates only tighten it, so they sit at
    // their forced minimum |I'|
    if (wp.r == 0) {
        if (Ip.empty()) res.enumerated = 0;
        return res;  // no witness exists when I' is nonempty and r = 0
    }
    int64_t need = int64_t(Ip.size());
    res.box = int(Is.size()) + int(ceil_div(need, d1)) + 1;
    std::vector<int> y(size_t(wp.r), 0);
    std::optional<int64_t> best;
    auto rec = [&](auto&& self, int j, int rem) -> void {
        if (j == wp.r) {
            int64_t w = 0, cap = 0;
            for (int k = 0; k < wp.r; ++k) {
                w += y[size_t(k)];
                cap += int64_t(wp.degrees[size_t(k)]) * y[size_t(k)];
            }
            bool forced_ok = true;
            for (int i : Is)
                if (y[size_t(i - wp.n - 1)] < 1) forced_ok = false;
            if (forced_ok && cap >= need && (!best || w < *best)) best = w;
            return;
        }
        for (int e = 0; e <= rem; ++e) {
            y[size_t(j)] = e;
            self(self, j + 1, rem - e);
        }
        y[size_t(j)] = 0;
    };
    rec(rec, 0, res.box);
    res.enumerated = best;
    return res;
}

enum class SlopeVerdict { pass, fail, inconclusive };

struct SlopeCheck {
    SlopeVerdict verdict = SlopeVerdict::inconclusive;
    Rational required;  // ord_q units
    int K = 0;
    std::vector<int> coeff_val;        // measured (saturating) valuations
    std::vector<int> coeff_certified;  // per-coefficient certified floors
};

// First Newton slope of the truncated det(1 - t alpha | B_I) against a
// required lower bound in ord_q units. A coefficient whose computed value
// vanishes below its certified floor can only witness "at least the floor";
// if the floor itself does not reach the required line the check is
// inconclusive, never a false pass.
inline SlopeCheck check_first_slope(const PadicRing& R, const FredholmSeries& f,
                                    const Rational& required_ord_q) {
    SlopeCheck chk;
    chk.required = required_ord_q;
    chk.K = int(f.c.size()) - 1;
    bool any_inconclusive = false;
    for (int k = 0; k <= chk.K; ++k) {
        int v = R.val_pi(f.c[size_t(k)]);
        chk.coeff_val.push_back(v);
        chk.coeff_certified.push_back(f.certified_val[size_t(k)]);
        if (k == 0) continue;
        // need val_q(c_k) >= k * required, i.e. val_pi >= k * required * (p-1)
        Rational need = Rational(k) * required_ord_q * Rational(int64_t(R.p() - 1));
        int floor_k = f.certified_val[size_t(k)];
        if (v < floor_k) {
            // exact valuation
            if (Rational(v) < need) {
                chk.verdict = SlopeVerdict::fail;
                return chk;
            }
        } else {
            // only "val >= floor_k" is certified
            if (Rational(floor_k) < need) any_inconclusive = true;
        }
    }
    chk.verdict = any_inconclusive ? SlopeVerdict::inconclusive : SlopeVerdict::pass;
    return chk;
}

}  // namespace dwb::dwork
