#pragma once

// Divisibility exponents computed from (n; d_1 >= ... >= d_r; dim Z), the
// cohomology-degree window, and checkers that test their zeta-level
// consequences through point-count congruences and Newton-polygon slopes.

#include <optional>
#include <string>
#include <vector>

#include "dworkbench/geometry.hpp"
#include "dworkbench/series.hpp"

namespace dwb::bounds {

using series::Int;
using series::IntPoly;
using series::Rational;

struct DegreeProfile {
    int n = 0;
    std::vector<int> degrees;  // d_1 >= ... >= d_r, all >= 1
    int dimZ = 0;
    bool projective = false;  // shifts n -> n+1 in every formula

    int r() const { return int(degrees.size()); }
    int c() const { return n - dimZ; }
    int ambient() const { return projective ? n + 1 : n; }

    void validate() const {
        if (n < 1) throw InputError("profile needs n >= 1");
        if (degrees.empty()) throw InputError("profile needs at least one degree");
        for (size_t i = 0; i < degrees.size(); ++i) {
            if (degrees[i] < 1) throw InputError("degrees must be positive");
            if (i > 0 && degrees[i] > degrees[i - 1])
                throw InputError("degrees must be sorted descending");
        }
        if (dimZ < 0 || dimZ > n) throw InputError("dim Z out of range");
        if (c() > r()) throw InputError("codimension exceeds the number of equations");
    }
};

// d_i^* : d_i for i <= n - dimZ; 1 past that when d_i = d_1; else 0
inline std::vector<int> d_star(const DegreeProfile& pr) {
    pr.validate();
    int c = pr.ambient() - pr.dimZ;
    std::vector<int> out;
    for (int i = 1; i <= pr.r(); ++i) {
        int d = pr.degrees[size_t(i - 1)];
        if (i <= c)
            out.push_back(d);
        else
            out.push_back(d == pr.degrees[0] ? 1 : 0);
    }
    return out;
}

inline int64_t mu(const DegreeProfile& pr, int j) {
    pr.validate();
    if (j < 0 || j > pr.dimZ) throw InputError("mu: j out of range [0, dim Z]");
    int64_t sum = 0;
    for (int d : pr.degrees) sum += d;
    int64_t inner = ceil_div(pr.ambient() - j - sum, pr.degrees[0]);
    return j + std::max<int64_t>(0, inner);
}

inline int64_t nu(const DegreeProfile& pr, int j) {
    pr.validate();
    if (j < 0 || j > pr.dimZ) throw InputError("nu: j out of range [0, dim Z]");
    auto ds = d_star(pr);
    int64_t sum = 0;
    for (int d : ds) sum += d;
    int64_t inner = ceil_div(pr.ambient() - j - sum, pr.degrees[0]);
    return j + std::max<int64_t>(0, inner);
}

inline int64_t eps(const DegreeProfile& pr, int m) {
    pr.validate();
    int top = pr.dimZ - (pr.n - pr.r());
    if (m < 0 || m > top) throw InputError("eps: m out of range [0, dim Z - (n - r)]");
    auto ds = d_star(pr);
    int64_t sum = 0;
    for (int i = 1; i <= pr.r(); ++i)
        sum += (i <= pr.r() - m) ? pr.degrees[size_t(i - 1)] : ds[size_t(i - 1)];
    int64_t inner = ceil_div(pr.ambient() - sum, pr.degrees[0]);
    return std::max<int64_t>(0, inner);
}

// informational window of possibly-nonvanishing compactly supported
// cohomology degrees, floor clamped at 0
inline std::pair<int, int> degree_window(const DegreeProfile& pr) {
    pr.validate();
    return {std::max(0, pr.n - pr.r()), 2 * pr.dimZ};
}

struct BoundReport {
    DegreeProfile profile;
    std::vector<int> dstar;
    std::vector<int64_t> mu_values;   // j = 0..dimZ
    std::vector<int64_t> nu_values;   // j = 0..dimZ
    std::vector<int64_t> eps_values;  // m = 0..dimZ-(n-r), or empty when negative range
    std::pair<int, int> window;
};

inline BoundReport bound_report(const DegreeProfile& pr) {
    BoundReport rep;
    rep.profile = pr;
    rep.dstar = d_star(pr);
    for (int j = 0; j <= pr.dimZ; ++j) {
        rep.mu_values.push_back(mu(pr, j));
        rep.nu_values.push_back(nu(pr, j));
    }
    int top = pr.dimZ - (pr.n - pr.r());
    for (int m = 0; m <= top; ++m) rep.eps_values.push_back(eps(pr, m));
    rep.window = degree_window(pr);
    return rep;
}

// ---------------------------------------------------------------------------

// ord_q(coeff_k) >= mu*k for every k: exactly the condition under which all
// reciprocal roots are algebraic integers divisible by q^mu
inline bool divisibility_certificate(const IntPoly& poly, int64_t p, int a, int64_t mu_exp) {
    if (poly.empty() || poly[0] != 1)
        throw std::invalid_argument("certificate requires constant term 1");
    for (size_t k = 1; k < poly.size(); ++k) {
        if (poly[k] == 0) continue;
        auto o = series::int_ord_p(poly[k], p);
        // ord_q = ord_p / a >= mu*k  <=>  ord_p >= mu*k*a
        if (*o < mu_exp * int64_t(k) * a) return false;
    }
    return true;
}

struct AxKatzVerdict {
    int64_t mu0 = 0;
    bool divisibility_ok = false;   // (q^m)^{mu0} | N_m for all tested m
    bool slopes_ok = false;         // Newton slopes of zeta num/den >= mu0
    bool slopes_decided = false;    // false when reconstruction failed
    std::vector<uint64_t> counts;
    std::optional<series::RationalFunction> zeta;
    std::string note;
};

// Checks the two zeta-level consequences of the divisibility bound with
// exponent mu_0: point-count congruences, and first-slope bounds on the
// reconstructed zeta numerator and denominator.
inline AxKatzVerdict ax_katz_check(const geometry::PolySystem& sys, int dimZ, int M, int B,
                                   const geometry::CountOptions& opt = {}) {
    DegreeProfile pr;
    pr.n = sys.n;
    pr.degrees = sys.degrees();
    pr.dimZ = dimZ;
    AxKatzVerdict v;
    v.mu0 = mu(pr, 0);

    for (int m = 1; m <= M; ++m)
        v.counts.push_back(geometry::count(sys, geometry::all_indices(sys), m, geometry::Region::affine, opt));

    v.divisibility_ok = true;
    int64_t p = sys.field.p;
    for (int m = 1; m <= M; ++m) {
        Int nm(v.counts[size_t(m - 1)]);
        if (nm == 0) continue;
        auto o = series::int_ord_p(nm, p);
        // ord_q(N_m) >= m*mu0  <=>  ord_p >= m*mu0*a
        if (*o < int64_t(m) * v.mu0 * sys.field.a) v.divisibility_ok = false;
    }

    try {
        auto zs = series::zeta_series(v.counts, int64_t(sys.field.q()));
        v.zeta = series::pade_auto(zs, 1, B);
        auto num_np = series::newton_polygon(v.zeta->num, p, sys.field.a);
        auto den_np = series::newton_polygon(v.zeta->den, p, sys.field.a);
        v.slopes_decided = true;
        v.slopes_ok = true;
        auto check = [&](const series::NewtonPolygon& np) {
            for (auto& s : np.slopes)
                if (s < Rational(v.mu0)) v.slopes_ok = false;
        };
        if (series::poly_deg(v.zeta->num) >= 1) check(num_np);
        if (series::poly_deg(v.zeta->den) >= 1) check(den_np);
    } catch (const series::PadeNoSolution& e) {
        v.slopes_decided = false;
        v.note = std::string("zeta reconstruction failed: ") + e.what();
    }
    return v;
}

}  // namespace dwb::bounds
