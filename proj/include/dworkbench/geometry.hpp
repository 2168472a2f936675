#pragma once

// Sparse multivariate polynomials over F_q, exhaustive point counting on
// affine space and the torus, randomized dimension estimation, and the
// recombination of a polynomial sequence into one whose leading block cuts a
// set-theoretic complete intersection.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dworkbench/fields.hpp"
#include "dworkbench/util.hpp"

namespace dwb::geometry {

using fields::Coeffs;
using fields::DenseField;
using fields::ExtensionPtr;
using fields::FieldSpec;

using Exponents = std::vector<int>;

// Coefficients are elements of F_q stored as coordinate vectors over F_p
// (length 1 when a = 1). Zero coefficients are never stored.
struct MultiPoly {
    int n = 0;
    std::map<Exponents, Coeffs> terms;

    bool is_zero() const { return terms.empty(); }

    int degree() const {
        int d = 0;
        for (auto& [e, c] : terms) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
        return d;
    }

    void add_term(const Exponents& e, Coeffs c, int64_t p) {
        if (int(e.size()) != n) throw InputError("exponent vector length mismatch");
        for (int x : e)
            if (x < 0) throw InputError("negative exponent");
        auto it = terms.find(e);
        if (it == terms.end()) {
            c = fields::poly_mod_p(std::move(c), p);
            if (!c.empty()) terms.emplace(e, std::move(c));
        } else {
            it->second = fields::poly_add(it->second, c, p);
            if (it->second.empty()) terms.erase(it);
        }
    }
};

// partial derivative with respect to variable `var` (0-based)
inline MultiPoly poly_derivative(const MultiPoly& f, int var, int64_t p) {
    MultiPoly r;
    r.n = f.n;
    for (auto& [e, c] : f.terms) {
        if (e[var] == 0) continue;
        Coeffs nc = c;
        for (auto& x : nc) x = (x * (e[var] % p)) % p;
        Exponents ne = e;
        --ne[var];
        r.add_term(ne, nc, p);
    }
    return r;
}

// f with variables outside `support` set to zero, re-indexed to the support
// (used by the affine = sum-over-supports-of-torus decomposition).
inline MultiPoly restrict_to_support(const MultiPoly& f, const std::vector<int>& support) {
    MultiPoly r;
    r.n = int(support.size());
    std::vector<int> pos(f.n, -1);
    for (size_t i = 0; i < support.size(); ++i) pos[support[i]] = int(i);
    for (auto& [e, c] : f.terms) {
        bool keep = true;
        Exponents ne(support.size(), 0);
        for (int v = 0; v < f.n; ++v) {
            if (e[v] == 0) continue;
            if (pos[v] < 0) {
                keep = false;
                break;
            }
            ne[pos[v]] = e[v];
        }
        if (keep) {
            auto it = r.terms.find(ne);
            if (it == r.terms.end())
                r.terms.emplace(ne, c);
            else
                throw std::logic_error("restrict_to_support: clash");  // distinct e stay distinct
        }
    }
    return r;
}

struct PolySystem {
    FieldSpec field;
    int n = 0;
    std::vector<MultiPoly> polys;  // sorted by descending degree unless tagged
    std::string name;
    std::optional<int> dim_override;

    struct KeepOrderTag {};

    PolySystem() = default;

    PolySystem(FieldSpec f, int nvars, std::vector<MultiPoly> ps, std::string nm = "")
        : field(std::move(f)), n(nvars), polys(std::move(ps)), name(std::move(nm)) {
        std::stable_sort(polys.begin(), polys.end(),
                         [](const MultiPoly& a, const MultiPoly& b) { return a.degree() > b.degree(); });
        validate();
    }

    PolySystem(FieldSpec f, int nvars, std::vector<MultiPoly> ps, KeepOrderTag, std::string nm = "")
        : field(std::move(f)), n(nvars), polys(std::move(ps)), name(std::move(nm)) {
        validate_loose();
    }

    int r() const { return int(polys.size()); }

    std::vector<int> degrees() const {
        std::vector<int> d;
        for (auto& f : polys) d.push_back(f.degree());
        return d;
    }

    void validate() const {
        validate_loose();
        for (size_t i = 1; i < polys.size(); ++i)
            if (polys[i].degree() > polys[i - 1].degree())
                throw InputError("system polynomials must be sorted by descending degree");
    }

    void validate_loose() const {
        field.validate();
        if (n < 1) throw InputError("system needs at least one variable");
        for (auto& f : polys) {
            if (f.n != n) throw InputError("polynomial variable count mismatch");
            if (f.is_zero() || f.degree() < 1)
                throw InputError("system polynomials must be nonzero of positive degree");
            for (auto& [e, c] : f.terms)
                if (int(c.size()) > field.a) throw InputError("coefficient does not fit in F_q");
        }
    }
};

enum class Region { affine, torus };

struct CountOptions {
    uint64_t enum_cap = uint64_t(1) << 26;
    uint64_t table_limit = DenseField::kTableLimit;
    int threads = 0;  // 0 = hardware
};

inline int effective_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return int(std::min<unsigned>(hw ? hw : 1, 8));
}

// ---------------------------------------------------------------------------
// evaluation against a DenseField

struct CompiledTerm {
    uint32_t coeff;
    std::vector<std::pair<int, int>> powers;  // (variable, exponent), exponent > 0
};

struct CompiledPoly {
    std::vector<CompiledTerm> terms;

    uint32_t eval(const DenseField& F, const uint32_t* pt) const {
        uint32_t acc = 0;
        for (const auto& t : terms) {
            uint32_t v = t.coeff;
            for (auto [var, e] : t.powers) {
                uint32_t x = pt[var];
                if (x == 0) {
                    v = 0;
                    break;
                }
                v = F.mul(v, F.pow(x, uint64_t(e)));
            }
            acc = F.add(acc, v);
        }
        return acc;
    }
};

// Map an F_q coefficient (coords over F_p) into the extension via the
// recorded generator image.
inline uint32_t embed_coeff(const DenseField& F, const Coeffs& c) {
    const ExtensionPtr& d = F.descriptor();
    fields::FieldElement img{d->embedding, d};
    fields::FieldElement acc = fields::fe_from_int(d, 0);
    for (size_t i = c.size(); i-- > 0;)
        acc = acc * img + fields::fe_from_int(d, c[i]);
    return F.from_element(acc);
}

inline CompiledPoly compile_poly(const MultiPoly& f, const DenseField& F) {
    CompiledPoly out;
    for (auto& [e, c] : f.terms) {
        CompiledTerm t;
        t.coeff = embed_coeff(F, c);
        for (int v = 0; v < int(e.size()); ++v)
            if (e[v] > 0) t.powers.push_back({v, e[v]});
        if (t.coeff != 0) out.terms.push_back(std::move(t));
    }
    return out;
}

// the subset is literal: an empty subset imposes no equations
inline std::vector<CompiledPoly> compile_system(const PolySystem& sys, const std::vector<int>& subset,
                                                const DenseField& F) {
    std::vector<CompiledPoly> out;
    for (int i : subset) {
        if (i < 1 || i > sys.r()) throw InputError("subset index out of range");
        out.push_back(compile_poly(sys.polys[i - 1], F));
    }
    return out;
}

inline std::vector<int> all_indices(const PolySystem& sys) {
    std::vector<int> v(size_t(sys.r()));
    for (int i = 0; i < sys.r(); ++i) v[size_t(i)] = i + 1;
    return v;
}

// decode a flat index into a point; affine digits are 0..q-1, torus digits
// are 1..q-1
inline void decode_point(uint64_t idx, int n, uint64_t base, Region region, uint32_t* pt) {
    for (int i = 0; i < n; ++i) {
        uint64_t d = idx % base;
        idx /= base;
        pt[i] = uint32_t(region == Region::torus ? d + 1 : d);
    }
}

inline bool all_zero_at(const std::vector<CompiledPoly>& polys, const DenseField& F,
                        const uint32_t* pt) {
    for (auto& f : polys)
        if (f.eval(F, pt) != 0) return false;
    return true;
}

inline ExtensionPtr extension_for(const PolySystem& sys, int m, const CountOptions& opt) {
    fields::FieldOptions fo;
    fo.enum_cap = opt.table_limit;
    return fields::make_extension(sys.field, m, fo);
}

// Exact number of F_{q^m}-points of the vanishing set of the subset of the
// system, in A^n or the torus. The empty subset counts the whole space.
inline uint64_t count(const PolySystem& sys, const std::vector<int>& subset, int m, Region region,
                      const CountOptions& opt = {}) {
    if (m < 1) throw InputError("m must be positive");
    ExtensionPtr ext = extension_for(sys, m, opt);
    uint64_t q = ext->size();
    uint64_t base = region == Region::torus ? q - 1 : q;
    uint64_t total = checked_pow(base, uint64_t(sys.n), opt.enum_cap);
    DenseField F(ext);
    auto polys = compile_system(sys, subset, F);

    int nt = effective_threads(opt.threads);
    return parallel_chunks<uint64_t>(
        total, nt, uint64_t(0),
        [&](uint64_t b, uint64_t e) {
            std::vector<uint32_t> pt(sys.n);
            uint64_t hits = 0;
            for (uint64_t i = b; i < e; ++i) {
                decode_point(i, sys.n, base, region, pt.data());
                if (all_zero_at(polys, F, pt.data())) ++hits;
            }
            return hits;
        },
        [](uint64_t a, uint64_t b) { return a + b; });
}

// Visit every zero of the system over the given extension; `fn` may return
// false to stop early. Returns true if the scan ran to completion.
template <class Fn>
bool for_each_zero(const PolySystem& sys, const std::vector<int>& subset, const DenseField& F,
                   Region region, const CountOptions& opt, Fn fn) {
    uint64_t q = F.size();
    uint64_t base = region == Region::torus ? q - 1 : q;
    uint64_t total = checked_pow(base, uint64_t(sys.n), opt.enum_cap);
    auto polys = compile_system(sys, subset, F);
    std::vector<uint32_t> pt(sys.n);
    for (uint64_t i = 0; i < total; ++i) {
        decode_point(i, sys.n, base, region, pt.data());
        if (all_zero_at(polys, F, pt.data()))
            if (!fn(pt)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// dimension estimation

struct DimOptions {
    int trials = 8;
    uint64_t slice_threshold = 16;  // want |F_{q^u}| >= this for the slicing field
    int growth_mmax = 3;
    CountOptions count;
};

namespace detail {

// random affine-linear form over the dense field; resampled if all linear
// coefficients vanish
inline CompiledPoly random_affine_form(const DenseField& F, int n, SeededRng& rng) {
    for (;;) {
        CompiledPoly f;
        bool nontrivial = false;
        for (int v = 0; v < n; ++v) {
            uint32_t a = uint32_t(rng.next(F.size()));
            if (a == 0) continue;
            nontrivial = true;
            CompiledTerm t;
            t.coeff = a;
            t.powers = {{v, 1}};
            f.terms.push_back(std::move(t));
        }
        if (!nontrivial) continue;
        uint32_t b = uint32_t(rng.next(F.size()));
        if (b) {
            CompiledTerm t;
            t.coeff = b;
            f.terms.push_back(std::move(t));
        }
        return f;
    }
}

inline bool system_has_zero(const std::vector<CompiledPoly>& polys, const DenseField& F, int n,
                            uint64_t cap) {
    uint64_t total = checked_pow(F.size(), uint64_t(n), cap);
    std::vector<uint32_t> pt(n);
    for (uint64_t i = 0; i < total; ++i) {
        decode_point(i, n, F.size(), Region::affine, pt.data());
        if (all_zero_at(polys, F, pt.data())) return true;
    }
    return false;
}

}  // namespace detail

// Largest d such that Z still meets a majority of `trials` random affine
// slices of codimension d over a configured extension, cross-checked against
// the growth of point counts. Returns -1 when no point is found over any
// feasible extension (desk-scale emptiness). Throws Inconclusive when the
// two estimates disagree.
inline int estimate_dimension(const PolySystem& sys, int trials, uint64_t seed,
                              const DimOptions& opt = {}) {
    if (trials < 1) throw InputError("trials must be positive");
    uint64_t q = sys.field.q();

    // growth estimate from N_m over the largest feasible extension
    int best_m = 0;
    uint64_t best_count = 0;
    for (int m = 1; m <= opt.growth_mmax; ++m) {
        uint64_t pts;
        try {
            pts = checked_pow(q, uint64_t(m), uint64_t(1) << 62);
            checked_pow(pts, uint64_t(sys.n), opt.count.enum_cap);
            if (pts > opt.count.table_limit) break;
        } catch (const CapExceeded&) {
            break;
        }
        uint64_t nm = count(sys, all_indices(sys), m, Region::affine, opt.count);
        best_m = m;
        best_count = nm;
    }
    if (best_m == 0) throw CapExceeded("cannot enumerate any extension for dimension estimate");

    // slicing field: smallest u with q^u >= threshold that still fits the cap
    int u = 1;
    while (checked_pow(q, uint64_t(u), uint64_t(1) << 62) < opt.slice_threshold) ++u;
    while (u > 1) {
        bool fits = true;
        try {
            uint64_t fq = checked_pow(q, uint64_t(u), uint64_t(1) << 62);
            checked_pow(fq, uint64_t(sys.n), opt.count.enum_cap);
            if (fq > opt.count.table_limit) fits = false;
        } catch (const CapExceeded&) {
            fits = false;
        }
        if (fits) break;
        --u;
    }

    ExtensionPtr ext = extension_for(sys, u, opt.count);
    DenseField F(ext);
    auto base_polys = compile_system(sys, all_indices(sys), F);
    SeededRng rng(seed);

    bool nonempty_u = detail::system_has_zero(base_polys, F, sys.n, opt.count.enum_cap);
    if (best_count == 0 && !nonempty_u) return -1;

    int d_slice = 0;
    for (int d = 1; d <= sys.n; ++d) {
        int hits = 0;
        for (int t = 0; t < trials; ++t) {
            auto polys = base_polys;
            for (int k = 0; k < d; ++k) polys.push_back(detail::random_affine_form(F, sys.n, rng));
            if (detail::system_has_zero(polys, F, sys.n, opt.count.enum_cap)) ++hits;
        }
        if (2 * hits >= trials)
            d_slice = d;
        else
            break;
    }

    if (best_count == 0)
        throw Inconclusive("no points over the growth extension but slice field has points");
    double dg = std::log(double(best_count)) / (double(best_m) * std::log(double(q)));
    int d_growth = int(dg + 0.5);
    if (d_growth > sys.n) d_growth = sys.n;

    if (d_growth != d_slice)
        throw Inconclusive("dimension estimates disagree: slices say " + std::to_string(d_slice) +
                           ", count growth says " + std::to_string(d_growth));
    return d_slice;
}

inline int system_dimension(const PolySystem& sys, int trials, uint64_t seed,
                            const DimOptions& opt = {}) {
    if (sys.dim_override) return *sys.dim_override;
    return estimate_dimension(sys, trials, seed, opt);
}

// ---------------------------------------------------------------------------

// True iff f vanishes at every F_{q^s}-point of the zero set of the system,
// for every s <= s_max that fits the caps (a desk-scale surrogate for
// scheme-theoretic vanishing on the locus).
inline bool vanishes_identically(const MultiPoly& f, const PolySystem& sys, int s_max,
                                 const CountOptions& opt = {}) {
    bool any_checked = false;
    for (int s = 1; s <= s_max; ++s) {
        uint64_t q;
        try {
            q = checked_pow(sys.field.q(), uint64_t(s), uint64_t(1) << 62);
            checked_pow(q, uint64_t(sys.n), opt.enum_cap);
            if (q > opt.table_limit) break;
        } catch (const CapExceeded&) {
            break;
        }
        any_checked = true;
        ExtensionPtr ext = extension_for(sys, s, opt);
        DenseField F(ext);
        CompiledPoly cf = compile_poly(f, F);
        bool ok = for_each_zero(sys, all_indices(sys), F, Region::affine, opt,
                                [&](const std::vector<uint32_t>& pt) {
                                    return cf.eval(F, pt.data()) == 0;
                                });
        if (!ok) return false;
    }
    if (!any_checked) throw CapExceeded("vanishes_identically: no extension fits the cap");
    return true;
}

// Desk-scale nonsingularity: scan F_{q^s}-points of Z for s <= s_max and
// check the Jacobian has rank >= c at each.
inline bool jacobian_smooth_desk(const PolySystem& sys, int c, int s_max,
                                 const CountOptions& opt = {}) {
    std::vector<std::vector<MultiPoly>> jac;  // [poly][var]
    for (auto& f : sys.polys) {
        std::vector<MultiPoly> row;
        for (int v = 0; v < sys.n; ++v) row.push_back(poly_derivative(f, v, sys.field.p));
        jac.push_back(std::move(row));
    }
    for (int s = 1; s <= s_max; ++s) {
        uint64_t q;
        try {
            q = checked_pow(sys.field.q(), uint64_t(s), uint64_t(1) << 62);
            checked_pow(q, uint64_t(sys.n), opt.enum_cap);
            if (q > opt.table_limit) break;
        } catch (const CapExceeded&) {
            break;
        }
        ExtensionPtr ext = extension_for(sys, s, opt);
        DenseField F(ext);
        std::vector<std::vector<CompiledPoly>> cjac;
        for (auto& row : jac) {
            std::vector<CompiledPoly> crow;
            for (auto& d : row) crow.push_back(compile_poly(d, F));
            cjac.push_back(std::move(crow));
        }
        bool smooth = for_each_zero(sys, all_indices(sys), F, Region::affine, opt,
                                    [&](const std::vector<uint32_t>& pt) {
                                        // rank of the Jacobian at pt
                                        std::vector<std::vector<uint32_t>> m;
                                        for (auto& crow : cjac) {
                                            std::vector<uint32_t> row;
                                            for (auto& d : crow) row.push_back(d.eval(F, pt.data()));
                                            m.push_back(std::move(row));
                                        }
                                        int rank = 0;
                                        int cols = sys.n;
                                        for (int col = 0; col < cols && rank < int(m.size()); ++col) {
                                            int piv = -1;
                                            for (int rrow = rank; rrow < int(m.size()); ++rrow)
                                                if (m[rrow][col] != 0) {
                                                    piv = rrow;
                                                    break;
                                                }
                                            if (piv < 0) continue;
                                            std::swap(m[rank], m[piv]);
                                            uint32_t inv = F.inv(m[rank][col]);
                                            for (int rrow = rank + 1; rrow < int(m.size()); ++rrow) {
                                                if (m[rrow][col] == 0) continue;
                                                uint32_t fct = F.mul(m[rrow][col], inv);
                                                for (int cc = col; cc < cols; ++cc)
                                                    m[rrow][cc] = F.add(
                                                        m[rrow][cc], F.neg(F.mul(fct, m[rank][cc])));
                                            }
                                            ++rank;
                                        }
                                        return rank >= c;
                                    });
        if (!smooth) return false;
    }
    return true;
}

}  // namespace dwb::geometry
