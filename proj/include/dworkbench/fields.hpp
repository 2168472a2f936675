#pragma once

// Exact arithmetic in F_p, F_q = F_{p^a} and extension towers F_{q^m}.
// Extensions are realized as F_p[y]/(m(y)) for a single irreducible m of
// degree a*m; embeddings of subfields are found by exhaustive root search,
// which is cheap at the field sizes this library targets.

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dworkbench/util.hpp"

namespace dwb::fields {

using Coeffs = std::vector<int64_t>;  // constant term first

// ---------------------------------------------------------------------------
// dense polynomial helpers over F_p (constant term first, trailing zeros ok)

inline void poly_trim(Coeffs& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Coeffs poly_mod_p(Coeffs f, int64_t p) {
    for (auto& c : f) c = ((c % p) + p) % p;
    poly_trim(f);
    return f;
}

inline Coeffs poly_mul(const Coeffs& f, const Coeffs& g, int64_t p) {
    if (f.empty() || g.empty()) return {};
    Coeffs r(f.size() + g.size() - 1, 0);
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        for (size_t j = 0; j < g.size(); ++j) r[i + j] = (r[i + j] + f[i] * g[j]) % p;
    }
    poly_trim(r);
    return r;
}

inline Coeffs poly_add(const Coeffs& f, const Coeffs& g, int64_t p) {
    Coeffs r(std::max(f.size(), g.size()), 0);
    for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    for (size_t i = 0; i < g.size(); ++i) r[i] = (r[i] + g[i]) % p;
    poly_trim(r);
    return r;
}

inline Coeffs poly_sub(const Coeffs& f, const Coeffs& g, int64_t p) {
    Coeffs r(std::max(f.size(), g.size()), 0);
    for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    for (size_t i = 0; i < g.size(); ++i) r[i] = ((r[i] - g[i]) % p + p) % p;
    poly_trim(r);
    return r;
}

inline int64_t inv_mod_prime(int64_t x, int64_t p) {
    // extended Euclid
    int64_t a = ((x % p) + p) % p, b = p, u = 1, v = 0;
    while (b != 0) {
        int64_t q = a / b;
        std::swap(a -= q * b, b);
        std::swap(u -= q * v, v);
    }
    return ((u % p) + p) % p;
}

// remainder of f modulo monic-normalized g
inline Coeffs poly_rem(Coeffs f, const Coeffs& g, int64_t p) {
    poly_trim(f);
    if (g.empty()) throw std::invalid_argument("poly_rem: zero modulus");
    int64_t lead_inv = inv_mod_prime(g.back(), p);
    while (f.size() >= g.size()) {
        int64_t c = (f.back() * lead_inv) % p;
        size_t shift = f.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i)
            f[shift + i] = ((f[shift + i] - c * g[i]) % p + p) % p;
        poly_trim(f);
    }
    return f;
}

inline Coeffs poly_gcd(Coeffs f, Coeffs g, int64_t p) {
    poly_trim(f);
    poly_trim(g);
    while (!g.empty()) {
        Coeffs r = poly_rem(f, g, p);
        f = std::move(g);
        g = std::move(r);
    }
    if (!f.empty()) {
        int64_t inv = inv_mod_prime(f.back(), p);
        for (auto& c : f) c = (c * inv) % p;
    }
    return f;
}

// x^(p^e) mod f, by repeated p-th powering
inline Coeffs poly_frobenius_power(const Coeffs& f, int64_t p, int e) {
    Coeffs x = {0, 1};
    x = poly_rem(x, f, p);
    for (int i = 0; i < e; ++i) {
        // x <- x^p mod f
        Coeffs acc = {1};
        Coeffs base = x;
        int64_t exp = p;
        while (exp > 0) {
            if (exp & 1) acc = poly_rem(poly_mul(acc, base, p), f, p);
            base = poly_rem(poly_mul(base, base, p), f, p);
            exp >>= 1;
        }
        x = std::move(acc);
    }
    return x;
}

// Deterministic irreducibility test: f (monic, degree s) is irreducible over
// F_p iff x^(p^s) = x mod f and gcd(x^(p^(s/l)) - x, f) = 1 for primes l | s.
inline bool poly_irreducible(const Coeffs& f, int64_t p) {
    int s = int(f.size()) - 1;
    if (s < 1) return false;
    Coeffs x = poly_rem({0, 1}, f, p);
    Coeffs xs = poly_frobenius_power(f, p, s);
    if (poly_sub(xs, x, p) != Coeffs{}) return false;
    int rem = s;
    std::vector<int> primes;
    for (int l = 2; l * l <= rem; ++l)
        if (rem % l == 0) {
            primes.push_back(l);
            while (rem % l == 0) rem /= l;
        }
    if (rem > 1) primes.push_back(rem);
    for (int l : primes) {
        Coeffs d = poly_sub(poly_frobenius_power(f, p, s / l), x, p);
        if (poly_gcd(d, f, p).size() != 1) return false;
    }
    return true;
}

inline bool is_prime(int64_t p) {
    if (p < 2) return false;
    for (int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Smallest monic irreducible of degree s over F_p, where "smallest" means
// the base-p integer encoding of the lower coefficients (constant term least
// significant). Deterministic, so all runs agree on moduli.
inline Coeffs smallest_irreducible(int64_t p, int s) {
    if (s == 1) return {0, 1};  // y
    uint64_t limit = checked_pow(uint64_t(p), uint64_t(s), uint64_t(1) << 62);
    for (uint64_t code = 0; code < limit; ++code) {
        Coeffs f(s + 1, 0);
        uint64_t c = code;
        for (int i = 0; i < s; ++i) {
            f[i] = int64_t(c % uint64_t(p));
            c /= uint64_t(p);
        }
        f[s] = 1;
        if (poly_irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found (impossible)");
}

// ---------------------------------------------------------------------------

struct FieldSpec {
    int64_t p = 0;
    int a = 1;
    Coeffs modulus;  // monic of degree a, constant first; empty when a == 1

    uint64_t q() const { return checked_pow(uint64_t(p), uint64_t(a), uint64_t(1) << 62); }

    void validate() const {
        if (!is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
        if (a < 1) throw InputError("a must be positive");
        if (a == 1) {
            if (!modulus.empty() && modulus != Coeffs{0, 1})
                throw InputError("modulus must be absent when a = 1");
        } else {
            if (int(modulus.size()) != a + 1)
                throw InputError("modulus must have degree a = " + std::to_string(a));
            Coeffs m = poly_mod_p(modulus, p);
            if (int(m.size()) != a + 1 || m.back() != 1)
                throw InputError("modulus must be monic of degree a");
            if (!poly_irreducible(m, p)) throw InputError("modulus is not irreducible over F_p");
        }
    }

    bool operator==(const FieldSpec& o) const {
        return p == o.p && a == o.a && modulus == o.modulus;
    }
};

// F_{q^m}, realized as F_p[y]/(modulus) with modulus of degree a*m. The
// `embedding` element is the image of the degree-a base generator, a root of
// the base modulus found by exhaustive search.
struct ExtensionDescriptor {
    FieldSpec base;
    int m = 1;
    Coeffs modulus;    // degree a*m over F_p
    Coeffs embedding;  // coords (length <= a*m) of the image of the base generator

    int abs_degree() const { return base.a * m; }
    uint64_t size() const {
        return checked_pow(uint64_t(base.p), uint64_t(abs_degree()), uint64_t(1) << 62);
    }
};

using ExtensionPtr = std::shared_ptr<const ExtensionDescriptor>;

struct FieldElement {
    Coeffs coords;  // length < abs_degree after reduction
    ExtensionPtr ambient;

    int64_t p() const { return ambient->base.p; }
    bool is_zero() const { return coords.empty(); }
};

inline FieldElement make_element(ExtensionPtr amb, Coeffs c) {
    c = poly_mod_p(std::move(c), amb->base.p);
    c = poly_rem(std::move(c), amb->modulus, amb->base.p);
    return FieldElement{std::move(c), std::move(amb)};
}

inline FieldElement fe_from_int(const ExtensionPtr& amb, int64_t v) {
    return make_element(amb, Coeffs{v});
}

inline FieldElement operator+(const FieldElement& x, const FieldElement& y) {
    return FieldElement{poly_add(x.coords, y.coords, x.p()), x.ambient};
}
inline FieldElement operator-(const FieldElement& x, const FieldElement& y) {
    return FieldElement{poly_sub(x.coords, y.coords, x.p()), x.ambient};
}
inline FieldElement operator*(const FieldElement& x, const FieldElement& y) {
    return FieldElement{poly_rem(poly_mul(x.coords, y.coords, x.p()), x.ambient->modulus, x.p()),
                        x.ambient};
}
inline bool operator==(const FieldElement& x, const FieldElement& y) {
    return x.coords == y.coords;
}

inline FieldElement fe_pow(const FieldElement& x, uint64_t e) {
    FieldElement acc = fe_from_int(x.ambient, 1);
    FieldElement base = x;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

inline FieldElement fe_inverse(const FieldElement& x) {
    if (x.is_zero()) throw std::domain_error("inverse of zero field element");
    // x^(p^s - 2)
    uint64_t q = x.ambient->size();
    return fe_pow(x, q - 2);
}

// Absolute trace down to F_p: sum of x^(p^i), i < s. The result lies in F_p;
// returned as a residue in [0, p).
inline int64_t trace_to_prime(const FieldElement& x) {
    int s = x.ambient->abs_degree();
    FieldElement acc = x;
    FieldElement pw = x;
    for (int i = 1; i < s; ++i) {
        pw = fe_pow(pw, uint64_t(x.p()));
        acc = acc + pw;
    }
    if (acc.coords.size() > 1) throw std::logic_error("trace did not land in F_p");
    return acc.coords.empty() ? 0 : acc.coords[0];
}

// Evaluate a polynomial with F_p coefficient vector `c` (constant first) at a
// field element.
inline FieldElement fe_eval_poly(const Coeffs& c, const FieldElement& at) {
    FieldElement acc = fe_from_int(at.ambient, 0);
    for (size_t i = c.size(); i-- > 0;) acc = acc * at + fe_from_int(at.ambient, c[i]);
    return acc;
}

// Element with index k under the canonical enumeration order: coordinates are
// the base-p digits of k, constant coordinate least significant. Index 0 is
// the zero element.
inline FieldElement element_at(const ExtensionPtr& amb, uint64_t k) {
    Coeffs c;
    int64_t p = amb->base.p;
    while (k > 0) {
        c.push_back(int64_t(k % uint64_t(p)));
        k /= uint64_t(p);
    }
    return FieldElement{std::move(c), amb};
}

inline uint64_t index_of(const FieldElement& x) {
    uint64_t k = 0;
    int64_t p = x.p();
    for (size_t i = x.coords.size(); i-- > 0;) k = k * uint64_t(p) + uint64_t(x.coords[i]);
    return k;
}

// ---------------------------------------------------------------------------

struct FieldOptions {
    uint64_t enum_cap = uint64_t(1) << 26;
};

// Build F_{q^m} over the given base. For m = 1 the base representation is
// reused unchanged. Deterministic: modulus search order and root search order
// are fixed.
inline ExtensionPtr make_extension(const FieldSpec& spec, int m,
                                   const FieldOptions& opt = {}) {
    spec.validate();
    if (m < 1) throw InputError("extension degree m must be >= 1");
    int s = spec.a * m;
    uint64_t size = checked_pow(uint64_t(spec.p), uint64_t(s), uint64_t(1) << 62);
    if (size > opt.enum_cap)
        throw CapExceeded("field size p^" + std::to_string(s) + " exceeds enumeration cap");

    auto out = std::make_shared<ExtensionDescriptor>();
    out->base = spec;
    out->m = m;
    if (m == 1) {
        out->modulus = spec.a == 1 ? Coeffs{0, 1} : poly_mod_p(spec.modulus, spec.p);
        out->embedding = spec.a == 1 ? Coeffs{1} : Coeffs{0, 1};
        return out;
    }
    out->modulus = smallest_irreducible(spec.p, s);
    if (spec.a == 1) {
        out->embedding = {1};
        return out;
    }
    // exhaustive root search for the base modulus inside the extension
    Coeffs base_mod = poly_mod_p(spec.modulus, spec.p);
    ExtensionPtr probe = out;
    for (uint64_t k = 0; k < size; ++k) {
        FieldElement cand = element_at(probe, k);
        if (fe_eval_poly(base_mod, cand).is_zero()) {
            out->embedding = cand.coords;
            return out;
        }
    }
    throw std::logic_error("base modulus has no root in the extension (impossible)");
}

// Image of the generator of `sub` inside `sup`, compatible with the base
// field embeddings recorded in both descriptors. Needed when points rational
// over F_{q^s} are evaluated against coefficients living in F_{q^u} via a
// common overfield F_{q^lcm}.
inline FieldElement compatible_embedding(const ExtensionDescriptor& sub, const ExtensionPtr& sup) {
    if (!(sub.base == sup->base)) throw std::invalid_argument("towers over different bases");
    if (sub.abs_degree() == 1) return fe_from_int(sup, 1);
    FieldElement base_img_sup{sup->embedding, sup};
    uint64_t size = sup->size();
    for (uint64_t k = 0; k < size; ++k) {
        FieldElement rho = element_at(sup, k);
        if (!fe_eval_poly(sub.modulus, rho).is_zero()) continue;
        // the induced map must send sub's copy of the base generator to sup's
        FieldElement img = fe_eval_poly(sub.embedding, rho);
        if (img == base_img_sup) return rho;
    }
    throw std::logic_error("no compatible embedding found");
}

// ---------------------------------------------------------------------------
// Table-backed field for hot loops. Elements are indices 0..q-1 in the
// canonical enumeration order; multiplication goes through discrete
// log/antilog tables, addition is digitwise mod p.

class DenseField {
  public:
    static constexpr uint64_t kTableLimit = uint64_t(1) << 22;

    explicit DenseField(ExtensionPtr desc) : desc_(std::move(desc)) {
        p_ = desc_->base.p;
        s_ = desc_->abs_degree();
        q_ = desc_->size();
        if (q_ > kTableLimit) throw CapExceeded("field too large for table arithmetic");
        build_tables();
    }

    uint64_t size() const { return q_; }
    int64_t p() const { return p_; }
    int abs_degree() const { return s_; }
    const ExtensionPtr& descriptor() const { return desc_; }

    uint32_t add(uint32_t x, uint32_t y) const {
        uint32_t r = 0, mul = 1;
        for (int i = 0; i < s_ && (x || y); ++i) {
            uint32_t d = (x % p_ + y % p_) % p_;
            r += d * mul;
            mul *= uint32_t(p_);
            x /= uint32_t(p_);
            y /= uint32_t(p_);
        }
        return r;
    }

    uint32_t neg(uint32_t x) const {
        uint32_t r = 0, mul = 1;
        for (int i = 0; i < s_ && x; ++i) {
            uint32_t d = x % p_;
            r += (d ? uint32_t(p_) - d : 0) * mul;
            mul *= uint32_t(p_);
            x /= uint32_t(p_);
        }
        return r;
    }

    uint32_t mul(uint32_t x, uint32_t y) const {
        if (x == 0 || y == 0) return 0;
        uint64_t e = uint64_t(lg_[x]) + uint64_t(lg_[y]);
        if (e >= q_ - 1) e -= q_ - 1;
        return expt_[size_t(e)];
    }

    uint32_t pow(uint32_t x, uint64_t e) const {
        if (x == 0) return e == 0 ? 1 : 0;
        uint64_t l = (uint64_t(lg_[x]) * (e % (q_ - 1))) % (q_ - 1);
        return expt_[size_t(l)];
    }

    uint32_t inv(uint32_t x) const {
        if (x == 0) throw std::domain_error("inverse of zero");
        uint64_t l = (q_ - 1 - lg_[x]) % (q_ - 1);
        return expt_[size_t(l)];
    }

    // absolute trace to F_p, as residue
    int64_t trace(uint32_t x) const { return tr_[x]; }

    uint32_t from_element(const FieldElement& x) const { return uint32_t(index_of(x)); }
    FieldElement to_element(uint32_t idx) const { return element_at(desc_, idx); }

  private:
    void build_tables() {
        lg_.assign(q_, 0);
        expt_.assign(q_ - 1, 0);
        // find a generator of the multiplicative group by scanning in index order
        for (uint32_t g = 1; g < q_; ++g) {
            if (!try_generator(g)) continue;
            break;
        }
        // traces, via linearity over the power basis
        std::vector<int64_t> basis_tr(s_);
        for (int j = 0; j < s_; ++j) {
            Coeffs mono(j + 1, 0);
            mono[j] = 1;
            basis_tr[j] = trace_to_prime(FieldElement{mono, desc_});
        }
        tr_.assign(q_, 0);
        for (uint64_t k = 0; k < q_; ++k) {
            uint64_t v = k;
            int64_t t = 0;
            for (int j = 0; j < s_ && v; ++j) {
                t += int64_t(v % uint64_t(p_)) * basis_tr[j];
                v /= uint64_t(p_);
            }
            tr_[k] = t % p_;
        }
    }

    bool try_generator(uint32_t g) {
        FieldElement ge = element_at(desc_, g);
        FieldElement acc = fe_from_int(desc_, 1);
        std::vector<uint32_t> seen;
        seen.reserve(q_ - 1);
        for (uint64_t k = 0; k + 1 < q_; ++k) {
            uint32_t idx = uint32_t(index_of(acc));
            if (idx == 1 && k > 0) return false;  // order < q-1
            seen.push_back(idx);
            acc = acc * ge;
        }
        if (!(acc == fe_from_int(desc_, 1))) return false;
        for (uint64_t k = 0; k + 1 < q_; ++k) {
            expt_[size_t(k)] = seen[size_t(k)];
            lg_[seen[size_t(k)]] = uint64_t(k);
        }
        return true;
    }

    ExtensionPtr desc_;
    int64_t p_ = 0;
    int s_ = 0;
    uint64_t q_ = 0;
    std::vector<uint64_t> lg_;
    std::vector<uint32_t> expt_;
    std::vector<int64_t> tr_;
};

}  // namespace dwb::fields
