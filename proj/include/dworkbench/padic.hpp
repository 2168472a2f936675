#pragma once

// The coefficient ring Z_p[pi]/(pi^{p-1} + p) at finite precision: elements
// are integer vectors modulo p^mprec in the basis 1, pi, ..., pi^{p-2}, so
// the absolute precision is pi^{(p-1)*mprec}. Valuations are exact below the
// precision and saturate at it.

#include <string>
#include <vector>

#include "dworkbench/util.hpp"

namespace dwb::padic {

using PElem = std::vector<int64_t>;  // length p-1, entries in [0, p^mprec)

class PadicRing {
  public:
    PadicRing(int64_t p, int mprec) : p_(p), mprec_(mprec) {
        if (p < 2) throw InputError("p must be at least 2");
        if (mprec < 1) throw InputError("precision must be positive");
        pm_ = 1;
        for (int i = 0; i < mprec; ++i) {
            if (pm_ > (int64_t(1) << 31) / p)
                throw InputError("p^mprec too large for 64-bit coordinate arithmetic");
            pm_ *= p;
        }
    }

    int64_t p() const { return p_; }
    int mprec() const { return mprec_; }
    int64_t coord_modulus() const { return pm_; }
    int deg() const { return int(p_ - 1); }
    // absolute pi-adic precision of every element
    int cap() const { return int(p_ - 1) * mprec_; }

    PElem zero() const { return PElem(size_t(deg()), 0); }

    PElem from_int(int64_t v) const {
        PElem r = zero();
        r[0] = mod(v);
        return r;
    }

    PElem pi() const {
        PElem r = zero();
        if (deg() >= 2)
            r[1] = 1;
        else
            r[0] = mod(-p_);  // p = 2: pi = -2
        return r;
    }

    PElem add(const PElem& a, const PElem& b) const {
        PElem r(a.size());
        for (size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) % pm_;
        return r;
    }

    PElem sub(const PElem& a, const PElem& b) const {
        PElem r(a.size());
        for (size_t i = 0; i < a.size(); ++i) r[i] = ((a[i] - b[i]) % pm_ + pm_) % pm_;
        return r;
    }

    PElem neg(const PElem& a) const {
        PElem r(a.size());
        for (size_t i = 0; i < a.size(); ++i) r[i] = (pm_ - a[i]) % pm_;
        return r;
    }

    PElem mul(const PElem& a, const PElem& b) const {
        int d = deg();
        std::vector<int64_t> full(size_t(2 * d - 1), 0);
        for (int i = 0; i < d; ++i) {
            if (a[size_t(i)] == 0) continue;
            for (int j = 0; j < d; ++j)
                full[size_t(i + j)] = (full[size_t(i + j)] + a[size_t(i)] * b[size_t(j)]) % pm_;
        }
        // pi^{p-1} = -p
        PElem r(size_t(d), 0);
        for (int k = 2 * d - 2; k >= 0; --k) {
            if (k < d) {
                r[size_t(k)] = (r[size_t(k)] + full[size_t(k)]) % pm_;
            } else {
                int64_t carry = full[size_t(k)] % pm_;
                full[size_t(k - d)] = ((full[size_t(k - d)] - p_ % pm_ * carry) % pm_ + pm_) % pm_;
            }
        }
        return r;
    }

    PElem mul_int(const PElem& a, int64_t s) const {
        PElem r(a.size());
        int64_t sm = mod(s);
        for (size_t i = 0; i < a.size(); ++i) r[i] = (a[i] * sm) % pm_;
        return r;
    }

    PElem pow(PElem base, uint64_t e) const {
        PElem acc = from_int(1);
        while (e > 0) {
            if (e & 1) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }

    bool is_zero(const PElem& a) const {
        for (auto x : a)
            if (x != 0) return false;
        return true;
    }

    // pi-adic valuation, saturating at cap(); exact below it
    int val_pi(const PElem& a) const {
        int best = cap();
        for (int i = 0; i < deg(); ++i) {
            if (a[size_t(i)] == 0) continue;
            int v = i + deg() * ord_p(a[size_t(i)], p_, mprec_);
            best = std::min(best, v);
        }
        return best;
    }

    bool is_unit(const PElem& a) const { return a[0] % p_ != 0; }

    // inverse of a unit by Newton iteration b <- b(2 - ab)
    PElem inv_unit(const PElem& a) const {
        if (!is_unit(a)) throw std::domain_error("inverse of a non-unit");
        PElem b = from_int(inv_mod_prime_small(a[0] % p_));
        PElem two = from_int(2);
        int steps = 1;
        while ((1 << steps) < cap() + 1) ++steps;
        for (int i = 0; i < steps + 1; ++i) b = mul(b, sub(two, mul(a, b)));
        return b;
    }

    // exact division by p^k (requires all coordinates divisible); the result
    // is only meaningful modulo p^{mprec-k}, callers track the loss
    PElem div_pk(const PElem& a, int k) const {
        PElem r(a.size());
        int64_t pk = 1;
        for (int i = 0; i < k; ++i) pk *= p_;
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] % pk != 0)
                throw std::domain_error("inexact division by p^" + std::to_string(k));
            r[i] = a[i] / pk;
        }
        return r;
    }

    // division by an integer m = unit * p^k
    PElem div_int(const PElem& a, int64_t m) const {
        int k = ord_p(m, p_, mprec_);
        int64_t unit = m;
        for (int i = 0; i < k; ++i) unit /= p_;
        PElem r = div_pk(a, k);
        return mul(r, inv_unit(from_int(unit)));
    }

    // reduce an element of a finer ring (same p, higher mprec) to this one
    PElem reduce_from(const PElem& a) const {
        PElem r(a.size());
        for (size_t i = 0; i < a.size(); ++i) r[i] = ((a[i] % pm_) + pm_) % pm_;
        return r;
    }

    // Teichmuller lift of a residue: the fixed point of x -> x^p
    PElem teichmuller(int64_t c) const {
        c = ((c % p_) + p_) % p_;
        if (c == 0) return zero();
        int64_t x = c;
        for (int i = 0; i < mprec_; ++i) {
            // x <- x^p mod p^mprec
            int64_t acc = 1;
            for (int64_t e = 0; e < p_; ++e) acc = (acc * x) % pm_;
            x = acc;
        }
        return from_int(x);
    }

    std::string to_string(const PElem& a) const {
        std::string s = "[";
        for (size_t i = 0; i < a.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(a[i]);
        }
        return s + "]";
    }

  private:
    int64_t mod(int64_t v) const { return ((v % pm_) + pm_) % pm_; }

    int64_t inv_mod_prime_small(int64_t x) const {
        x = ((x % p_) + p_) % p_;
        int64_t a = x, b = p_, u = 1, v = 0;
        while (b != 0) {
            int64_t q = a / b;
            std::swap(a -= q * b, b);
            std::swap(u -= q * v, v);
        }
        return ((u % p_) + p_) % p_;
    }

    int64_t p_;
    int mprec_;
    int64_t pm_;
};

}  // namespace dwb::padic
