#pragma once

// shared helpers for building small systems in tests

#include <vector>

#include "dworkbench/geometry.hpp"

namespace dwbtest {

using dwb::geometry::MultiPoly;
using dwb::geometry::PolySystem;

struct Term {
    int64_t c;
    std::vector<int> e;
};

inline MultiPoly mk_poly(int n, std::vector<Term> terms, int64_t p) {
    MultiPoly f;
    f.n = n;
    for (auto& t : terms) f.add_term(t.e, {t.c}, p);
    return f;
}

inline PolySystem mk_system(int64_t p, int n, std::vector<std::vector<Term>> polys,
                            std::string name = "") {
    dwb::fields::FieldSpec spec{p, 1, {}};
    std::vector<MultiPoly> ps;
    for (auto& terms : polys) ps.push_back(mk_poly(n, terms, p));
    return PolySystem(spec, n, std::move(ps), name);
}

// the fixed worked examples
inline PolySystem intro_cubic() {
    // y^2 - x^3 + x over F_3 in A^2
    return mk_system(3, 2, {{{1, {0, 2}}, {-1, {3, 0}}, {1, {1, 0}}}}, "intro-cubic");
}

inline PolySystem hyperbola() {
    // x1 x2 - 1 over F_5
    return mk_system(5, 2, {{{1, {1, 1}}, {-1, {0, 0}}}}, "hyperbola");
}

inline PolySystem linear_forms() {
    // x1 + x2 + x3 over F_3
    return mk_system(3, 3, {{{1, {1, 0, 0}}, {1, {0, 1, 0}}, {1, {0, 0, 1}}}}, "linear-form");
}

}  // namespace dwbtest
