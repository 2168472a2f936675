#include <catch2/catch_amalgamated.hpp>

#include "dworkbench/geometry.hpp"
#include "test_util.hpp"

using namespace dwb;
using namespace dwb::geometry;
using dwbtest::mk_poly;
using dwbtest::mk_system;

namespace {

// independent naive counter: FieldElement arithmetic, no tables, no
// compiled terms; the definitionally-obvious loop
uint64_t naive_count(const PolySystem& sys, int m, Region region) {
    auto ext = fields::make_extension(sys.field, m);
    uint64_t q = ext->size();
    uint64_t total = 1;
    for (int i = 0; i < sys.n; ++i) total *= (region == Region::torus ? q - 1 : q);
    uint64_t hits = 0;
    for (uint64_t idx = 0; idx < total; ++idx) {
        std::vector<fields::FieldElement> pt;
        uint64_t v = idx;
        uint64_t base = region == Region::torus ? q - 1 : q;
        for (int i = 0; i < sys.n; ++i) {
            uint64_t d = v % base;
            v /= base;
            pt.push_back(fields::element_at(ext, region == Region::torus ? d + 1 : d));
        }
        bool zero = true;
        for (auto& f : sys.polys) {
            fields::FieldElement acc = fields::fe_from_int(ext, 0);
            for (auto& [e, c] : f.terms) {
                fields::FieldElement img{ext->embedding, ext};
                fields::FieldElement cf = fields::fe_from_int(ext, 0);
                for (size_t i = c.size(); i-- > 0;)
                    cf = cf * img + fields::fe_from_int(ext, c[i]);
                for (int var = 0; var < sys.n; ++var)
                    for (int k = 0; k < e[size_t(var)]; ++k) cf = cf * pt[size_t(var)];
                acc = acc + cf;
            }
            if (!acc.is_zero()) {
                zero = false;
                break;
            }
        }
        if (zero) ++hits;
    }
    return hits;
}

}  // namespace

TEST_CASE("count on pinned examples") {
    auto line = mk_system(3, 1, {{{1, {1}}}});
    for (int m = 1; m <= 3; ++m) CHECK(count(line, {1}, m, Region::affine) == 1);

    CHECK(count(dwbtest::hyperbola(), {1}, 1, Region::affine) == 4);

    // x^3 + y^3 + 1 over F_7: the naive 49-point loop is the oracle
    auto fermat = mk_system(7, 2, {{{1, {3, 0}}, {1, {0, 3}}, {1, {0, 0}}}});
    CHECK(count(fermat, {1}, 1, Region::affine) == naive_count(fermat, 1, Region::affine));
    CHECK(count(fermat, {1}, 1, Region::torus) == naive_count(fermat, 1, Region::torus));
}

TEST_CASE("count matches the naive evaluator on random small systems") {
    SeededRng rng(2024);
    for (int trial = 0; trial < 6; ++trial) {
        int64_t p = std::vector<int64_t>{2, 3, 5}[rng.next(3)];
        int n = 1 + int(rng.next(2));
        int r = 1 + int(rng.next(2));
        std::vector<MultiPoly> polys;
        for (int i = 0; i < r; ++i) {
            MultiPoly f;
            f.n = n;
            int terms = 1 + int(rng.next(3));
            for (int t = 0; t < terms; ++t) {
                Exponents e(static_cast<size_t>(n), 0);
                for (auto& x : e) x = int(rng.next(3));
                f.add_term(e, {int64_t(1 + rng.next(uint64_t(p - 1)))}, p);
            }
            if (f.is_zero() || f.degree() < 1) {
                --i;
                continue;
            }
            polys.push_back(std::move(f));
        }
        PolySystem sys(fields::FieldSpec{p, 1, {}}, n, std::move(polys));
        for (int m = 1; m <= 2; ++m) {
            CHECK(count(sys, all_indices(sys), m, Region::affine) == naive_count(sys, m, Region::affine));
            CHECK(count(sys, all_indices(sys), m, Region::torus) == naive_count(sys, m, Region::torus));
        }
    }
}

TEST_CASE("empty subset counts the whole space") {
    auto sys = mk_system(3, 2, {{{1, {1, 0}}}});
    for (int m = 1; m <= 3; ++m) {
        uint64_t q = 1;
        for (int i = 0; i < m; ++i) q *= 3;
        CHECK(count(sys, std::vector<int>{}, m, Region::affine) == q * q);
        CHECK(count(sys, std::vector<int>{}, m, Region::torus) == (q - 1) * (q - 1));
    }
}

TEST_CASE("monotonicity under enlarging the subset") {
    auto sys = mk_system(3, 2, {{{1, {1, 1}}, {1, {0, 0}}}, {{1, {1, 0}}, {1, {0, 1}}}});
    for (auto region : {Region::affine, Region::torus}) {
        uint64_t whole = count(sys, {}, 1, region);  // no equations: whole space
        uint64_t first = count(sys, {1}, 1, region);
        uint64_t both = count(sys, {1, 2}, 1, region);
        CHECK(both <= first);
        CHECK(first <= whole);
    }
    CHECK(count(sys, all_indices(sys), 1, Region::torus) <= count(sys, all_indices(sys), 1, Region::affine));
}

TEST_CASE("affine count decomposes as a sum of torus counts over supports") {
    auto check_decomposition = [](const PolySystem& sys) {
        for (int m = 1; m <= 2; ++m) {
            uint64_t affine = count(sys, all_indices(sys), m, Region::affine);
            uint64_t total = 0;
            int n = sys.n;
            for (int mask = 0; mask < (1 << n); ++mask) {
                std::vector<int> support;
                for (int v = 0; v < n; ++v)
                    if (mask & (1 << v)) support.push_back(v);
                std::vector<MultiPoly> restricted;
                bool face_has_unit = false;
                for (auto& f : sys.polys) {
                    MultiPoly g = restrict_to_support(f, support);
                    if (g.is_zero()) continue;  // vanishes on the whole face
                    if (g.degree() < 1) {
                        face_has_unit = true;  // nonzero constant: no zeros on this face
                        break;
                    }
                    restricted.push_back(std::move(g));
                }
                if (face_has_unit) continue;
                if (support.empty()) {
                    total += 1;  // the origin satisfies every restricted poly
                } else if (restricted.empty()) {
                    // every poly vanishes identically on the face: full torus
                    uint64_t q = 1;
                    for (int i = 0; i < m; ++i) q *= uint64_t(sys.field.q());
                    uint64_t t = 1;
                    for (size_t i = 0; i < support.size(); ++i) t *= (q - 1);
                    total += t;
                } else {
                    PolySystem face(sys.field, int(support.size()), restricted,
                                    PolySystem::KeepOrderTag{});
                    total += count(face, all_indices(face), m, Region::torus);
                }
            }
            CHECK(total == affine);
        }
    };
    check_decomposition(mk_system(3, 2, {{{1, {1, 1}}, {2, {2, 0}}}}));
    check_decomposition(mk_system(5, 2, {{{1, {1, 1}}, {-1, {0, 0}}}}));
    check_decomposition(mk_system(3, 3, {{{1, {1, 0, 0}}, {1, {0, 1, 0}}, {1, {0, 0, 1}}}}));
}

TEST_CASE("dimension estimation on pinned examples") {
    // plane union line in A^3
    auto sys = mk_system(3, 3, {{{1, {1, 1, 0}}}, {{1, {1, 0, 1}}}});
    CHECK(estimate_dimension(sys, 8, 17) == 2);

    // single point
    auto pt = mk_system(3, 2, {{{1, {1, 0}}}, {{1, {0, 1}}}});
    CHECK(estimate_dimension(pt, 8, 17) == 0);

    // genuinely empty: x1 = 0 and x1 + 1 = 0
    auto empty = mk_system(3, 1, {{{1, {1}}}, {{1, {1}}, {1, {0}}}});
    CHECK(estimate_dimension(empty, 8, 17) == -1);

    // hypersurface in A^2
    CHECK(estimate_dimension(dwbtest::intro_cubic(), 8, 17) == 1);
}

TEST_CASE("vanishes_identically") {
    auto sys1 = mk_system(3, 1, {{{1, {1}}}});
    CHECK(vanishes_identically(mk_poly(1, {{1, {1}}}, 3), sys1, 2));

    auto sysA2 = mk_system(3, 2, {{{1, {1, 0}}}});
    CHECK_FALSE(vanishes_identically(mk_poly(2, {{1, {0, 1}}}, 3), sysA2, 2));
    CHECK(vanishes_identically(mk_poly(2, {{1, {1, 1}}}, 3), sysA2, 2));
}

TEST_CASE("jacobian smoothness scan") {
    // y^2 = x^3 - x over F_3: df/dx = 1 in char 3, never zero
    CHECK(jacobian_smooth_desk(dwbtest::intro_cubic(), 1, 2));
    // x1 x2: singular at the origin
    auto nodal = mk_system(3, 2, {{{1, {1, 1}}}});
    CHECK_FALSE(jacobian_smooth_desk(nodal, 1, 2));
}

TEST_CASE("caps are enforced") {
    auto sys = mk_system(5, 3, {{{1, {1, 1, 1}}}});
    CountOptions tiny;
    tiny.enum_cap = 100;
    CHECK_THROWS_AS(count(sys, all_indices(sys), 1, Region::affine, tiny), CapExceeded);
}
