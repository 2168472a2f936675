#include <catch2/catch_amalgamated.hpp>

#include "dworkbench/geometry.hpp"
#include "dworkbench/series.hpp"
#include "test_util.hpp"

using namespace dwb;
using namespace dwb::series;

namespace {

std::vector<uint64_t> counts_of(const geometry::PolySystem& sys, int M) {
    std::vector<uint64_t> c;
    for (int m = 1; m <= M; ++m)
        c.push_back(geometry::count(sys, geometry::all_indices(sys), m, geometry::Region::affine));
    return c;
}

TruncatedSeries<Rational> random_ratfun_series(SeededRng& rng, int order, int maxdeg) {
    // expansion of a random P/Q with integer coefficients, constant terms 1
    IntPoly p{Int(1)}, q{Int(1)};
    int dp = 1 + int(rng.next(uint64_t(maxdeg)));
    int dq = 1 + int(rng.next(uint64_t(maxdeg)));
    for (int i = 0; i < dp; ++i) p.push_back(Int(int64_t(rng.next(9)) - 4));
    for (int i = 0; i < dq; ++i) q.push_back(Int(int64_t(rng.next(9)) - 4));
    RationalFunction rf;
    rf.num = p;
    rf.den = q;
    poly_trim(rf.num);
    poly_trim(rf.den);
    if (rf.num.empty()) rf.num = {Int(1)};
    if (rf.den.empty()) rf.den = {Int(1)};
    return expand(rf, order);
}

}  // namespace

TEST_CASE("zeta series of pinned count sequences") {
    // affine line over F_3: geometric series of 1/(1-3t)
    std::vector<uint64_t> a1 = {3, 9, 27, 81};
    auto z = zeta_series(a1, 3);
    for (int k = 0; k <= 4; ++k) {
        Rational expect(1);
        for (int i = 0; i < k; ++i) expect *= 3;
        CHECK(z.c[size_t(k)] == expect);
    }

    // empty variety
    auto z0 = zeta_series({0, 0, 0}, 3);
    CHECK(z0.c == std::vector<Rational>{1, 0, 0, 0});

    // N_m = 3^m + 1: hand oracle is the convolution of the expansions of
    // 1/(1-t) and 1/(1-3t)
    std::vector<uint64_t> nm;
    for (int m = 1; m <= 6; ++m) nm.push_back(uint64_t(ipow(3, m)) + 1);
    auto zz = zeta_series(nm, 3);
    for (int k = 0; k <= 6; ++k) {
        Rational expect(0);
        for (int i = 0; i <= k; ++i) {
            Rational pw(1);
            for (int j = 0; j < i; ++j) pw *= 3;
            expect += pw;  // sum of 3^i for i <= k
        }
        CHECK(zz.c[size_t(k)] == expect);
    }

    // N_m = 2*3^m - 1 (A^1 disjoint union G_m): the product oracle is the
    // explicit convolution of (1-t) with the expansion of 1/(1-3t)^2
    std::vector<uint64_t> nm2;
    for (int m = 1; m <= 6; ++m) nm2.push_back(2 * uint64_t(ipow(3, m)) - 1);
    auto z2 = zeta_series(nm2, 3);
    std::vector<Rational> sq(7);  // 1/(1-3t)^2 = sum (k+1) 3^k t^k
    for (int k = 0; k <= 6; ++k) {
        Rational pw(1);
        for (int j = 0; j < k; ++j) pw *= 3;
        sq[size_t(k)] = Rational(k + 1) * pw;
    }
    for (int k = 0; k <= 6; ++k) {
        Rational expect = sq[size_t(k)] - (k >= 1 ? sq[size_t(k - 1)] : Rational(0));
        CHECK(z2.c[size_t(k)] == expect);
    }
}

TEST_CASE("delta on pinned series") {
    int M = 8;
    // 1/(1-t), q = 3 -> (1-3t)/(1-t): 1, -2, -2, ...
    TruncatedSeries<Rational> geo(M);
    for (int k = 0; k <= M; ++k) geo.c[size_t(k)] = 1;
    auto d = delta(geo, Rational(3));
    CHECK(d.c[0] == 1);
    for (int k = 1; k <= M; ++k) CHECK(d.c[size_t(k)] == -2);

    auto one = TruncatedSeries<Rational>::one(M);
    CHECK(delta(one, Rational(3)) == one);

    // 1 - t, q = 2 -> (1-t)/(1-2t) = 1 + t + 2t^2 + 4t^3 + ...
    TruncatedSeries<Rational> lin = TruncatedSeries<Rational>::one(M);
    lin.c[1] = -1;
    auto d2 = delta(lin, Rational(2));
    CHECK(d2.c[0] == 1);
    CHECK(d2.c[1] == 1);
    for (int k = 2; k <= M; ++k) {
        Rational expect(1);
        for (int i = 0; i < k - 1; ++i) expect *= 2;
        CHECK(d2.c[size_t(k)] == expect);
    }
}

TEST_CASE("delta_inverse recursion, pinned first coefficient") {
    TruncatedSeries<Rational> lin = TruncatedSeries<Rational>::one(6);
    lin.c[1] = -1;
    auto z = delta_inverse(lin, Rational(3));
    CHECK(z.c[1] == Rational(1, 2));  // (1-3)^{-1} * (-1)
    CHECK(delta_inverse(TruncatedSeries<Rational>::one(6), Rational(3)) ==
          TruncatedSeries<Rational>::one(6));
}

TEST_CASE("delta and delta_inverse are mutually inverse to order 12") {
    SeededRng rng(5);
    for (int t = 0; t < 25; ++t) {
        int64_t q = std::vector<int64_t>{2, 3, 4, 5, 9}[rng.next(5)];
        auto g = random_ratfun_series(rng, 12, 3);
        auto round1 = delta(delta_inverse(g, Rational(q)), Rational(q));
        CHECK(round1 == g);
        auto round2 = delta_inverse(delta(g, Rational(q)), Rational(q));
        CHECK(round2 == g);
    }
}

TEST_CASE("delta_inverse agrees with partial products mod q^(L+1)") {
    SeededRng rng(11);
    for (int t = 0; t < 8; ++t) {
        int64_t q = std::vector<int64_t>{2, 3, 5}[rng.next(3)];
        // integer-coefficient series with constant term 1
        TruncatedSeries<Rational> g = TruncatedSeries<Rational>::one(10);
        for (int k = 1; k <= 10; ++k) g.c[size_t(k)] = Rational(int64_t(rng.next(7)) - 3);
        auto z = delta_inverse(g, Rational(q));
        for (int L = 0; L <= 4; ++L) {
            auto partial = delta_inverse_partial(g, Rational(q), L);
            Int qpow = 1;
            for (int i = 0; i <= L; ++i) qpow *= q;
            for (int k = 1; k <= 10; ++k) {
                Rational diff = z.c[size_t(k)] - partial.c[size_t(k)];
                Int num = boost::multiprecision::numerator(diff);
                Int den = boost::multiprecision::denominator(diff);
                REQUIRE(boost::multiprecision::gcd(den, Int(q)) == 1);
                CHECK(num % qpow == 0);
            }
        }
    }
}

TEST_CASE("zeta multiplicativity under disjoint union") {
    // counts add under disjoint union, so the zeta series multiply
    std::vector<uint64_t> a, b, ab;
    for (int m = 1; m <= 6; ++m) {
        uint64_t na = uint64_t(ipow(3, m));     // A^1
        uint64_t nb = uint64_t(ipow(3, m)) - 1; // G_m
        a.push_back(na);
        b.push_back(nb);
        ab.push_back(na + nb);
    }
    CHECK(zeta_series(ab, 3) == ts_mul(zeta_series(a, 3), zeta_series(b, 3)));
}

TEST_CASE("pade reconstruction of pinned zeta functions") {
    // G_m over F_5
    std::vector<uint64_t> gm;
    for (int m = 1; m <= 6; ++m) gm.push_back(uint64_t(ipow(5, m)) - 1);
    auto rf = pade_auto(zeta_series(gm, 5), 1, 3);
    CHECK(rf.num == IntPoly{1, -1});
    CHECK(rf.den == IntPoly{1, -5});

    // A^2 over F_3
    std::vector<uint64_t> a2;
    for (int m = 1; m <= 6; ++m) a2.push_back(uint64_t(ipow(9, m)));
    auto rf2 = pade_auto(zeta_series(a2, 3), 1, 3);
    CHECK(rf2.num == IntPoly{1});
    CHECK(rf2.den == IntPoly{1, -9});
}

TEST_CASE("pade reconstruction of the curve y^2 = x^3 - x over F_3") {
    auto counts = counts_of(dwbtest::intro_cubic(), 8);
    auto z = zeta_series(counts, 3);
    auto rf = pade_auto(z, 1, 4);
    CHECK(poly_deg(rf.num) <= 3);
    CHECK(poly_deg(rf.den) <= 1);
    // idempotence: the reconstruction reproduces every input count
    auto back = expand(rf, 8);
    for (int k = 0; k <= 8; ++k) CHECK(back.c[size_t(k)] == z.c[size_t(k)]);
}

TEST_CASE("pade failure signals too small a degree bound") {
    auto counts = counts_of(dwbtest::intro_cubic(), 8);
    auto z = zeta_series(counts, 3);
    CHECK_THROWS(pade_reconstruct(z, 1));
}

TEST_CASE("newton polygon on pinned polynomials") {
    auto np1 = newton_polygon({1, 3, 9}, 3, 1);
    REQUIRE(np1.slopes.size() == 2);
    CHECK(np1.slopes[0] == Rational(1));
    CHECK(np1.slopes[1] == Rational(1));

    auto np2 = newton_polygon({1, 1}, 3, 1);
    REQUIRE(np2.slopes.size() == 1);
    CHECK(np2.slopes[0] == Rational(0));

    auto np3 = newton_polygon({1, 6, 27}, 3, 1);
    REQUIRE(np3.vertices.size() == 3);
    CHECK(np3.vertices[0] == std::pair<int64_t, int64_t>{0, 0});
    CHECK(np3.vertices[1] == std::pair<int64_t, int64_t>{1, 1});
    CHECK(np3.vertices[2] == std::pair<int64_t, int64_t>{2, 3});
    CHECK(np3.slopes[0] == Rational(1));
    CHECK(np3.slopes[1] == Rational(2));

    // ord_q units: a = 2 halves the slopes
    auto np4 = newton_polygon({1, 3, 9}, 3, 2);
    CHECK(np4.slopes[0] == Rational(1, 2));
}

TEST_CASE("newton polygon slopes are invariant under unit rescaling of t") {
    SeededRng rng(23);
    for (int t = 0; t < 10; ++t) {
        IntPoly f{1};
        int deg = 2 + int(rng.next(3));
        for (int i = 0; i < deg; ++i)
            f.push_back(Int(int64_t(ipow(3, int(rng.next(4)))) * (1 + int64_t(rng.next(5)))));
        auto base = newton_polygon(f, 3, 1);
        // u = 2 is a unit mod 3: rescale t -> 2t
        IntPoly g = f;
        Int u = 1;
        for (size_t k = 0; k < g.size(); ++k) {
            g[k] *= u;
            u *= 2;
        }
        auto scaled = newton_polygon(g, 3, 1);
        CHECK(base.slopes == scaled.slopes);
    }
}

TEST_CASE("weak visibility on pinned factors") {
    RationalFunction a2;  // 1/(1-9t)
    a2.den = {1, -9};
    auto rep = weak_visibility_check({1, -3}, {a2}, 3, 2);
    bool found = false;
    for (auto& h : rep.hits)
        if (h.zeta_index == 0 && h.shift == 1 && h.side == VisibilityHit::Side::pole) found = true;
    CHECK(found);

    RationalFunction gm;  // (1-t)/(1-5t)
    gm.num = {1, -1};
    gm.den = {1, -5};
    auto rep2 = weak_visibility_check({1, -5}, {gm}, 5, 0);
    bool found2 = false;
    for (auto& h : rep2.hits)
        if (h.shift == 0 && h.side == VisibilityHit::Side::pole) found2 = true;
    CHECK(found2);

    // a miss is reported as not witnessed
    auto rep3 = weak_visibility_check({1, -7}, {a2}, 3, 1);
    CHECK_FALSE(rep3.witnessed());
}

TEST_CASE("weak visibility finds a curve Frobenius factor") {
    // affine curve y^2 = x^3 + 2 over F_7; its zeta numerator is 1 + t + 7t^2
    auto curve = dwbtest::mk_system(7, 2, {{{1, {0, 2}}, {-1, {3, 0}}, {-2, {0, 0}}}});
    auto counts = counts_of(curve, 4);
    auto rf = pade_auto(zeta_series(counts, 7), 1, 2);
    CHECK(rf.num == IntPoly{1, 1, 7});
    auto rep = weak_visibility_check({1, 1, 7}, {rf}, 7, 0);
    bool found = false;
    for (auto& h : rep.hits)
        if (h.shift == 0 && h.side == VisibilityHit::Side::zero) found = true;
    CHECK(found);
}
