#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "dworkbench/fields.hpp"

using namespace dwb;
using namespace dwb::fields;

TEST_CASE("prime field and small extensions enumerate correctly") {
    FieldSpec f3{3, 1, {}};
    auto F9 = make_extension(f3, 2);
    CHECK(F9->size() == 9);
    CHECK(F9->abs_degree() == 2);

    FieldSpec f5{5, 1, {}};
    auto F5 = make_extension(f5, 1);
    CHECK(F5->size() == 5);
    CHECK(F5->embedding == Coeffs{1});
    for (uint64_t k = 0; k < 5; ++k) {
        auto e = element_at(F5, k);
        CHECK(index_of(e) == k);
        CHECK((e.coords.empty() ? 0 : e.coords[0]) == int64_t(k));
    }

    FieldSpec f2{2, 1, {}};
    auto F4 = make_extension(f2, 2);
    CHECK(F4->size() == 4);

    auto F27 = make_extension(f3, 3);
    std::set<Coeffs> seen;
    for (uint64_t k = 0; k < 27; ++k) seen.insert(element_at(F27, k).coords);
    CHECK(seen.size() == 27);
    CHECK(element_at(F27, 0).is_zero());
}

TEST_CASE("extension of a nonprime base embeds a root of the base modulus") {
    FieldSpec f9{3, 2, {1, 0, 1}};  // F_9 = F_3[y]/(y^2+1)
    f9.validate();
    auto F81 = make_extension(f9, 2);
    CHECK(F81->size() == 81);
    FieldElement root{F81->embedding, F81};
    CHECK(fe_eval_poly({1, 0, 1}, root).is_zero());
    // oracle: exhaustive search finds exactly two roots of y^2+1 among 81
    int roots = 0;
    for (uint64_t k = 0; k < 81; ++k)
        if (fe_eval_poly({1, 0, 1}, element_at(F81, k)).is_zero()) ++roots;
    CHECK(roots == 2);
}

TEST_CASE("absolute trace") {
    FieldSpec f3{3, 1, {}};
    auto F9 = make_extension(f3, 2);
    CHECK(trace_to_prime(fe_from_int(F9, 1)) == 2);  // 1 + 1 in F_3

    // y in F_9 = F_3[y]/(y^2+1): y + y^3 = y - y = 0
    REQUIRE(F9->modulus == Coeffs{1, 0, 1});
    FieldElement y = element_at(F9, 3);
    REQUIRE(y.coords == Coeffs{0, 1});
    CHECK(trace_to_prime(y) == 0);

    FieldSpec f5{5, 1, {}};
    auto F5 = make_extension(f5, 1);
    CHECK(trace_to_prime(fe_from_int(F5, 3)) == 3);
}

TEST_CASE("trace is F_p-linear and surjective") {
    FieldSpec f3{3, 1, {}};
    for (int m : {2, 3}) {
        auto F = make_extension(f3, m);
        std::set<int64_t> image;
        for (uint64_t k = 0; k < F->size(); ++k) image.insert(trace_to_prime(element_at(F, k)));
        CHECK(image == std::set<int64_t>{0, 1, 2});
        SeededRng rng(7);
        for (int t = 0; t < 40; ++t) {
            auto x = element_at(F, rng.next(F->size()));
            auto y = element_at(F, rng.next(F->size()));
            CHECK(trace_to_prime(x + y) == (trace_to_prime(x) + trace_to_prime(y)) % 3);
        }
    }
}

TEST_CASE("field axioms on random triples and the Frobenius fixed point") {
    std::vector<std::pair<FieldSpec, int>> cases = {
        {{3, 1, {}}, 2}, {{2, 1, {}}, 3}, {{5, 1, {}}, 2}, {{3, 2, {1, 0, 1}}, 2}};
    for (auto& [spec, m] : cases) {
        auto F = make_extension(spec, m);
        SeededRng rng(41);
        for (int t = 0; t < 50; ++t) {
            auto x = element_at(F, rng.next(F->size()));
            auto y = element_at(F, rng.next(F->size()));
            auto z = element_at(F, rng.next(F->size()));
            CHECK(((x + y) + z) == (x + (y + z)));
            CHECK((x * (y + z)) == (x * y + x * z));
            CHECK((x * y) == (y * x));
            CHECK(((x * y) * z) == (x * (y * z)));
            if (!x.is_zero()) CHECK((x * fe_inverse(x)) == fe_from_int(F, 1));
        }
        for (uint64_t k = 0; k < F->size(); ++k) {
            auto x = element_at(F, k);
            CHECK(fe_pow(x, F->size()) == x);
        }
    }
}

TEST_CASE("dense tables agree with exact element arithmetic") {
    std::vector<std::pair<FieldSpec, int>> cases = {
        {{3, 1, {}}, 3}, {{5, 1, {}}, 2}, {{2, 1, {}}, 4}, {{3, 2, {1, 0, 1}}, 2}};
    for (auto& [spec, m] : cases) {
        auto desc = make_extension(spec, m);
        DenseField F(desc);
        SeededRng rng(99);
        for (int t = 0; t < 200; ++t) {
            uint32_t i = uint32_t(rng.next(F.size()));
            uint32_t j = uint32_t(rng.next(F.size()));
            auto x = element_at(desc, i);
            auto y = element_at(desc, j);
            CHECK(F.add(i, j) == index_of(x + y));
            CHECK(F.mul(i, j) == index_of(x * y));
            CHECK(F.neg(i) == index_of(fe_from_int(desc, 0) - x));
            CHECK(F.pow(i, 5) == index_of(fe_pow(x, 5)));
            CHECK(F.trace(i) == trace_to_prime(x));
            if (i) CHECK(F.inv(i) == index_of(fe_inverse(x)));
        }
    }
}

TEST_CASE("modulus search is deterministic and caps are honored") {
    FieldSpec f3{3, 1, {}};
    auto a = make_extension(f3, 4);
    auto b = make_extension(f3, 4);
    CHECK(a->modulus == b->modulus);

    FieldOptions tiny;
    tiny.enum_cap = 100;
    CHECK_THROWS_AS(make_extension(f3, 5, tiny), CapExceeded);
}

TEST_CASE("spec validation rejects bad input") {
    CHECK_THROWS_AS((FieldSpec{4, 1, {}}).validate(), InputError);
    CHECK_THROWS_AS((FieldSpec{3, 2, {2, 0, 1}}).validate(), InputError);  // y^2+2 = (y-1)(y+1)
    CHECK_NOTHROW((FieldSpec{3, 2, {1, 0, 1}}).validate());
}
