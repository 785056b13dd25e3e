#include "common.hpp"

#include "symerg/subshift.hpp"

#include <doctest.h>

using namespace testing;

TEST_SUITE("subshift_codes") {

TEST_CASE("point windows") {
    CHECK(S(Point(FixedPoint{}).window(-2, 2)) == "11111");
    CHECK(S(Point(CompactSupport{{}, W("2")}).window(-1, 1)) == "121");
    CHECK(S(Point(Generated{Substitution::default_substitution(), 3}).window(0, 7)) == "21211212");
    CHECK_THROWS_AS(Point(FixedPoint{}).window(2, 1), InputError);
    CHECK_THROWS_AS(Point(Generated{Substitution::default_substitution(), 3, 64}).window(0, 100000), ResourceError);
}

TEST_CASE("generated windows lie in the language") {
    const auto lang = default_language();
    const Point p(Generated{Substitution::default_substitution(), 6});
    for (std::int64_t lo = -300; lo <= 300; lo += 37) CHECK(lang->contains(p.window(lo, lo + 30)));
}

TEST_CASE("apply_code") {
    CHECK(S(apply_code(SubscriptMap::identity(2), W("12121"))) == "12121");
    const auto f = SubscriptMap::parse("1:1,2:2,3:2");
    CHECK(f.source_size() == 3);
    CHECK(f.target_size() == 2);
    CHECK(S(apply_code(f, W("123"))) == "122");
    CHECK(apply_code(SubscriptMap::identity(2), Point(FixedPoint{})).is_fixed_point());
}

TEST_CASE("subscript map invariants") {
    CHECK_THROWS_AS(SubscriptMap({1, 1}, 2), InputError);
    CHECK_THROWS_AS(SubscriptMap({2, 1}, 2), InputError);
    CHECK_THROWS_AS(SubscriptMap::parse("1:1,3:2"), InputError);
    CHECK(SubscriptMap::parse("1:1,2:2,3:2").str() == "1:1,2:2,3:2");
}

TEST_CASE("image language") {
    const auto lang = default_language();
    const auto id = SubscriptMap::identity(2);
    CHECK(image_factors(id, lang, 2) == std::vector<Word>{W("11"), W("12"), W("21")});
    CHECK(image_factors(id, lang, 1) == std::vector<Word>{W("1"), W("2")});
    CHECK_THROWS_AS(image_factors(SubscriptMap::identity(3), lang, 1), InputError);
}

TEST_CASE("merge code image of the split square is the default language") {
    auto Y = std::make_shared<const SubstitutionLanguage>(
        Substitution(3, {W("1111"), W("21311312"), W("31211213")}, 2));
    const auto f = SubscriptMap::parse("1:1,2:2,3:2");
    const auto Z = image_language(f, Y);
    for (std::size_t len = 1; len <= 9; ++len) CHECK(Z->factors(len) == default_language()->factors(len));
    // factor closure and biextendability of the image
    for (std::size_t len = 1; len <= 6; ++len)
        for (const auto& w : Z->factors(len + 2)) CHECK(Z->contains(slice(w, 1, len)));
}

TEST_CASE("product language") {
    const auto lang = default_language();
    CHECK(product_language(lang, lang, 1).size() == 4);
    CHECK(product_language(lang, lang, 2).size() == 9);
    const auto zero = product_language(lang, lang, 0);
    REQUIRE(zero.size() == 1);
    CHECK(zero.front().empty());
    CHECK(pair_letter(1, 1, 2) == 1);
    CHECK(unpair_letter(pair_letter(2, 1, 2), 2) == std::pair<Letter, Letter>{2, 1});
}

TEST_CASE("codes commute with the shift") {
    const auto f = SubscriptMap::parse("1:1,2:2,3:2");
    const Substitution sub(3, {W("1111"), W("21311312"), W("31211213")}, 2);
    const Point p(Generated{sub, 3});
    const Point q(CompactSupport{W("3"), W("21")});
    for (const Point& x : {p, q})
        for (std::int64_t k = -9; k <= 9; k += 3)
            CHECK(apply_code(f, x.shifted(k)).window(-12, 12) == apply_code(f, x).shifted(k).window(-12, 12));
}

TEST_CASE("code composition") {
    const auto f = SubscriptMap::parse("1:1,2:2,3:3,4:3");
    const auto g = SubscriptMap::parse("1:1,2:2,3:2");
    const Word w = W("1234321");
    CHECK(apply_code(g.compose(f), w) == apply_code(g, apply_code(f, w)));
    CHECK_THROWS_AS(f.compose(g), InputError);
}

}  // TEST_SUITE
