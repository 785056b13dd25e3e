#include "common.hpp"

#include "symerg/subshift.hpp"

#include <doctest.h>

using namespace testing;

namespace {

// Oracle: difference ratio of naive occurrence counts in sigma^n(2).
Rational naive_frequency(const Word& w, unsigned n) {
    const auto sub = Substitution::default_substitution();
    const Word a = sub.iterate(2, n), b = sub.iterate(2, n + 1);
    const Integer dw = Integer(naive_count(b, w)) - Integer(naive_count(a, w));
    const Integer ds = Integer(naive_count(b, W("2"))) - Integer(naive_count(a, W("2")));
    return Rational(dw, ds);
}

std::shared_ptr<const SubstitutionLanguage> split_square() {
    static auto lang = std::make_shared<const SubstitutionLanguage>(
        Substitution(3, {W("1111"), W("21311312"), W("31211213")}, 2));
    return lang;
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("cylinder measures") {
    const auto mu = default_measure();
    CHECK(mu->cylinder(W("2")).value() == 1);
    CHECK(mu->cylinder(W("212")).value() == Q("1/2"));
    CHECK(mu->cylinder(W("2112")).value() == Q("1/4"));
    CHECK(mu->cylinder(W("22")).value() == 0);
    CHECK(mu->cylinder(W("11")).is_infinite());
    CHECK(mu->cylinder(Word{}).is_infinite());
    for (const char* w : {"212", "2112", "12", "121", "21121", "1211212"}) {
        const Rational oracle = naive_frequency(W(w), 11);
        CHECK(oracle == naive_frequency(W(w), 12));
        CHECK(mu->cylinder(W(w)).value() == oracle);
    }
}

TEST_CASE("occurrence counts match naive scanning") {
    const auto sub = Substitution::default_substitution();
    for (const char* w : {"2", "212", "2112", "11", "1111", "12121", "21211212"}) {
        for (unsigned n = 0; n <= 9; ++n) {
            const auto c = occurrence_counts(sub, W(w), n);
            CHECK(c[0] == naive_count(sub.iterate(1, n), W(w)));
            CHECK(c[1] == naive_count(sub.iterate(2, n), W(w)));
        }
    }
}

TEST_CASE("kolmogorov consistency") {
    const auto mu = default_measure();
    const auto lang = default_language();
    for (std::size_t len = 1; len <= 6; ++len)
        for (const auto& w : lang->factors(len)) {
            if (is_all_ones(w)) continue;
            CHECK(kolmogorov_consistent(*mu, w));
            Rational right = 0, left = 0;
            for (Letter a = 1; a <= 2; ++a) {
                const auto ra = mu->cylinder(concat(w, Word{a})), la = mu->cylinder(concat(Word{a}, w));
                right += ra.value();
                left += la.value();
            }
            CHECK(right == mu->cylinder(w).value());
            CHECK(left == mu->cylinder(w).value());
        }
}

TEST_CASE("clopen measures") {
    const auto mu = default_measure();
    const auto lang = default_language();
    CHECK(clopen_measure(*mu, Clopen::parse(lang, "[.2]")).value() == 1);
    CHECK(clopen_measure(*mu, Clopen::parse(lang, "[.212]|[.211]")).value() == 1);
    CHECK(clopen_measure(*mu, Clopen::parse(lang, "[.21]")).value() == 1);
    CHECK(clopen_measure(*mu, Clopen::parse(lang, "[.2]").complement()).is_infinite());
    CHECK(clopen_measure(*mu, Clopen::parse(lang, "[2.1]")).value() == 1);
    CHECK(clopen_measure(*mu, Clopen::parse(lang, "[.22]")).value() == 0);
}

TEST_CASE("birkhoff certificate") {
    const auto mu = default_measure();
    const auto lang = default_language();
    const Clopen K = Clopen::parse(lang, "[.2]");
    const auto r = birkhoff_certificate(*lang, *mu, K, Clopen::parse(lang, "[.212]"), Q("1/8"), 14);
    CHECK(r.c_matches);
    CHECK(r.empirical_c == Q("1/2"));
    CHECK(r.pass);
    CHECK(r.m > 0);
    CHECK(r.m <= r.max_k_count);

    const auto same = birkhoff_certificate(*lang, *mu, K, K, Q("1/8"), 10);
    CHECK(same.empirical_c == 1);
    CHECK(same.worst_deviation == 0);
    CHECK(same.pass);

    const auto none = birkhoff_certificate(*lang, *mu, K, Clopen::parse(lang, "[.22]"), Q("1/8"), 10);
    CHECK(none.empirical_c == 0);
    CHECK(none.worst_deviation == 0);
}

TEST_CASE("birkhoff certificate is independent of the job count") {
    const auto mu = default_measure();
    const auto lang = default_language();
    const Clopen K = Clopen::parse(lang, "[.2]"), A = Clopen::parse(lang, "[.2112]");
    const auto a = birkhoff_certificate(*lang, *mu, K, A, Q("1/16"), 12, 1);
    const auto b = birkhoff_certificate(*lang, *mu, K, A, Q("1/16"), 12, 4);
    CHECK(a.m == b.m);
    CHECK(a.worst_deviation == b.worst_deviation);
    CHECK(a.worst_k_count == b.worst_k_count);
}

TEST_CASE("pushforward") {
    const auto mu = default_measure();
    const PushforwardMeasure id(mu, SubscriptMap::identity(2));
    for (std::size_t len = 1; len <= 5; ++len)
        for (const auto& w : default_language()->factors(len)) CHECK(id.cylinder(w) == mu->cylinder(w));

    auto Y = split_square();
    auto muY = std::make_shared<const SubstitutionMeasure>(Y);
    const PushforwardMeasure nu(muY, SubscriptMap::parse("1:1,2:2,3:2"));
    CHECK(nu.cylinder(W("2")).value() == muY->cylinder(W("2")).value() + muY->cylinder(W("3")).value());
    CHECK(nu.cylinder(W("212")).value() ==
          muY->cylinder(W("212")).value() + muY->cylinder(W("213")).value() + muY->cylinder(W("312")).value() +
              muY->cylinder(W("313")).value());
    for (std::size_t len = 1; len <= 5; ++len)
        for (const auto& u : nu.language()->factors(len))
            if (!is_all_ones(u)) CHECK(kolmogorov_consistent(nu, u));
}

TEST_CASE("product versus diagonal") {
    const auto mu = default_measure();
    const auto lang = default_language();
    const Clopen a = Clopen::parse(lang, "[.212]"), b = Clopen::parse(lang, "[.211]");
    const auto same = product_vs_diagonal(*mu, a, a);
    CHECK(same.product == Q("1/4"));
    CHECK(same.diagonal == Q("1/2"));
    const auto cross = product_vs_diagonal(*mu, a, b);
    CHECK(cross.product == Q("1/4"));
    CHECK(cross.diagonal == 0);
    CHECK(same.product * cross.diagonal != cross.product * same.diagonal);
    for (int k : {-2, -1, 1, 2}) {
        const auto s = product_vs_diagonal_shifted(*mu, a, b, k);
        CHECK(s.product == cross.product);
        CHECK(s.diagonal == cross.diagonal);
    }
}

}  // TEST_SUITE
