#include "common.hpp"

#include "symerg/partition.hpp"
#include "symerg/uniformity.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <random>

using namespace testing;

namespace {

// A random partition on window [-1, 1] with `m` atoms.
WindowPartition random_partition(std::mt19937& rng, std::size_t m) {
    const auto lang = default_language();
    const auto& ws = lang->factors(3);
    for (;;) {
        std::vector<Atom> labels(ws.size());
        std::vector<bool> used(m + 1, false);
        for (std::size_t i = 0; i < ws.size(); ++i) {
            labels[i] = is_all_ones(ws[i]) ? 1 : static_cast<Atom>(1 + rng() % m);
            used[labels[i]] = true;
        }
        bool ok = true;
        for (std::size_t a = 2; a <= m; ++a) ok = ok && used[a];
        if (ok) return WindowPartition(lang, -1, 1, labels, m);
    }
}

// Oracle: sum over finite atoms of the measure of words labelled i by exactly one side.
Rational naive_distance(const WindowPartition& a, const WindowPartition& b) {
    const auto mu = default_measure();
    Rational d = 0;
    for (std::size_t t = 0; t < a.words().size(); ++t)
        for (Atom i = 2; i <= a.size(); ++i)
            if ((a.labels()[t] == i) != (b.labels()[t] == i)) d += mu->cylinder(a.words()[t]).value();
    return d;
}

}  // namespace

TEST_SUITE("partitions_uniformity") {

TEST_CASE("joins") {
    const auto lang = default_language();
    const auto alpha = WindowPartition::letter_partition(lang);
    CHECK(same_up_to_relabeling(join(alpha, alpha), alpha));
    const auto two = join(alpha, alpha.pullback(1));
    CHECK(two.size() == 3);
    CHECK(two.label(W("11")) == 1);
    const auto three = iterated_join(alpha, -1, 1);
    CHECK(three.size() == 5);
    CHECK(three.label(W("111")) == 1);
    CHECK(three.atom_measure(*default_measure(), three.label(W("212"))).value() == Q("1/2"));
    CHECK(same_up_to_relabeling(join(three, alpha), three));
    CHECK(same_up_to_relabeling(iterated_join(alpha, 0, 0), alpha));
    CHECK(refines(three, alpha));
    CHECK_FALSE(refines(alpha, three));
}

TEST_CASE("refinement maps compose") {
    const auto lang = default_language();
    const auto a = WindowPartition::letter_partition(lang);
    const auto b = iterated_join(a, 0, 1);
    const auto c = iterated_join(a, -1, 1);
    const auto fab = refinement_map(a, b), fbc = refinement_map(b, c), fac = refinement_map(a, c);
    REQUIRE(fab);
    REQUIRE(fbc);
    REQUIRE(fac);
    CHECK(*fac == fab->compose(*fbc));
}

TEST_CASE("partition invariants") {
    const auto lang = default_language();
    CHECK_THROWS_AS(WindowPartition(lang, 0, 0, {2, 1}, 2), InputError);
    CHECK_THROWS_AS(WindowPartition(lang, 0, 0, {1, 1}, 2), InputError);
    const auto alpha = iterated_join(WindowPartition::letter_partition(lang), -1, 1);
    const auto back = WindowPartition::from_json(lang, alpha.to_json());
    CHECK(back.labels() == alpha.labels());
    CHECK(back.lo() == -1);
    CHECK(alpha.to_json()["window"] == nlohmann::json::array({-1, 1}));
}

TEST_CASE("distance") {
    const auto lang = default_language();
    const auto mu = default_measure();
    const auto a = WindowPartition::from_clopens(lang, {Clopen::parse(lang, "[.212]")});
    const auto b = WindowPartition::from_clopens(lang, {Clopen::parse(lang, "[.211]")});
    CHECK(distance(*mu, a, a) == 0);
    CHECK(distance(*mu, a, b) == 1);
    CHECK_THROWS_AS(distance(*mu, a, iterated_join(WindowPartition::letter_partition(lang), -1, 1)), InputError);
}

TEST_CASE("distance is an exact metric on random partitions") {
    std::mt19937 rng(20261018);
    const auto mu = default_measure();
    for (int t = 0; t < 60; ++t) {
        const auto a = random_partition(rng, 3), b = random_partition(rng, 3), c = random_partition(rng, 3);
        const Rational ab = distance(*mu, a, b), bc = distance(*mu, b, c), ac = distance(*mu, a, c);
        CHECK(ab == naive_distance(a, b));
        CHECK(ab == distance(*mu, b, a));
        CHECK(ac <= ab + bc);
        CHECK((ab == 0) == (a.labels() == b.labels()));
    }
}

TEST_CASE("block partition distance inequality") {
    const auto lang = default_language();
    const auto mu = default_measure();
    const auto a = WindowPartition::from_clopens(lang, {Clopen::parse(lang, "[.212]")});
    const auto zero = remark31_check(*mu, a, a, 2);
    CHECK(zero.applicable);
    CHECK(zero.lhs == 0);
    CHECK(zero.rhs == 0);
    CHECK(zero.pass);
    const auto b = WindowPartition::from_clopens(lang, {Clopen::parse(lang, "[.212]|[2.1]")});
    const auto r = remark31_check(*mu, a, b, 2);
    if (r.applicable) {
        CHECK(r.pass);
        CHECK(r.lhs < r.rhs);
    } else {
        CHECK_FALSE(r.diagnostic.empty());
    }
    std::mt19937 rng(7);
    int applicable = 0;
    for (int t = 0; t < 40; ++t) {
        const auto x = random_partition(rng, 3), y = random_partition(rng, 3);
        for (int k = 1; k <= 2; ++k) {
            const auto c = remark31_check(*mu, x, y, k);
            if (!c.applicable) continue;
            ++applicable;
            CHECK(c.pass);
            CHECK(c.lhs <= c.rhs);
        }
    }
    CHECK(applicable > 0);
}

TEST_CASE("alpha T approximation") {
    const auto lang = default_language();
    const auto mu = default_measure();
    const auto letter = WindowPartition::letter_partition(lang);
    const Clopen TA2 = letter.atom(2).shifted(1);
    const auto exact = alpha_T_approx(*mu, TA2, letter, 0);
    CHECK(exact.within);
    CHECK(exact.error == 0);
    REQUIRE(exact.F);
    CHECK(*exact.F == TA2);

    const Clopen E = Clopen::parse(lang, "[.212]");
    const auto coarse = alpha_T_approx(*mu, E, letter, 0);
    CHECK_FALSE(coarse.within);
    CHECK(coarse.error > 0);
    const auto fine = alpha_T_approx(*mu, E, iterated_join(letter, -1, 1), 0);
    CHECK(fine.within);
    CHECK(fine.error == 0);
}

TEST_CASE("block empirical distribution") {
    const auto lang = default_language();
    const auto mu = default_measure();
    const auto letter = WindowPartition::letter_partition(lang);
    const auto ref = reference_distribution(*mu, letter, 1);
    REQUIRE(ref.blocks == std::vector<Word>{W("2")});
    CHECK(ref.ref[0] == 1);
    const auto d = block_empirical(W("12121"), ref);
    CHECK(d.denominator == 2);
    CHECK(d.freq[0] == 1);
    CHECK(max_deviation(d, ref).value == 0);
    CHECK_THROWS_AS(block_empirical(W("1111"), ref), DegenerateError);

    // k = 2 over "12121": j = 2, 3, 4 have full windows "121", "212", "121"; the
    // denominator counts j < 5 with w_j != 1, i.e. j = 2, 4
    const auto ref2 = reference_distribution(*mu, letter, 2);
    const auto d2 = block_empirical(W("12121"), ref2);
    CHECK(d2.denominator == 2);
    for (std::size_t t = 0; t < d2.support.size(); ++t) {
        if (d2.support[t] == W("121")) CHECK(d2.freq[t] == 1);
        else if (d2.support[t] == W("212")) CHECK(d2.freq[t] == Q("1/2"));
        else CHECK(d2.freq[t] == 0);
    }
    Rational ref_total = 0;
    for (const auto& r : ref2.ref) ref_total += r;
    Rational oracle = 0;
    for (const auto& w : lang->factors(3))
        if (!is_all_ones(w)) oracle += mu->cylinder(w).value();
    CHECK(ref_total == oracle / ref2.mu_K);
}

TEST_CASE("uniformity and empirical N") {
    const auto lang = default_language();
    const auto mu = default_measure();
    const auto letter = WindowPartition::letter_partition(lang);
    const auto ref2 = reference_distribution(*mu, letter, 2);
    const Word name = host_name(*lang, letter, 12);
    CHECK_FALSE(uniformity_check(name, ref2, 1, 0).pass);
    const auto n4 = empirical_N(name, ref2, Q("1/4"));
    REQUIRE(n4.found);
    CHECK(uniformity_check(name, ref2, n4.N, Q("1/4")).pass);
    if (n4.N > 1) CHECK_FALSE(uniformity_check(name, ref2, n4.N - 1, Q("1/4")).pass);
    const auto n8 = empirical_N(name, ref2, Q("1/8"));
    REQUIRE(n8.found);
    CHECK(n4.N <= n8.N);
    // with k = 1 every frequency and reference lies in [0, 1]
    const auto three = iterated_join(letter, -1, 1);
    const auto ref1 = reference_distribution(*mu, three, 1);
    const auto at_one = empirical_N(host_name(*lang, three, 12), ref1, 1);
    CHECK(at_one.found);
    CHECK(at_one.N == 1);
    CHECK_FALSE(empirical_N(name, ref2, pow2_inv(40)).found);
}

TEST_CASE("section scan agrees with the quadratic reference") {
    const auto lang = default_language();
    const auto mu = default_measure();
    const auto letter = WindowPartition::letter_partition(lang);
    const Word host = host_name(*lang, letter, 10);
    std::mt19937 rng(99);
    for (int k = 1; k <= 2; ++k) {
        const auto ref = reference_distribution(*mu, letter, k);
        for (int t = 0; t < 25; ++t) {
            const std::size_t len = 20 + rng() % 130;
            const std::size_t start = rng() % (host.size() - len);
            const Word name = slice(host, start, len);
            for (const char* e : {"1/4", "1/8", "1/16"})
                for (bool last : {false, true}) {
                    const auto fast = scan_sections(name, ref, Q(e), last, 1 + t % 3);
                    const auto slow = scan_sections_naive(name, ref, Q(e), last);
                    CHECK(fast.max_violating_k_points == slow.max_violating_k_points);
                    CHECK(fast.total_k_points == slow.total_k_points);
                    CHECK(fast.worst.has_value() == slow.worst.has_value());
                }
        }
    }
}

}  // TEST_SUITE
