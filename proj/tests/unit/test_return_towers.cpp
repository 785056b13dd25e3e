#include "common.hpp"

#include "symerg/tower.hpp"

#include <doctest.h>

using namespace testing;

namespace {

// Oracle: the words between consecutive occurrences of 1^(2n) in host.
std::set<Word> naive_return_words(const Word& host, int n) {
    std::vector<std::size_t> occ;
    const std::size_t two_n = 2 * static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + two_n <= host.size(); ++i)
        if (is_all_ones(WordView(host).subspan(i, two_n))) occ.push_back(i);
    std::set<Word> out;
    for (std::size_t t = 0; t + 1 < occ.size(); ++t)
        out.insert(slice(host, occ[t] + n, occ[t + 1] - occ[t]));
    return out;
}

}  // namespace

TEST_SUITE("return_towers") {

TEST_CASE("return words agree with the consecutive-occurrence oracle") {
    const auto lang = default_language();
    const Word host = Substitution::default_substitution().iterate(2, 10);
    for (int n = 1; n <= 3; ++n) {
        const auto rn = return_words(*lang, n);
        CHECK(std::set<Word>(rn.words.begin(), rn.words.end()) == naive_return_words(host, n));
        CHECK(rn.words.front() == W("1"));
    }
    CHECK(return_words(*lang, 1).words == std::vector<Word>{W("1"), W("12121")});
    CHECK(return_words(*lang, 2).words == std::vector<Word>{W("1"), W("112121121211")});
}

TEST_CASE("return word shape") {
    const auto lang = default_language();
    for (int n = 1; n <= 3; ++n) {
        const auto rn = return_words(*lang, n);
        for (const auto& w : rn.words) {
            if (w == W("1")) continue;
            const std::size_t un = static_cast<std::size_t>(n);
            CHECK(w.size() > 2 * un);
            CHECK(is_all_ones(WordView(w).first(un)));
            CHECK(w[un] != 1);
            CHECK(is_all_ones(WordView(w).last(un)));
            CHECK(w[w.size() - un - 1] != 1);
        }
    }
}

TEST_CASE("decompose") {
    const auto lang = default_language();
    const auto r1 = return_words(*lang, 1);
    CHECK(decompose(W("112121121211"), r1) == std::vector<Word>{W("1"), W("12121"), W("12121"), W("1")});
    CHECK(decompose(W("1"), r1) == std::vector<Word>{W("1")});
    const ReturnWordSet ambiguous{1, {W("1"), W("11")}, 0};
    CHECK_THROWS_AS(decompose(W("11"), ambiguous), StructuralError);
    CHECK_THROWS_AS(decompose(W("2"), r1), StructuralError);
    for (int n = 1; n <= 3; ++n) {
        const auto rn = return_words(*lang, n), rn1 = return_words(*lang, n + 1);
        for (const auto& w : rn1.words) {
            Word joined;
            for (const auto& part : decompose(w, rn)) joined.insert(joined.end(), part.begin(), part.end());
            CHECK(joined == w);
        }
    }
}

TEST_CASE("minimum nontrivial weight") {
    const auto lang = default_language();
    CHECK(min_nontrivial_weight(return_words(*lang, 1)) == 2);
    CHECK(min_nontrivial_weight(return_words(*lang, 2)) == 4);
    std::size_t prev = 0;
    for (int n = 1; n <= 3; ++n) {
        const std::size_t m = min_nontrivial_weight(return_words(*lang, n));
        CHECK(m > prev);
        prev = m;
    }
    CHECK_THROWS_AS(min_nontrivial_weight(ReturnWordSet{1, {W("1")}, 0}), DegenerateError);
}

TEST_CASE("kr towers") {
    const auto lang = default_language();
    const Clopen K = Clopen::parse(lang, "[.2]");
    const auto t1 = kr_tower(lang, 1, K);
    REQUIRE(t1.columns().size() == 2);
    CHECK(t1.columns()[0].infinite);
    CHECK(t1.columns()[0].height == 1);
    CHECK(t1.columns()[1].height == 5);
    CHECK(t1.profile().h_K == 2);
    CHECK(t1.profile().H_K == 2);
    CHECK(t1.base() == Clopen::parse(lang, "[1.1]"));

    const auto t2 = kr_tower(lang, 2, K);
    CHECK(t2.columns()[1].height == 12);
    CHECK(t2.profile().h_K == 4);
    CHECK(t2.profile().H_K == 4);

    // K not a union of levels
    CHECK_THROWS_AS(kr_tower(lang, 1, Clopen::parse(lang, "[.2112]")), StructuralError);
    CHECK_THROWS_AS(kr_tower(lang, 1, Clopen::parse(lang, "[.1]")), InputError);
}

TEST_CASE("kr tower levels partition the space") {
    const auto lang = default_language();
    for (int n = 1; n <= 3; ++n) {
        const auto t = kr_tower(lang, n, std::nullopt);
        const auto check = tower_partition_check(t);
        CHECK_MESSAGE(check.pass, check.failure);
        CHECK(check.words_checked == lang->factors(2 * static_cast<std::size_t>(t.radius()) + 1).size());
    }
}

TEST_CASE("refinement witness") {
    const auto lang = default_language();
    const auto t1 = kr_tower(lang, 1, std::nullopt), t2 = kr_tower(lang, 2, std::nullopt);
    const auto w = refinement_witness(t2, t1);
    CHECK(w.base_inclusion);
    CHECK(w.map.size() == t2.level_count());
    bool seen = false;
    for (const auto& m : w.map) {
        if (m.fine_column == 1 && m.fine_level == 3) {
            CHECK(m.coarse_column == 1);
            CHECK(m.coarse_level == 2);
            seen = true;
        }
        if (m.fine_column == 1 && m.fine_level == 0) {
            CHECK(m.coarse_column == 0);
            CHECK(m.coarse_level == 0);
        }
        CHECK(t2.level(m.fine_column, m.fine_level).subset_of(t1.level(m.coarse_column, m.coarse_level)));
    }
    CHECK(seen);
    CHECK(t2.base().subset_of(t1.base()));
}

TEST_CASE("gamma sequence") {
    const auto lang = default_language();
    const std::vector<Clopen> D = {Clopen::parse(lang, "[.2]"), Clopen::parse(lang, "[.212]")};
    const auto g1 = gamma_sequence(lang, D, 1);
    CHECK(g1.gamma.size() == 6);
    CHECK(g1.support == kr_tower(lang, 1, std::nullopt).level(0, 0).complement());
    const auto g2 = gamma_sequence(lang, D, 2);
    CHECK(g2.support == g1.support);
    CHECK(g2.gamma.finite_support() == g1.gamma.finite_support());
    CHECK(refines(g2.gamma, g1.gamma));

    // the join of gamma_1 over [-3, 3] determines the central 7 letters
    const auto j = iterated_join(g1.gamma, -3, 3);
    std::map<Atom, std::set<Word>> seen;
    for (std::size_t t = 0; t < j.words().size(); ++t)
        seen[j.labels()[t]].insert(slice(j.words()[t], static_cast<std::size_t>(-3 - j.lo()), 7));
    for (const auto& [a, s] : seen) CHECK(s.size() == 1);
    CHECK(seen.size() >= lang->factors(7).size());

    CHECK_THROWS_AS(gamma_sequence(lang, {Clopen::parse(lang, "[.1]")}, 1), InputError);
}

}  // TEST_SUITE
