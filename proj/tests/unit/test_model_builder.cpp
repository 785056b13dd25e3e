#include "common.hpp"

#include "symerg/model.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <random>

using namespace testing;

namespace {

const char* kSplitSquare =
    R"({"substitution":{"alphabet_size":3,"images":{"1":"1111","2":"21311312","3":"31211213"},"seed":2},)"
    R"("code":"1:1,2:2,3:2","scan_depth":7,"E":["[.3]","[.2]","[.3]"]})";

struct StageOne {
    WindowPartition beta;
    WindowPartition J;
    BlockReference ref;
};

// Stage-one ingredients: beta = pullback of gamma_1, tau from E, J = tau v beta.
StageOne stage_one(const BuildContext& ctx, const std::string& e) {
    std::vector<Clopen> D;
    for (const auto& d : ctx.config.D) D.push_back(Clopen::parse(ctx.Z, d));
    auto beta = ctx.pull(gamma_sequence(ctx.Z, D, 1).gamma);
    const Clopen E = Clopen::parse(ctx.Y, e);
    auto tau = WindowPartition::from_clopens(ctx.Y, {E.intersect(*ctx.K), ctx.K->minus(E)});
    auto J = join(tau, beta);
    auto ref = reference_distribution(*ctx.muY, J, 1);
    return {beta, J, ref};
}

}  // namespace

TEST_SUITE("model_builder") {

TEST_CASE("choose parameters") {
    const auto p = choose_parameters(1, Q("1/2"), 1, 1, 0);
    CHECK(p.n == 3);
    CHECK(p.delta == Q("1/64"));
    CHECK(pow2_inv(static_cast<unsigned>(p.n)) < Q("1/6"));
    CHECK(pow2_inv(static_cast<unsigned>(p.n - 1)) >= Q("1/6"));
    Rational prev = 1;
    for (std::size_t r = 1; r <= 12; ++r) {
        const auto q = choose_parameters(2, Q("1/2"), 1, r, 3);
        CHECK(q.n == 4);
        CHECK(q.delta <= prev);
        CHECK(q.delta < q.delta_bound);
        CHECK(q.delta * 2 >= q.delta_bound);
        prev = q.delta;
    }
    CHECK(choose_parameters(2, Q("1/2"), 1, 21, 3).delta < choose_parameters(2, Q("1/2"), 1, 2, 3).delta);
    CHECK_THROWS(choose_parameters(1, 0, 1, 1, 0));
}

TEST_CASE("dyadic below") {
    CHECK(dyadic_below(Q("1/32")) == Q("1/64"));
    CHECK(dyadic_below(Q("1/33")) == Q("1/64"));
    CHECK(dyadic_below(Q("3/64")) == Q("1/32"));
    CHECK(dyadic_below(2) == 1);
}

TEST_CASE("mediant property on random exact rationals") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + rng() % 8;
        std::vector<std::pair<Rational, Rational>> terms;
        Rational sa = 0, sb = 0, lo = -1, hi = -1;
        for (std::size_t i = 0; i < n; ++i) {
            const Rational a(Integer(rng() % 1000), Integer(1 + rng() % 97));
            const Rational b(Integer(1 + rng() % 1000), Integer(1 + rng() % 89));
            terms.emplace_back(a, b);
            sa += a;
            sb += b;
            const Rational q = a / b;
            if (lo < 0 || q < lo) lo = q;
            if (hi < 0 || q > hi) hi = q;
        }
        CHECK(lo <= sa / sb);
        CHECK(sa / sb <= hi);
        CHECK(mediant_holds(terms));
    }
    CHECK_THROWS_AS(mediant_holds({}), InputError);
}

TEST_CASE("proof bound") {
    const auto b = proof_bound_M(5, 5, 0, Q("1/16"), 1);
    REQUIRE(b.computable);
    for (const auto& [m, e] : b.eps_table) CHECK(e == Rational(4, static_cast<long long>(m - 2)));
    CHECK(b.eps_table.back().second < b.eps);
    if (b.eps_table.size() > 1) CHECK(b.eps_table.front().second >= b.eps);
    CHECK(b.M == b.m0 * 5);
    CHECK_FALSE(proof_bound_M(5, 5, Q("1/16"), Q("1/16"), 1).computable);
    CHECK_FALSE(proof_bound_M(0, 0, 0, Q("1/16"), 1).computable);
}

TEST_CASE("build tower and copy without bad fibers is the identity") {
    BuildConfig cfg;
    cfg.stages = 1;
    BuildContext ctx(cfg);
    const auto s = stage_one(ctx, "[.2]");
    const StageTower t = build_tower(ctx, s.J, s.ref, 1, Q("1/64"), 1, 1);
    REQUIRE(t.tower);
    CHECK(t.coverage >= ctx.mu_K - Q("1/64"));
    CHECK(t.R_measure <= Q("1/64"));
    Rational good = 0;
    for (const auto& c : t.columns)
        for (const auto& f : c.classes)
            if (f.good) good += f.measure * c.k_points;
    CHECK(good == t.coverage);
    const auto [alpha, log] = copy_names(ctx, t, s.J, s.beta, 1);
    CHECK(log.entries.empty());
    CHECK(log.changed_measure == 0);
    CHECK(distance(*ctx.muY, alpha, s.J) == 0);
    CHECK(alpha.labels() == s.J.labels());
}

TEST_CASE("build tower rejects short towers") {
    BuildConfig cfg;
    cfg.stages = 1;
    cfg.max_tower_n = 3;
    BuildContext ctx(cfg);
    const auto s = stage_one(ctx, "[.2]");
    CHECK_THROWS_AS(build_tower(ctx, s.J, s.ref, 1, Q("1/64"), 100000, 1), ResourceError);
}

TEST_CASE("forced copy over a bad fiber") {
    BuildContext ctx(BuildConfig::from_json(nlohmann::json::parse(kSplitSquare)));
    const auto s = stage_one(ctx, "[.3]");
    StageTower t = build_tower(ctx, s.J, s.ref, 1, 1, 1, 2);
    REQUIRE(t.tower);
    REQUIRE(!t.columns.empty());
    auto& col = t.columns.front();
    REQUIRE(col.classes.size() == 2);
    col.classes[1].good = false;
    col.chosen = 0;
    const auto [alpha, log] = copy_names(ctx, t, s.J, s.beta, 1);
    REQUIRE(log.entries.size() == 1);
    CHECK(log.entries[0].bad_classes == std::vector<std::size_t>{1});
    const Rational d = distance(*ctx.muY, s.J, alpha);
    // each changed point leaves one finite atom and enters another
    CHECK(d == 2 * log.changed_measure);
    CHECK(d > 0);
    CHECK(d <= col.base_measure * col.height);
    CHECK(alpha.size() == s.J.size());
    const auto fb_alpha = refinement_map(s.beta, alpha), fb_J = refinement_map(s.beta, s.J);
    REQUIRE(fb_alpha);
    REQUIRE(fb_J);
    CHECK(*fb_alpha == *fb_J);
    CHECK(fiber_names(ctx, *t.tower, col.column, alpha, 0).size() == 1);
    CHECK(alpha.finite_support() == s.J.finite_support());
}

TEST_CASE("copy that would lose a subscript is rejected") {
    BuildContext ctx(BuildConfig::from_json(nlohmann::json::parse(kSplitSquare)));
    const auto s = stage_one(ctx, "[.3]");
    StageTower t = build_tower(ctx, s.J, s.ref, 1, 1, 1, 1);
    REQUIRE(t.columns.front().classes.size() == 2);
    t.columns.front().classes[1].good = false;
    t.columns.front().chosen = 0;
    CHECK_THROWS_AS(copy_names(ctx, t, s.J, s.beta, 1), StructuralError);
}

TEST_CASE("derive lower") {
    const auto lang = default_language();
    const auto a = iterated_join(WindowPartition::letter_partition(lang), -1, 1);
    CHECK(derive_lower(a, SubscriptMap::identity(a.size())).labels() == a.labels());
    const auto letter = WindowPartition::letter_partition(lang);
    const auto j = join(letter, a);
    std::vector<Letter> first;
    for (Atom x = 1; x <= j.size(); ++x) first.push_back(static_cast<Letter>(j.coords_of(x)[0]));
    const auto lower = derive_lower(j, SubscriptMap(first, letter.size()));
    CHECK(same_up_to_relabeling(lower, letter));
    CHECK(j.coords_of(1) == Coords{1, 1});
}

TEST_CASE("one stage reduces to step 1") {
    BuildConfig cfg;
    cfg.stages = 1;
    BuildContext ctx(cfg);
    const auto st = run_stages(ctx);
    REQUIRE(st.stages.size() == 1);
    for (const auto& e : st.ledger) CHECK_MESSAGE(e.pass, (e.property + " " + e.detail));
    CHECK(st.pass);
    CHECK(st.stages[0].r == 1);
    CHECK(st.stages[0].alpha.size() == 1);
    CHECK(triangle_check(ctx, st).pass);
}

TEST_CASE("merge code keeps beta refinement") {
    auto cfg = BuildConfig::from_json(nlohmann::json::parse(kSplitSquare));
    cfg.stages = 2;
    cfg.final_uniformity = false;
    BuildContext ctx(cfg);
    CHECK(ctx.pi.str() == "1:1,2:2,3:2");
    const auto st = run_stages(ctx);
    bool saw_ii = false;
    for (const auto& e : st.ledger) {
        CHECK_MESSAGE(e.pass, (e.property + " " + e.detail));
        if (e.property == "(ii) beta refinement") saw_ii = true;
    }
    CHECK(saw_ii);
    const auto tri = triangle_check(ctx, st);
    CHECK_MESSAGE(tri.pass, tri.failure);
}

TEST_CASE("config json round trip") {
    const auto cfg = BuildConfig::from_json(nlohmann::json::parse(kSplitSquare));
    const auto back = BuildConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());
    CHECK(back.scan_depth == 7);
    CHECK_THROWS_AS(BuildConfig::from_json(nlohmann::json::parse(R"({"stages":0})")), InputError);
}

}  // TEST_SUITE
