#include "symerg/model.hpp"

#include "symerg/errors.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace symerg {

namespace {

using json = nlohmann::json;

std::string rat(const Rational& r) { return to_string(r); }

Rational pow_int(const Rational& base, unsigned e) {
    Rational out = 1;
    for (unsigned i = 0; i < e; ++i) out *= base;
    return out;
}

}  // namespace

// ---------------------------------------------------------------- config

BuildConfig BuildConfig::from_json(const json& j) {
    BuildConfig c;
    try {
        if (j.contains("substitution")) {
            const auto& s = j.at("substitution");
            if (!(s.is_string() && s.get<std::string>() == "default")) c.sub = Substitution::from_json(s);
        }
        if (j.contains("code") && !j.at("code").is_null()) c.pi = SubscriptMap::parse(j.at("code").get<std::string>());
        if (j.contains("stages")) c.stages = j.at("stages").get<int>();
        if (j.contains("E")) c.E = j.at("E").get<std::vector<std::string>>();
        if (j.contains("D")) c.D = j.at("D").get<std::vector<std::string>>();
        if (j.contains("scan_depth")) c.scan_depth = j.at("scan_depth").get<unsigned>();
        if (j.contains("max_tower_n")) c.max_tower_n = j.at("max_tower_n").get<int>();
        if (j.contains("alpha_T_range")) c.alpha_T_range = j.at("alpha_T_range").get<int>();
        if (j.contains("include_last")) c.include_last = j.at("include_last").get<bool>();
        if (j.contains("final_uniformity")) c.final_uniformity = j.at("final_uniformity").get<bool>();
    } catch (const json::exception& e) {
        throw InputError(std::string("build config: ") + e.what());
    }
    if (c.stages < 1) throw InputError("build config: stages must be >= 1");
    if (c.E.size() < static_cast<std::size_t>(c.stages))
        throw InputError("build config: need one set E per stage");
    if (c.D.empty()) throw InputError("build config: need at least one base set D");
    if (c.pi && c.pi->source_size() != c.sub.alphabet_size())
        throw InputError("build config: code source does not match the alphabet");
    return c;
}

json BuildConfig::to_json() const {
    return {{"substitution", sub.to_json()},
            {"code", pi ? json(pi->str()) : json(nullptr)},
            {"stages", stages},
            {"E", E},
            {"D", D},
            {"scan_depth", scan_depth},
            {"max_tower_n", max_tower_n},
            {"alpha_T_range", alpha_T_range},
            {"include_last", include_last},
            {"final_uniformity", final_uniformity}};
}

// ---------------------------------------------------------------- parameters

Rational dyadic_below(const Rational& x) {
    if (x <= 0) throw InputError("dyadic_below needs a positive bound");
    unsigned e = 0;
    while (pow2_inv(e) >= x) ++e;
    return pow2_inv(e);
}

StageParameters choose_parameters(int i, const Rational& min_ratio, const Rational& mu_K, std::size_t r, int n_prev) {
    if (i < 1) throw InputError("stage index starts at 1");
    if (min_ratio <= 0) throw StructuralError("minimum block ratio is zero");
    if (r < 1) throw InputError("partition size must be positive");
    StageParameters p;
    p.min_ratio = min_ratio;
    int n = std::max(1, n_prev + 1);
    while (pow2_inv(static_cast<unsigned>(n)) * 3 >= min_ratio) ++n;
    p.n = n;
    const Rational B = Rational(2 * i - 1) * 4 * Rational(Integer(1) << n) *
                       pow_int(Rational(static_cast<long long>(r)), static_cast<unsigned>(4 * i - 1));
    Rational bound = std::min<Rational>(Rational(1) / B, mu_K / B);
    bound = std::min<Rational>(bound, pow2_inv(static_cast<unsigned>(i + 2)));
    p.delta_bound = bound;
    p.delta = dyadic_below(bound);
    return p;
}

ProofBound proof_bound_M(std::size_t max_k, std::size_t min_k, const Rational& fiber_dev, const Rational& eps, int k) {
    ProofBound b;
    b.eps = eps;
    b.max_fiber_k = max_k;
    b.min_fiber_k = min_k;
    b.max_fiber_deviation = fiber_dev;
    if (min_k == 0 || max_k == 0) {
        b.note = "no good fibers with K points";
        return b;
    }
    const Rational gap = eps - fiber_dev;
    if (gap <= 0) {
        b.note = "fiber deviation reaches eps";
        return b;
    }
    const Rational num = Rational(4 * static_cast<long long>(max_k), static_cast<long long>(min_k)) +
                         Rational(2 * static_cast<long long>(k - 1), static_cast<long long>(min_k));
    const Rational X = num / gap;
    const Integer fl = numerator(X) / denominator(X);
    const Integer m0 = std::max<Integer>(Integer(3), fl + 3);
    const Integer M = m0 * static_cast<unsigned long long>(max_k);
    constexpr auto cap = std::numeric_limits<std::size_t>::max();
    b.m0 = m0 > cap ? cap : static_cast<std::size_t>(m0);
    b.M = M > cap ? cap : static_cast<std::size_t>(M);
    for (Integer m = std::max<Integer>(Integer(3), m0 - 1); m <= m0; ++m) {
        b.eps_table.emplace_back(m > cap ? cap : static_cast<std::size_t>(m), num / Rational(m - 2));
    }
    b.computable = true;
    return b;
}

bool mediant_holds(const std::vector<std::pair<Rational, Rational>>& terms) {
    if (terms.empty()) throw InputError("mediant of an empty family");
    Rational sa = 0, sb = 0;
    std::optional<Rational> lo, hi;
    for (const auto& [a, b] : terms) {
        if (b <= 0 || a < 0) throw InputError("mediant terms need a >= 0 and b > 0");
        const Rational q = a / b;
        if (!lo || q < *lo) lo = q;
        if (!hi || q > *hi) hi = q;
        sa += a;
        sb += b;
    }
    const Rational m = sa / sb;
    return *lo <= m && m <= *hi;
}

// ---------------------------------------------------------------- context

BuildContext::BuildContext(BuildConfig cfg) : config(std::move(cfg)), pi(SubscriptMap::identity(1 + 1)) {
    Y = std::make_shared<SubstitutionLanguage>(config.sub);
    pi = config.pi ? *config.pi : SubscriptMap::identity(config.sub.alphabet_size());
    muY = std::make_shared<SubstitutionMeasure>(Y);
    if (pi == SubscriptMap::identity(config.sub.alphabet_size())) {
        Z = Y;
        muZ = muY;
    } else {
        muZ = std::make_shared<PushforwardMeasure>(muY, pi);
        Z = muZ->language();
    }
    std::vector<Clopen> D;
    for (const auto& d : config.D) D.push_back(Clopen::parse(Z, d));
    const GammaResult g1 = gamma_sequence(Z, D, 1);
    KZ = g1.support;
    K = pull(*KZ);
    mu_K = clopen_measure(*muY, *K).value();
}

Clopen BuildContext::pull(const Clopen& z) const {
    if (Z == Y) return z;
    const std::vector<Word>& target = z.words();
    std::vector<Word> words;
    for (const Word& u : Y->factors(z.width()))
        if (std::binary_search(target.begin(), target.end(), pi.apply(u))) words.push_back(u);
    return Clopen(Y, z.lo(), z.hi(), std::move(words));
}

WindowPartition BuildContext::pull(const WindowPartition& z) const {
    if (Z == Y) return z;
    std::vector<Atom> labels;
    for (const Word& u : Y->factors(z.width())) labels.push_back(z.label(pi.apply(u)));
    return WindowPartition(Y, z.lo(), z.hi(), std::move(labels), z.size(), z.coords());
}

// ---------------------------------------------------------------- fibers

namespace {

struct ColumnWindow {
    int a, b;            // Y window relative to the fiber base
    Word pattern;        // 1^n w 1^n on Z, starting at -n
};

ColumnWindow column_window(const KRTower& t, std::size_t c, const WindowPartition& P, int context) {
    const Column& col = t.columns()[c];
    const int n = t.n();
    const int h = static_cast<int>(col.height);
    ColumnWindow cw;
    cw.a = std::min(-n, -context + P.lo());
    cw.b = std::max(h + n - 1, h - 1 + context + P.hi());
    cw.pattern = ones(static_cast<std::size_t>(n));
    cw.pattern.insert(cw.pattern.end(), col.word.begin(), col.word.end());
    cw.pattern.insert(cw.pattern.end(), static_cast<std::size_t>(n), kInfiniteLetter);
    return cw;
}

bool carries_pattern(const BuildContext& ctx, WordView x, std::size_t offset, const Word& pattern) {
    if (offset + pattern.size() > x.size()) return false;
    for (std::size_t q = 0; q < pattern.size(); ++q)
        if (ctx.pi(x[offset + q]) != pattern[q]) return false;
    return true;
}

}  // namespace

std::vector<std::pair<Word, Rational>> fiber_names(const BuildContext& ctx, const KRTower& tower, std::size_t column,
                                                   const WindowPartition& P, int context) {
    const Column& col = tower.columns().at(column);
    if (col.infinite) throw InputError("the infinite column has no fibers");
    const ColumnWindow cw = column_window(tower, column, P, context);
    const auto width = static_cast<std::size_t>(cw.b - cw.a + 1);
    const auto offset = static_cast<std::size_t>(-tower.n() - cw.a);
    const auto first = static_cast<std::size_t>(-context - cw.a);
    const std::size_t last = first + col.height + 2 * static_cast<std::size_t>(context);
    std::map<Word, Rational> classes;
    for (const Word& u : ctx.Y->factors(width)) {
        if (!carries_pattern(ctx, u, offset, cw.pattern)) continue;
        classes[P.name(u, first, last)] += ctx.muY->cylinder(u).value();
    }
    return {classes.begin(), classes.end()};
}

StageTower build_tower(const BuildContext& ctx, const WindowPartition& J, const BlockReference& ref, int k,
                       const Rational& delta, std::size_t min_hK, int n_min) {
    StageTower out;
    const auto ctxk = static_cast<std::size_t>(k - 1);
    for (int n = std::max(1, n_min); n <= ctx.config.max_tower_n; ++n) {
        KRTower t = kr_tower(ctx.Z, n, ctx.KZ);
        if (t.profile().h_K < min_hK) {
            out.trajectory.emplace_back(n, Rational(-1));
            continue;
        }
        std::vector<ColumnFibers> cols;
        Rational coverage = 0, R = 0;
        for (std::size_t c = 0; c < t.columns().size(); ++c) {
            const Column& col = t.columns()[c];
            if (col.infinite) continue;
            ColumnFibers cf;
            cf.column = c;
            cf.height = col.height;
            cf.k_points = col.k_hits;
            bool any_good = false;
            for (auto& [name, m] : fiber_names(ctx, t, c, J, k - 1)) {
                FiberClass fc;
                const BlockDistribution d =
                    block_empirical_in_context(name, ctxk, ctxk + col.height, ref, ctx.config.include_last);
                fc.deviation = max_deviation(d, ref).value;
                fc.good = fc.deviation < delta;
                fc.measure = m;
                cf.base_measure += m;
                if (fc.good) {
                    coverage += m * static_cast<long long>(col.k_hits);
                    if (!cf.chosen) cf.chosen = cf.classes.size();
                    any_good = true;
                }
                fc.name = std::move(name);
                cf.classes.push_back(std::move(fc));
            }
            if (!any_good) R += cf.base_measure * static_cast<long long>(col.height);
            cols.push_back(std::move(cf));
        }
        out.trajectory.emplace_back(n, coverage);
        if (coverage >= ctx.mu_K - delta && R <= delta) {
            out.n = n;
            out.tower.emplace(std::move(t));
            out.columns = std::move(cols);
            out.coverage = coverage;
            out.R_measure = R;
            return out;
        }
    }
    std::string traj;
    for (const auto& [n, c] : out.trajectory) traj += " n=" + std::to_string(n) + ":" + (c < 0 ? "h_K<N" : rat(c));
    throw ResourceError("no tower up to n=" + std::to_string(ctx.config.max_tower_n) +
                        " has good fibers covering mu(K) - delta; coverage" + traj);
}

std::pair<WindowPartition, CopyLog> copy_names(const BuildContext& ctx, const StageTower& st, const WindowPartition& J,
                                               const WindowPartition& beta, int k) {
    CopyLog log;
    const KRTower& t = *st.tower;
    const auto ctxk = static_cast<std::size_t>(k - 1);
    struct Plan {
        std::size_t column;
        ColumnWindow cw;
        std::map<Word, const Word*> bad_to_good;
    };
    std::vector<Plan> plans;
    const std::size_t beta_coord = J.coords().empty() ? 0 : J.coords().front().size() - 1;
    for (const ColumnFibers& cf : st.columns) {
        if (!cf.chosen) continue;
        const FiberClass& good = cf.classes[*cf.chosen];
        CopyLog::Entry e;
        e.column = cf.column;
        e.good_class = *cf.chosen;
        Plan plan{cf.column, column_window(t, cf.column, J, k - 1), {}};
        for (std::size_t q = 0; q < cf.classes.size(); ++q) {
            const FiberClass& fc = cf.classes[q];
            if (fc.good) continue;
            std::size_t changed = 0;
            for (std::size_t p = ctxk; p < ctxk + cf.height; ++p) {
                if (fc.name[p] == good.name[p]) continue;
                ++changed;
                if (!J.coords().empty() &&
                    J.coords_of(fc.name[p])[beta_coord] != J.coords_of(good.name[p])[beta_coord])
                    throw StructuralError("copying would change the beta-name of column " + std::to_string(cf.column));
            }
            e.bad_classes.push_back(q);
            e.changed += fc.measure * static_cast<long long>(changed);
            plan.bad_to_good.emplace(fc.name, &good.name);
        }
        if (e.bad_classes.empty()) continue;
        log.changed_measure += e.changed;
        log.entries.push_back(std::move(e));
        plans.push_back(std::move(plan));
    }
    (void)beta;
    if (plans.empty()) return {J, log};

    int lo = std::min(0, J.lo()), hi = std::max(0, J.hi());
    for (const Plan& p : plans) {
        const int h = static_cast<int>(t.columns()[p.column].height);
        lo = std::min(lo, p.cw.a - (h - 1));
        hi = std::max(hi, p.cw.b);
    }
    const auto width = static_cast<std::size_t>(hi - lo + 1);
    const auto origin = static_cast<std::size_t>(-lo);
    std::vector<Atom> labels;
    const std::vector<Word>& words = ctx.Y->factors(width);
    labels.reserve(words.size());
    for (const Word& x : words) {
        Atom label = J.label(WordView(x).subspan(static_cast<std::size_t>(static_cast<int>(origin) + J.lo()),
                                                  J.width()));
        for (const Plan& p : plans) {
            const std::size_t h = t.columns()[p.column].height;
            bool done = false;
            for (std::size_t j = 0; j < h && !done; ++j) {
                // Fiber base at relative position -j.
                const std::int64_t base = static_cast<std::int64_t>(origin) - static_cast<std::int64_t>(j);
                const std::int64_t pat = base - t.n();
                if (pat < 0 || !carries_pattern(ctx, x, static_cast<std::size_t>(pat), p.cw.pattern)) continue;
                done = true;
                const std::int64_t first = base - static_cast<std::int64_t>(ctxk);
                const Word name =
                    J.name(x, static_cast<std::size_t>(first), static_cast<std::size_t>(first) + h + 2 * ctxk);
                auto it = p.bad_to_good.find(name);
                if (it != p.bad_to_good.end()) label = (*it->second)[ctxk + j];
            }
            if (done) break;
        }
        labels.push_back(label);
    }
    std::vector<bool> seen(J.size() + 1, false);
    for (Atom a : labels) seen[a] = true;
    for (Atom a = 1; a <= J.size(); ++a)
        if (!seen[a])
            throw StructuralError("copying loses subscript " + std::to_string(a) + "; parameters must shrink");
    return {WindowPartition(ctx.Y, lo, hi, std::move(labels), J.size(), J.coords()), log};
}

WindowPartition derive_lower(const WindowPartition& alpha, const SubscriptMap& first_coordinate) {
    return alpha.coarsened(first_coordinate);
}

// ---------------------------------------------------------------- stages

namespace {

void record(StageState& s, int stage, std::string property, bool pass, std::string detail) {
    s.ledger.push_back({stage, std::move(property), pass, std::move(detail)});
    if (!pass) s.pass = false;
}

SubscriptMap first_coordinate_map(const WindowPartition& J, std::size_t target) {
    std::vector<Letter> image;
    for (const Coords& c : J.coords()) image.push_back(static_cast<Letter>(c.front()));
    return SubscriptMap(std::move(image), target);
}

}  // namespace

StageState run_stages(const BuildContext& ctx) {
    const BuildConfig& cfg = ctx.config;
    StageState state;
    std::vector<Clopen> D;
    for (const auto& d : cfg.D) D.push_back(Clopen::parse(ctx.Z, d));
    const WindowPartition z_letters = WindowPartition::letter_partition(ctx.Z);
    const WindowPartition z_letters_on_Y = ctx.pull(z_letters);

    std::size_t N_prev = 1;
    int n_prev = 0;
    for (int i = 1; i <= cfg.stages; ++i) {
        Stage st;
        st.i = i;
        st.k = i;
        const GammaResult g = gamma_sequence(ctx.Z, D, i);
        st.gamma = g.gamma;
        st.gamma_n = g.n;
        st.beta = ctx.pull(g.gamma);
        st.E = Clopen::parse(ctx.Y, cfg.E[static_cast<std::size_t>(i - 1)]);
        st.tau_error = clopen_measure(*ctx.muY, st.E->minus(*ctx.K)).value();
        std::vector<Clopen> tau_sets;
        for (Clopen c : {st.E->intersect(*ctx.K), ctx.K->minus(*st.E)})
            if (!c.is_empty()) tau_sets.push_back(std::move(c));
        st.tau = WindowPartition::from_clopens(ctx.Y, tau_sets);
        if (i == 1) {
            st.J = join(*st.tau, *st.beta);
        } else {
            const WindowPartition& prev = state.stages.back().alpha.back();
            st.J = join({prev, *st.tau, *st.beta});
            st.first_coordinate = first_coordinate_map(*st.J, prev.size());
        }
        st.r = i == 1 ? 1 : st.J->size();
        const BlockReference ref = reference_distribution(*ctx.muY, *st.J, st.k);
        const Rational min_ratio = *std::min_element(ref.ref.begin(), ref.ref.end());
        st.params = choose_parameters(i, min_ratio, ctx.mu_K, st.r, n_prev);
        st.tower = build_tower(ctx, *st.J, ref, st.k, st.params.delta, N_prev, st.gamma_n);
        auto [alpha_ii, log] = copy_names(ctx, st.tower, *st.J, *st.beta, st.k);
        st.copy = std::move(log);
        st.copy_distance = distance(*ctx.muY, *st.J, alpha_ii);

        st.alpha.assign(static_cast<std::size_t>(i), alpha_ii);
        for (int j = i - 1; j >= 1; --j) {
            const SubscriptMap& f = *(j == i - 1 ? st.first_coordinate
                                                 : state.stages[static_cast<std::size_t>(j)].first_coordinate);
            st.alpha[static_cast<std::size_t>(j - 1)] = derive_lower(st.alpha[static_cast<std::size_t>(j)], f);
        }

        // Uniformity threshold at eps = 1/2^n.
        const BlockReference aref = st.copy.entries.empty() ? ref : reference_distribution(*ctx.muY, alpha_ii, st.k);
        const Word host = host_name(*ctx.Y, alpha_ii, cfg.scan_depth);
        const Rational eps_n = pow2_inv(static_cast<unsigned>(st.params.n));
        const EmpiricalN eN = empirical_N(host, aref, eps_n, cfg.include_last, cfg.jobs);
        st.N = eN.N;
        st.N_found = eN.found;

        // Proof bound at the stage's strict eps.
        std::size_t maxk = 0, mink = std::numeric_limits<std::size_t>::max();
        Rational dev = 0;
        for (const ColumnFibers& cf : st.tower.columns) {
            if (!cf.chosen) continue;
            maxk = std::max(maxk, cf.k_points);
            mink = std::min(mink, cf.k_points);
            dev = std::max<Rational>(dev, cf.classes[*cf.chosen].deviation);
            for (const FiberClass& fc : cf.classes)
                if (fc.good) dev = std::max<Rational>(dev, fc.deviation);
        }
        if (maxk == 0) mink = 0;
        const Rational eps_strict =
            eps_n / pow_int(Rational(static_cast<long long>(st.r)), static_cast<unsigned>(2 * i));
        st.bound = proof_bound_M(maxk, mink, dev, eps_strict, st.k);
        if (st.bound.computable && st.bound.M <= eN.total_k_points) {
            st.bound_scan = scan_sections(host, aref, eps_strict, cfg.include_last, cfg.jobs);
        }

        for (int j = 1; j <= i; ++j) {
            const WindowPartition& beta_j =
                j == i ? *st.beta : *state.stages[static_cast<std::size_t>(j - 1)].beta;
            auto f = refinement_map(beta_j, st.alpha[static_cast<std::size_t>(j - 1)]);
            if (!f) throw StructuralError("alpha_{" + std::to_string(i) + "," + std::to_string(j) +
                                          "} does not refine beta_" + std::to_string(j));
            st.f_beta.push_back(*f);
        }

        // ---- ledger
        const std::string tag = "stage " + std::to_string(i);
        record(state, i, "parameters", true,
               "n=" + std::to_string(st.params.n) + " delta=" + rat(st.params.delta) + " r=" + std::to_string(st.r) +
                   " min_ratio=" + rat(st.params.min_ratio));
        record(state, i, "tau exact", st.tau_error == 0, "mu(E \\ K)=" + rat(st.tau_error));
        record(state, i, "coverage", st.tower.coverage >= ctx.mu_K - st.params.delta,
               "n'=" + std::to_string(st.tower.n) + " coverage=" + rat(st.tower.coverage) +
                   " mu(K)=" + rat(ctx.mu_K) + " mu(R)=" + rat(st.tower.R_measure));
        record(state, i, "copy bound", st.copy.changed_measure <= st.params.delta && st.copy_distance <= st.params.delta,
               "changed=" + rat(st.copy.changed_measure) + " d(alpha,J)=" + rat(st.copy_distance) +
                   " copies=" + std::to_string(st.copy.entries.size()));
        if (i >= 2)
            record(state, i, "subscripts preserved", alpha_ii.size() == st.r,
                   std::to_string(alpha_ii.size()) + " atoms");

        // (i) refinement chain
        {
            bool ok = true;
            for (int j = 1; j < i; ++j)
                ok = ok && refines(st.alpha[static_cast<std::size_t>(j)], st.alpha[static_cast<std::size_t>(j - 1)]);
            record(state, i, "(i) chain", ok, "alpha_{i,1} <= ... <= alpha_{i,i}");
        }
        // (ii) beta refinement with stable maps
        {
            bool ok = true;
            std::string detail;
            for (int j = 1; j <= i; ++j) {
                const SubscriptMap& f = st.f_beta[static_cast<std::size_t>(j - 1)];
                if (j < i) ok = ok && f == state.stages[static_cast<std::size_t>(j - 1)].f_beta[static_cast<std::size_t>(j - 1)];
                detail += (j > 1 ? "; " : "") + std::string("f_") + std::to_string(j) + "=" + f.str();
            }
            record(state, i, "(ii) beta refinement", ok, detail);
        }
        // (iii) E_j approximations
        {
            bool ok = true;
            std::string detail;
            for (int j = 1; j <= i; ++j) {
                const Rational eps = pow2_inv(static_cast<unsigned>(j)) - pow2_inv(static_cast<unsigned>(i + 1));
                const Clopen Ej = j == i ? *st.E : *state.stages[static_cast<std::size_t>(j - 1)].E;
                const AlphaTApprox a =
                    alpha_T_approx(*ctx.muY, Ej, st.alpha[static_cast<std::size_t>(j - 1)], eps, cfg.alpha_T_range);
                ok = ok && a.within;
                detail += (j > 1 ? "; " : "") + std::string("j=") + std::to_string(j) + " err=" + rat(a.error) +
                          " eps=" + rat(eps);
            }
            record(state, i, "(iii) E approximation", ok, detail);
        }
        // (iv) Cauchy steps
        if (i >= 2) {
            bool ok = true;
            std::string detail;
            const Stage& prev = state.stages.back();
            const Rational lim = pow2_inv(static_cast<unsigned>(st.params.n));
            for (int j = 1; j < i; ++j) {
                const Rational d = distance(*ctx.muY, prev.alpha[static_cast<std::size_t>(j - 1)],
                                            st.alpha[static_cast<std::size_t>(j - 1)]);
                ok = ok && d < lim;
                detail += (j > 1 ? "; " : "") + std::string("j=") + std::to_string(j) + " d=" + rat(d);
            }
            record(state, i, "(iv) Cauchy", ok, detail + " bound=" + rat(lim));
        }
        // (v) measurability and height
        {
            const bool meas = refines(*st.beta, z_letters_on_Y);
            const std::size_t hK = st.tower.tower->profile().h_K;
            record(state, i, "(v) tower", meas && hK >= N_prev,
                   std::string("levels beta-measurable=") + (meas ? "yes" : "no") + " h_K=" + std::to_string(hK) +
                       " N_prev=" + std::to_string(N_prev));
        }
        // (vi) inherited fiber names
        {
            bool ok = true;
            std::string detail;
            for (int j = 1; j <= i; ++j) {
                const Stage& sj = j == i ? st : state.stages[static_cast<std::size_t>(j - 1)];
                const KRTower& tj = *sj.tower.tower;
                std::size_t checked = 0;
                for (std::size_t c = 0; c < tj.columns().size(); ++c) {
                    if (tj.columns()[c].infinite) continue;
                    std::set<Word> own;
                    for (auto& [nm, m] : fiber_names(ctx, tj, c, sj.alpha.back(), 0)) own.insert(nm);
                    for (auto& [nm, m] : fiber_names(ctx, tj, c, st.alpha[static_cast<std::size_t>(j - 1)], 0)) {
                        ++checked;
                        ok = ok && own.count(nm) > 0;
                    }
                }
                detail += (j > 1 ? "; " : "") + std::string("t_") + std::to_string(j) + ": " +
                          std::to_string(checked) + " fiber names";
            }
            record(state, i, "(vi) fiber names", ok, detail);
        }
        // (vii) uniformity by the proof bound, with a scan cross-check
        {
            const bool covered = st.tower.R_measure == 0;
            bool ok = st.bound.computable && covered;
            std::string detail = "k=" + std::to_string(st.k) + " eps=" + rat(eps_strict);
            if (st.bound.computable) {
                detail += " m0=" + std::to_string(st.bound.m0) + " M=" + std::to_string(st.bound.M);
                if (st.bound_scan) {
                    ok = ok && st.bound_scan->max_violating_k_points < st.bound.M;
                    detail += " scan max violating=" + std::to_string(st.bound_scan->max_violating_k_points);
                } else {
                    detail += " (M above the " + std::to_string(eN.total_k_points) + " scanned K points)";
                }
            } else {
                detail += " " + st.bound.note;
            }
            detail += " empirical N(eps=1/2^n)=" + std::to_string(st.N) + (st.N_found ? "" : " (not found)");
            record(state, i, "(vii) uniformity", ok, detail);
        }
        record(state, i, "empirical N", st.N_found,
               "N=" + std::to_string(st.N) + " of " + std::to_string(eN.total_k_points) + " K points");
        if (st.bound.computable && st.params.n > 0 && st.r == 1) {
            record(state, i, "empirical N <= proof bound", st.N <= st.bound.M,
                   std::to_string(st.N) + " <= " + std::to_string(st.bound.M));
        }
        (void)tag;

        N_prev = st.N;
        n_prev = st.params.n;
        state.stages.push_back(std::move(st));
    }

    if (cfg.final_uniformity) {
        const Stage& last = state.stages.back();
        for (int j = 1; j <= cfg.stages; ++j) {
            const WindowPartition& a = last.alpha[static_cast<std::size_t>(j - 1)];
            const Word host = host_name(*ctx.Y, a, cfg.scan_depth);
            for (int k = 1; k <= cfg.stages; ++k) {
                const Rational eps = pow2_inv(static_cast<unsigned>(state.stages[static_cast<std::size_t>(k - 1)].params.n));
                const BlockReference ref = reference_distribution(*ctx.muY, a, k);
                const EmpiricalN e = empirical_N(host, ref, eps, cfg.include_last, cfg.jobs);
                state.final_uniformity.push_back({{"alpha", j}, {"k", k}, {"eps", rat(eps)}, {"N", e.N},
                                                  {"found", e.found}, {"K_points", e.total_k_points}});
                record(state, cfg.stages, "final uniformity alpha_" + std::to_string(j) + " k=" + std::to_string(k),
                       e.found, "N=" + std::to_string(e.N) + " eps=" + rat(eps));
            }
        }
    }
    return state;
}

// ---------------------------------------------------------------- triangle

TriangleResult triangle_check(const BuildContext& ctx, const StageState& state, int radius) {
    TriangleResult out;
    if (state.stages.empty()) throw InputError("triangle check needs at least one stage");
    std::vector<std::pair<std::string, Point>> points;
    points.emplace_back("fixed point", Point(FixedPoint{}));
    // Three nested depths, starting where sigma^n(seed) first reaches 16 letters.
    unsigned n0 = 0;
    while (ctx.config.sub.iterate_length(ctx.config.sub.seed(), n0) < 16) ++n0;
    for (unsigned n : {n0, n0 + 1, n0 + 2}) {
        Point g(Generated{ctx.config.sub, n});
        points.emplace_back("generated n=" + std::to_string(n), g);
        points.emplace_back("generated n=" + std::to_string(n) + " shifted 5", g.shifted(5));
        points.emplace_back("generated n=" + std::to_string(n) + " shifted -7", g.shifted(-7));
    }
    // Compact-support points 1^inf . a 1^inf for every letter a != 1.
    for (Letter a = 2; a <= ctx.config.sub.alphabet_size(); ++a) {
        Point p(CompactSupport{{}, Word{a}});
        const std::string label = "compact support 1^inf." + std::to_string(a) + "1^inf";
        const int reach = std::min<int>(64, static_cast<int>(ctx.Y->horizon() / 2 - 1));
        if (!ctx.Y->contains(p.window(-reach, reach))) {
            out.skipped.push_back(label + ": not in the language");
            continue;
        }
        points.emplace_back(label, p);
    }

    const Stage& last = state.stages.back();
    for (const auto& [label, y] : points) {
        const Point z = apply_code(ctx.pi, y);
        for (std::size_t j = 0; j < last.alpha.size(); ++j) {
            const WindowPartition& a = last.alpha[j];
            const WindowPartition& b = *state.stages[j].beta;
            const WindowPartition& g = *state.stages[j].gamma;
            const SubscriptMap& f = last.f_beta[j];
            for (int q = -radius; q <= radius; ++q) {
                const Word wa = y.window(q + a.lo(), q + a.hi());
                const Word wb = y.window(q + b.lo(), q + b.hi());
                const Word wg = z.window(q + g.lo(), q + g.hi());
                const Atom la = a.label(wa), lb = b.label(wb), lg = g.label(wg);
                if (f(static_cast<Letter>(la)) != lb || lb != lg) {
                    out.pass = false;
                    out.failure = label + ", alpha_" + std::to_string(j + 1) + ", coordinate " + std::to_string(q) +
                                  ": f(" + std::to_string(la) + ")=" + std::to_string(f(static_cast<Letter>(la))) +
                                  " beta=" + std::to_string(lb) + " gamma=" + std::to_string(lg);
                    return out;
                }
            }
        }
        out.checked.push_back(label);
    }
    return out;
}

}  // namespace symerg
