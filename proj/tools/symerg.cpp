#include "symerg/errors.hpp"
#include "symerg/model.hpp"
#include "symerg/report.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <string>

using namespace symerg;
using json = nlohmann::ordered_json;

namespace {
json ordered(const nlohmann::json& j) { return json::parse(j.dump()); }
nlohmann::json plain(const json& j) { return nlohmann::json::parse(j.dump()); }
}  // namespace

namespace {

struct Common {
    std::string sub_file;
    std::string format = "json";
    unsigned jobs = 1;
    std::string report;
    std::size_t horizon = kDefaultHorizon;
};

struct Output {
    json stdout_json;        // printed in json mode
    std::string tsv;         // printed in tsv mode
    json report;             // written with --report
    json config;             // hashed into the report header
    bool pass = true;
};

Substitution load_sub(const Common& c) {
    return c.sub_file.empty() ? Substitution::default_substitution() : Substitution::load(c.sub_file);
}

std::shared_ptr<const SubstitutionLanguage> language(const Common& c) {
    return std::make_shared<SubstitutionLanguage>(load_sub(c), c.horizon);
}

json base_config(const Common& c, const std::string& command) {
    return {{"command", command}, {"substitution", ordered(load_sub(c).to_json())}, {"horizon", c.horizon}};
}

json witness_json(const std::optional<SectionWitness>& w) {
    if (!w) return nullptr;
    return {{"start", w->start}, {"end", w->end}, {"k_points", w->k_points}, {"block", to_string(w->block, 99)},
            {"deviation", to_string(w->deviation)}};
}

Clopen parse_set(const LanguagePtr& lang, const std::string& text) {
    return Clopen::parse(lang, text);
}

int emit(const Common& c, const Output& out) {
    if (c.format == "tsv")
        std::cout << out.tsv;
    else
        std::cout << out.stdout_json.dump() << "\n";
    if (!c.report.empty()) {
        std::ofstream f(c.report);
        if (!f) throw InputError("cannot write report '" + c.report + "'");
        f << with_header(plain(out.config), plain(out.report.is_null() ? out.stdout_json : out.report)).dump(2) << "\n";
    }
    return out.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Almost minimal substitution subshifts: towers, measures and model building"};
    app.require_subcommand(1);
    Common c;
    auto add_common = [&](CLI::App* s) {
        s->add_option("--sub", c.sub_file, "substitution JSON file (default: 1->11, 2->212, seed 2)");
        s->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "tsv"}));
        s->add_option("--jobs", c.jobs, "data-parallel width")->check(CLI::Range(1u, 256u));
        s->add_option("--report", c.report, "write a full JSON report here");
        s->add_option("--horizon", c.horizon, "longest factor length");
    };

    int n = 1;
    std::size_t len = 1;
    std::string cyl, base = "[.2]", code, eps_text = "1/16", config_file, partition_file;
    int k = 1;
    std::optional<std::size_t> H;
    std::optional<int> stages;
    unsigned depth = 14;

    auto* s_show = app.add_subcommand("subst-show", "print the substitution and its iterates");
    add_common(s_show);
    s_show->add_option("--n", n, "largest iterate")->check(CLI::Range(0, 64));

    auto* s_lang = app.add_subcommand("lang-enum", "list the factors of one length");
    add_common(s_lang);
    s_lang->add_option("--len", len, "factor length")->required();

    auto* s_rw = app.add_subcommand("return-words", "return words R_n");
    add_common(s_rw);
    s_rw->add_option("--n", n, "n")->required()->check(CLI::Range(1, 4096));

    auto* s_kr = app.add_subcommand("kr-tower", "K-R partition P_n");
    add_common(s_kr);
    s_kr->add_option("--n", n, "n")->required()->check(CLI::Range(1, 4096));

    auto* s_mu = app.add_subcommand("measure", "measure of a cylinder or clopen set");
    add_common(s_mu);
    s_mu->add_option("--cyl", cyl, "word w for [.w], or a clopen set \"[u.v]|...\"")->required();
    s_mu->add_option("--code", code, "push forward along a letter code such as 1:1,2:2,3:2");

    auto* s_ue = app.add_subcommand("certify-ue", "Birkhoff certificate for A relative to K");
    add_common(s_ue);
    s_ue->add_option("--cyl", cyl, "the set A")->required();
    s_ue->add_option("--base", base, "the set K");
    s_ue->add_option("--eps", eps_text, "tolerance p/q");
    s_ue->add_option("--n", depth, "scan sigma^n(seed)");

    auto* s_un = app.add_subcommand("uniformity", "uniformity certificate of a partition");
    add_common(s_un);
    s_un->add_option("--k", k, "block radius k (blocks of length 2k-1)")->check(CLI::Range(1, 64));
    s_un->add_option("--eps", eps_text, "tolerance p/q");
    s_un->add_option("--H", H, "threshold on K points; the empirical N when omitted");
    s_un->add_option("--n", depth, "scan sigma^n(seed)");
    s_un->add_option("--partition", partition_file, "partition JSON (default: letter partition)");

    auto* s_bm = app.add_subcommand("build-model", "run the inductive construction");
    add_common(s_bm);
    s_bm->add_option("--config", config_file, "build configuration JSON");
    s_bm->add_option("--stages", stages, "stage count")->check(CLI::Range(1, 16));

    auto* s_pd = app.add_subcommand("product-demo", "product versus diagonal measures on rectangles");
    add_common(s_pd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        Output out;
        if (s_show->parsed()) {
            const Substitution sub = load_sub(c);
            out.config = base_config(c, "subst-show");
            out.config["n"] = n;
            json its = json::array();
            out.tsv = "n\tlength\tword\n";
            for (int m = 0; m <= n; ++m) {
                const std::size_t L = sub.iterate_length(sub.seed(), static_cast<unsigned>(m));
                json row = {{"n", m}, {"length", L}};
                std::string word;
                if (L <= 4096) {
                    word = to_string(sub.iterate(sub.seed(), static_cast<unsigned>(m)), sub.alphabet_size());
                    row["word"] = word;
                }
                out.tsv += std::to_string(m) + "\t" + std::to_string(L) + "\t" + word + "\n";
                its.push_back(row);
            }
            out.stdout_json = {{"substitution", ordered(sub.to_json())}, {"iterates", its}};
        } else if (s_lang->parsed()) {
            auto Y = language(c);
            out.config = base_config(c, "lang-enum");
            out.config["len"] = len;
            const auto& fs = Y->factors(len);
            json words = json::array();
            out.tsv = "factor\n";
            for (const Word& w : fs) {
                const std::string t = to_string(w, Y->alphabet_size());
                words.push_back(t);
                out.tsv += t + "\n";
            }
            out.stdout_json = {{"len", len}, {"count", fs.size()}, {"factors", words}};
            out.report = out.stdout_json;
            out.report["stabilization_depth"] = Y->stabilization_depth(len);
        } else if (s_rw->parsed()) {
            auto Y = language(c);
            out.config = base_config(c, "return-words");
            out.config["n"] = n;
            const ReturnWordSet rn = return_words(*Y, n);
            json words = json::array();
            out.tsv = "word\tlength\tweight\n";
            for (const Word& w : rn.words) {
                const std::string t = to_string(w, Y->alphabet_size());
                words.push_back(t);
                out.tsv += t + "\t" + std::to_string(w.size()) + "\t" + std::to_string(non_one_weight(w)) + "\n";
            }
            out.stdout_json = {{"n", n}, {"words", words}};
            out.report = out.stdout_json;
            out.report["certified_length"] = rn.certified_length;
            out.report["min_nontrivial_weight"] = min_nontrivial_weight(rn);
        } else if (s_kr->parsed()) {
            auto Y = language(c);
            out.config = base_config(c, "kr-tower");
            out.config["n"] = n;
            const KRTower t = kr_tower(Y, n, std::nullopt);
            json cols = json::array();
            out.tsv = "word\theight\tinfinite\tk_hits\n";
            for (const Column& col : t.columns()) {
                const std::string w = to_string(col.word, Y->alphabet_size());
                json cj = {{"word", w}, {"height", col.height}};
                if (col.infinite)
                    cj["infinite"] = true;
                else
                    cj["k_hits"] = col.k_hits;
                cols.push_back(cj);
                out.tsv += w + "\t" + std::to_string(col.height) + "\t" + (col.infinite ? "1" : "0") + "\t" +
                           std::to_string(col.k_hits) + "\n";
            }
            out.stdout_json = {{"n", n}, {"columns", cols}};
            const PartitionCheck pc = tower_partition_check(t);
            out.report = out.stdout_json;
            out.report["profile"] = {{"h", t.profile().h}, {"h_K", t.profile().h_K}, {"H_K", t.profile().H_K}};
            out.report["radius"] = t.radius();
            out.report["partition_check"] = {{"pass", pc.pass}, {"words_checked", pc.words_checked},
                                             {"depth", pc.depth}, {"failure", pc.failure}};
            out.pass = pc.pass;
        } else if (s_mu->parsed()) {
            auto Y = language(c);
            out.config = base_config(c, "measure");
            out.config["cyl"] = cyl;
            out.config["code"] = code;
            MeasurePtr mu = std::make_shared<SubstitutionMeasure>(Y);
            if (!code.empty()) mu = std::make_shared<PushforwardMeasure>(mu, SubscriptMap::parse(code));
            const Measure m = clopen_measure(*mu, parse_set(mu->language(), cyl));
            out.stdout_json = m.str();
            out.tsv = m.str() + "\n";
            out.report = {{"cyl", cyl}, {"measure", m.str()}};
        } else if (s_ue->parsed()) {
            auto Y = language(c);
            out.config = base_config(c, "certify-ue");
            out.config.update({{"cyl", cyl}, {"base", base}, {"eps", eps_text}, {"n", depth}});
            SubstitutionMeasure mu(Y);
            const BirkhoffReport r = birkhoff_certificate(*Y, mu, parse_set(Y, base), parse_set(Y, cyl),
                                                          parse_rational(eps_text), depth, c.jobs);
            out.stdout_json = {{"K", r.K.str()},
                               {"A", r.A.str()},
                               {"depth", r.depth},
                               {"scanned_letters", r.scanned_letters},
                               {"empirical_c", to_string(r.empirical_c)},
                               {"measure_c", to_string(r.measure_c)},
                               {"c_matches", r.c_matches},
                               {"eps", to_string(r.eps)},
                               {"m", r.m},
                               {"max_k_count", r.max_k_count},
                               {"worst_deviation", to_string(r.worst_deviation)},
                               {"worst_k_count", r.worst_k_count},
                               {"pass", r.pass}};
            out.tsv = "field\tvalue\n";
            for (auto& [key, v] : out.stdout_json.items())
                out.tsv += key + "\t" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
            out.pass = r.pass;
        } else if (s_un->parsed()) {
            auto Y = language(c);
            out.config = base_config(c, "uniformity");
            out.config.update({{"k", k}, {"eps", eps_text}, {"n", depth}, {"partition", partition_file}});
            if (H) out.config["H"] = *H;
            SubstitutionMeasure mu(Y);
            WindowPartition alpha = WindowPartition::letter_partition(Y);
            if (!partition_file.empty()) {
                std::ifstream f(partition_file);
                if (!f) throw InputError("cannot open partition file '" + partition_file + "'");
                json pj;
                try {
                    f >> pj;
                } catch (const json::exception& e) {
                    throw InputError(std::string("partition file: ") + e.what());
                }
                alpha = WindowPartition::from_json(Y, plain(pj));
            }
            const Rational eps = parse_rational(eps_text);
            const BlockReference ref = reference_distribution(mu, alpha, k);
            const Word name = host_name(*Y, alpha, depth);
            const EmpiricalN en = empirical_N(name, ref, eps, false, c.jobs);
            json j = {{"k", k}, {"eps", to_string(eps)}, {"depth", depth}, {"name_length", name.size()},
                      {"total_k_points", en.total_k_points}, {"empirical_N", en.N}, {"N_found", en.found},
                      {"worst", witness_json(en.worst)}};
            if (H) {
                const bool pass = *H >= en.N;
                j["H"] = *H;
                j["pass"] = pass;
                out.pass = pass;
            } else {
                j["pass"] = en.found;
                out.pass = en.found;
            }
            out.stdout_json = j;
            out.tsv = "field\tvalue\n";
            for (auto& [key, v] : j.items())
                out.tsv += key + "\t" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
        } else if (s_bm->parsed()) {
            json cj = json::object();
            if (!config_file.empty()) {
                std::ifstream f(config_file);
                if (!f) throw InputError("cannot open config '" + config_file + "'");
                try {
                    f >> cj;
                } catch (const json::exception& e) {
                    throw InputError(std::string("config: ") + e.what());
                }
            }
            if (!c.sub_file.empty() && !cj.contains("substitution")) cj["substitution"] = ordered(load_sub(c).to_json());
            if (stages) cj["stages"] = *stages;
            BuildConfig cfg = BuildConfig::from_json(plain(cj));
            cfg.jobs = c.jobs;
            BuildContext ctx(cfg);
            const StageState st = run_stages(ctx);
            const TriangleResult tr = triangle_check(ctx, st);
            json tri = {{"pass", tr.pass}, {"checked", tr.checked}, {"skipped", tr.skipped}, {"failure", tr.failure}};
            out.config = ordered(cfg.to_json());
            out.pass = st.pass && tr.pass;
            json ledger = json::array();
            for (const LedgerEntry& e : st.ledger)
                ledger.push_back({{"stage", e.stage}, {"property", e.property}, {"pass", e.pass}, {"detail", e.detail}});
            out.stdout_json = {{"pass", out.pass}, {"ledger", ledger}, {"triangle", tri}};
            out.tsv = ledger_tsv(st) + "0\ttriangle\t" + (tr.pass ? "PASS" : "FAIL") + "\t" +
                      std::to_string(tr.checked.size()) + " points" + (tr.failure.empty() ? "" : "; " + tr.failure) +
                      "\n";
            out.report = ordered(stage_report(ctx, st));
            out.report["triangle"] = tri;
            out.report["pass"] = out.pass;
        } else if (s_pd->parsed()) {
            auto Y = language(c);
            out.config = base_config(c, "product-demo");
            SubstitutionMeasure mu(Y);
            const std::vector<std::pair<std::string, std::string>> rects = {
                {"[.212]", "[.212]"}, {"[.212]", "[.211]"}, {"[.2]", "[.2]"}};
            json rows = json::array();
            std::vector<ProductDiagonal> vals;
            bool invariant = true;
            out.tsv = "A\tB\tproduct\tdiagonal\n";
            for (const auto& [a, b] : rects) {
                const Clopen A = parse_set(Y, a), B = parse_set(Y, b);
                const ProductDiagonal pd = product_vs_diagonal(mu, A, B);
                for (int s : {-1, 1}) {
                    const ProductDiagonal sh = product_vs_diagonal_shifted(mu, A, B, s);
                    invariant = invariant && sh.product == pd.product && sh.diagonal == pd.diagonal;
                }
                vals.push_back(pd);
                rows.push_back({{"A", a}, {"B", b}, {"product", to_string(pd.product)}, {"diagonal", to_string(pd.diagonal)}});
                out.tsv += a + "\t" + b + "\t" + to_string(pd.product) + "\t" + to_string(pd.diagonal) + "\n";
            }
            const bool non_prop = vals[0].product * vals[1].diagonal != vals[1].product * vals[0].diagonal;
            out.stdout_json = {{"rectangles", rows}, {"shift_invariant", invariant}, {"non_proportional", non_prop}};
            out.pass = invariant && non_prop;
        }
        return emit(c, out);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
