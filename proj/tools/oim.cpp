// Batch verification front end. Every subcommand emits one JSON report on
// stdout (schema 1) and a short human summary on stderr. Exit codes:
// 0 = all checks passed, 1 = a verification failed, 2 = usage/input error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "oim/geometry.hpp"
#include "oim/group.hpp"
#include "oim/json_io.hpp"
#include "oim/relations.hpp"
#include "oim/rng.hpp"

using nlohmann::json;
using namespace oim;

namespace {

// "0" = Z factor, otherwise a torsion order; e.g. "0,2" = Z + Z/2.
GroupSpec parse_group_spec(const std::string& text) {
    GroupSpec g;
    std::vector<mpz_class> cyclic;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        if (tok.empty()) throw CLI::ValidationError("--group", "empty component in group spec");
        mpz_class v;
        if (v.set_str(tok, 10) != 0 || v < 0)
            throw CLI::ValidationError("--group", "bad group spec component: " + tok);
        if (v == 0)
            ++g.free_rank;
        else if (v == 1)
            ; // trivial factor
        else
            cyclic.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    g.torsion = invariant_factors_from_cyclic(std::move(cyclic));
    return g;
}

struct SampleSpec {
    bool full = true;
    std::size_t count = 0;
};

SampleSpec parse_contexts(const std::string& text) {
    if (text == "full") return {};
    if (text.rfind("sample:", 0) == 0) {
        SampleSpec s;
        s.full = false;
        s.count = std::stoul(text.substr(7));
        if (s.count == 0) throw CLI::ValidationError("--contexts", "sample size must be >= 1");
        return s;
    }
    throw CLI::ValidationError("--contexts", "expected full or sample:N");
}

json run_universal_group(int window, const std::string& export_path, bool& pass) {
    DegreeWindow w(window);
    UniversalGroupResult ug = universal_group(w);
    json res;
    res["window"] = window;
    res["symbol_count"] = ug.symbols.size();
    res["group"] = group_to_json(ug.group);
    json gens = json::object();
    for (const Symbol& s : ug.named_generators)
        gens[symbol_to_string(s)] = element_to_json(ug.symbol_image.at(s));
    res["generators"] = std::move(gens);
    // internal consistency: every raw relation maps to the identity
    bool relations_ok = true;
    for (const RelationInstance& inst : raw_relation_instances(w)) {
        GroupElement acc = ug.group.zero();
        for (const auto& [s, c] : inst.sum.terms)
            acc = ug.group.add(acc, ug.group.smul(c, ug.symbol_image.at(s)));
        if (!ug.group.is_zero(acc)) relations_ok = false;
    }
    res["relations_map_to_identity"] = relations_ok;
    if (!export_path.empty()) {
        std::vector<std::string> labels;
        for (const Symbol& s : ug.symbols) labels.push_back(symbol_to_string(s));
        std::ofstream out(export_path);
        out << matrix_to_json(relation_matrix(raw_relation_instances(w), ug.symbols), labels).dump(2)
            << "\n";
    }
    pass = relations_ok;
    return res;
}

json run_spans_equal(int window, bool drop_qq, bool& pass) {
    DegreeWindow w(window);
    bool equal = spans_equivalent(w, !drop_qq);
    json res;
    res["window"] = window;
    res["qq_family_included"] = !drop_qq;
    res["equal"] = equal;
    pass = equal;
    return res;
}

json run_crosscheck(int window, bool& pass) {
    DegreeWindow w(window);
    CrosscheckReport rep = crosscheck_gU(w);
    json res;
    res["window"] = window;
    res["symbols_checked"] = rep.symbols_checked;
    res["instances_checked"] = rep.instances_checked;
    res["violations"] = rep.violations;
    pass = rep.ok();
    return res;
}

json run_delta1_tables(int window, const GroupSpec& g, bool& pass) {
    DegreeWindow w(window);
    std::vector<InvariantTable> tables = delta1_tables(g, w);
    GroupSpec hom = hom_group(universal_group(w).group, g);
    std::set<std::map<Configuration, GroupElement>> distinct;
    std::size_t member_failures = 0;
    std::vector<Configuration> ctx = full_contexts(1, w);
    for (const InvariantTable& t : tables) {
        distinct.insert(t.values);
        if (!check_membership_table(t, w, ctx).ok()) ++member_failures;
    }
    json res;
    res["window"] = window;
    res["group"] = group_to_json(g);
    res["hom_group"] = group_to_json(hom);
    res["table_count"] = tables.size();
    res["expected_count"] = hom.order().get_str();
    res["distinct"] = distinct.size() == tables.size();
    res["membership_failures"] = member_failures;
    pass = distinct.size() == tables.size() && member_failures == 0 &&
           mpz_class(static_cast<unsigned long>(tables.size())) == hom.order();
    return res;
}

json run_qq_verify(long trials, std::uint64_t seed, long bound, long m,
                   const std::string& input, bool& pass) {
    json res;
    if (!input.empty()) {
        std::ifstream in(input);
        if (!in) throw CLI::ValidationError("--input", "cannot open " + input);
        PlaneQuintuple q = quintuple_from_json(json::parse(in));
        QQTrialReport rep = qq_trial_check(q);
        res["quintuple"] = quintuple_to_json(q);
        res["diagram"] = diagram_to_json(bifurcation_diagram(q));
        res["sum"] = formal_sum_to_json(rep.sum);
        res["structure_ok"] = rep.structure_ok;
        res["oracle_ok"] = rep.oracle_ok;
        res["relation_ok"] = rep.relation_ok;
        if (!rep.ok()) res["detail"] = rep.detail;
        pass = rep.ok();
        return res;
    }
    long passes = 0;
    json failures = json::array();
    for (long i = 0; i < trials; ++i) {
        PlaneQuintuple q = random_quintuple(trial_seed(seed, static_cast<std::uint64_t>(i)),
                                            bound, m);
        QQTrialReport rep = qq_trial_check(q);
        if (rep.ok())
            ++passes;
        else
            failures.push_back({{"trial", i},
                                {"quintuple", quintuple_to_json(q)},
                                {"detail", rep.detail}});
    }
    res["trials"] = trials;
    res["passes"] = passes;
    res["failures"] = std::move(failures);
    pass = passes == trials;
    return res;
}

json run_diagram_classes(long trials, std::uint64_t seed, long bound, bool& pass) {
    std::map<std::string, long> census;
    std::map<std::string, json> witness;
    for (long i = 0; i < trials; ++i) {
        PlaneQuintuple q =
            random_quintuple(trial_seed(seed, static_cast<std::uint64_t>(i)), bound, 0);
        DiagramClass cls = classify_diagram(bifurcation_diagram(q));
        if (census[cls.encoding]++ == 0)
            witness[cls.encoding] = {{"trial", i}, {"quintuple", quintuple_to_json(q)}};
    }
    json res;
    res["trials"] = trials;
    res["class_count"] = census.size();
    json cj = json::object();
    for (const auto& [enc, count] : census) cj[enc] = count;
    res["census"] = std::move(cj);
    pass = census.size() == 4;
    if (!pass) {
        json wj = json::object();
        for (const auto& [enc, w] : witness) wj[enc] = w;
        res["witnesses"] = std::move(wj);
    }
    return res;
}

json run_lemma1_verify(long trials, std::uint64_t seed, long bound, bool& pass) {
    long passes = 0;
    json failures = json::array();
    for (long i = 0; i < trials; ++i) {
        SplitMix64 rng(trial_seed(seed, static_cast<std::uint64_t>(i)));
        auto rat = [&]() {
            Rat r(rng.range(-bound, bound), rng.range(1, bound));
            r.canonicalize();
            return r;
        };
        auto pos_rat = [&]() {
            Rat r(rng.range(1, bound), rng.range(1, bound));
            r.canonicalize();
            return r;
        };
        std::array<Vec3, 4> v;
        for (;;) {
            v[0] = {rat(), rat(), rat()};
            v[1] = {rat(), rat(), rat()};
            v[2] = {rat(), rat(), rat()};
            v[3] = {-v[0][0] - v[1][0] - v[2][0], -v[0][1] - v[1][1] - v[2][1],
                    -v[0][2] - v[1][2] - v[2][2]};
            bool indep = true;
            for (int a = 0; a < 4 && indep; ++a)
                for (int b = a + 1; b < 4 && indep; ++b)
                    for (int c = b + 1; c < 4 && indep; ++c)
                        if (det3(v[a], v[b], v[c]) == 0) indep = false;
            if (indep) break;
        }
        std::array<Rat, 4> mu = {pos_rat(), pos_rat(), pos_rat(), pos_rat()};
        if (lemma1_interior_check(v, mu))
            ++passes;
        else
            failures.push_back({{"trial", i}});
    }
    // fixed fixtures for the three precondition error paths
    auto expect_kind = [](Lemma1ErrorKind want, const std::array<Vec3, 4>& v,
                          const std::array<Rat, 4>& mu) {
        try {
            lemma1_interior_check(v, mu);
        } catch (const Lemma1PreconditionError& e) {
            return e.kind == want;
        }
        return false;
    };
    json paths;
    paths["sum_nonzero"] = expect_kind(
        Lemma1ErrorKind::SumNonzero,
        {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{-1, -1, 0}}, {1, 1, 1, 1});
    paths["dependent_triple"] = expect_kind(
        Lemma1ErrorKind::DependentTriple,
        {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{-1, -1, 0}, Vec3{0, 0, 0}}, {1, 1, 1, 1});
    paths["nonpositive_mu"] = expect_kind(
        Lemma1ErrorKind::NonpositiveMu,
        {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{-1, -1, -1}}, {1, 1, 1, 0});
    json res;
    res["trials"] = trials;
    res["passes"] = passes;
    res["failures"] = std::move(failures);
    res["error_paths"] = paths;
    pass = passes == trials && paths["sum_nonzero"].get<bool>() &&
           paths["dependent_triple"].get<bool>() && paths["nonpositive_mu"].get<bool>();
    return res;
}

json run_section_e(int window, std::size_t n, const SampleSpec& sample, std::uint64_t seed,
                   bool& pass) {
    DegreeWindow w(window);
    std::vector<Configuration> contexts = full_contexts(n, w);
    if (!sample.full && sample.count < contexts.size()) {
        // deterministic partial Fisher-Yates, then take the prefix
        SplitMix64 rng(seed);
        for (std::size_t i = 0; i < sample.count; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.next() % (contexts.size() - i));
            std::swap(contexts[i], contexts[j]);
        }
        contexts.resize(sample.count);
        std::sort(contexts.begin(), contexts.end());
    }
    GroupSpec z2{0, {2}};
    MembershipReport rep = check_membership(
        [&z2](const Configuration& c) {
            return std::optional<GroupElement>(GroupElement{{mpz_class(section_e_g(c))}});
        },
        z2, w, contexts);
    json res;
    res["window"] = window;
    res["n"] = n;
    res["contexts_used"] = contexts.size();
    res["instances_checked"] = rep.instances_checked;
    res["violation_count"] = rep.violations.size();
    json viol = json::array();
    for (std::size_t i = 0; i < rep.violations.size() && i < 20; ++i)
        viol.push_back(rep.violations[i]);
    res["violations"] = std::move(viol);
    pass = rep.ok();
    return res;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification engine for the CE-symbol calculus of surface immersions"};
    app.require_subcommand(1);

    int window = 1;
    std::string group_spec = "2";
    long trials = 100;
    std::uint64_t seed = 1;
    long bound = 20;
    long central_m = 0;
    std::size_t order_n = 2;
    std::string contexts_spec = "full";
    std::string out_path, export_path, input_path;
    bool drop_qq = false;

    auto add_window = [&](CLI::App* c) {
        c->add_option("--window", window, "degree window M")->check(CLI::PositiveNumber);
    };
    auto add_out = [&](CLI::App* c) { c->add_option("--out", out_path, "write report JSON here"); };
    auto add_trials = [&](CLI::App* c) {
        c->add_option("--trials", trials, "number of randomized trials")->check(CLI::PositiveNumber);
        c->add_option("--seed", seed, "master seed");
        c->add_option("--bound", bound, "numerator/denominator bound")->check(CLI::PositiveNumber);
    };

    CLI::App* cmd_ug = app.add_subcommand("universal-group",
                                          "truncated universal group of order-one invariants");
    add_window(cmd_ug);
    add_out(cmd_ug);
    cmd_ug->add_option("--export-relations", export_path, "write the raw relation matrix JSON");

    CLI::App* cmd_spans = app.add_subcommand("spans-equal",
                                             "raw vs simplified relation span equality");
    add_window(cmd_spans);
    add_out(cmd_spans);
    cmd_spans->add_flag("--drop-qq", drop_qq, "negative control: omit the QQ family");

    CLI::App* cmd_cross = app.add_subcommand("crosscheck-gu",
                                             "closed formulas vs quotient projection");
    add_window(cmd_cross);
    add_out(cmd_cross);

    CLI::App* cmd_tables = app.add_subcommand("delta1-tables",
                                              "enumerate order-one tables over a finite group");
    add_window(cmd_tables);
    add_out(cmd_tables);
    cmd_tables->add_option("--group", group_spec, "torsion spec, e.g. 2 or 2,4; 0 = Z factor");

    CLI::App* cmd_qq = app.add_subcommand("qq-verify", "quintuple-point relation over random quintuples");
    add_trials(cmd_qq);
    add_out(cmd_qq);
    cmd_qq->add_option("--m", central_m, "central degree");
    cmd_qq->add_option("--input", input_path, "verify one quintuple from JSON instead");

    CLI::App* cmd_classes = app.add_subcommand("diagram-classes",
                                               "census of diagram equivalence classes");
    add_trials(cmd_classes);
    add_out(cmd_classes);

    CLI::App* cmd_lemma = app.add_subcommand("lemma1-verify", "origin-in-simplex interior property");
    add_trials(cmd_lemma);
    add_out(cmd_lemma);

    CLI::App* cmd_sece = app.add_subcommand("section-e", "membership of the all-Q indicator over Z/2");
    add_window(cmd_sece);
    add_out(cmd_sece);
    cmd_sece->add_option("--n", order_n, "invariant order")->check(CLI::PositiveNumber);
    cmd_sece->add_option("--contexts", contexts_spec, "full or sample:N");
    cmd_sece->add_option("--seed", seed, "sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        auto start = std::chrono::steady_clock::now();
        bool pass = false;
        json results;
        json config;
        std::string command;
        if (cmd_ug->parsed()) {
            command = "universal-group";
            config = {{"window", window}};
            results = run_universal_group(window, export_path, pass);
        } else if (cmd_spans->parsed()) {
            command = "spans-equal";
            config = {{"window", window}, {"drop_qq", drop_qq}};
            results = run_spans_equal(window, drop_qq, pass);
        } else if (cmd_cross->parsed()) {
            command = "crosscheck-gu";
            config = {{"window", window}};
            results = run_crosscheck(window, pass);
        } else if (cmd_tables->parsed()) {
            command = "delta1-tables";
            config = {{"window", window}, {"group", group_spec}};
            results = run_delta1_tables(window, parse_group_spec(group_spec), pass);
        } else if (cmd_qq->parsed()) {
            command = "qq-verify";
            config = {{"trials", trials}, {"seed", seed}, {"bound", bound}, {"m", central_m}};
            results = run_qq_verify(trials, seed, bound, central_m, input_path, pass);
        } else if (cmd_classes->parsed()) {
            command = "diagram-classes";
            config = {{"trials", trials}, {"seed", seed}, {"bound", bound}};
            results = run_diagram_classes(trials, seed, bound, pass);
        } else if (cmd_lemma->parsed()) {
            command = "lemma1-verify";
            config = {{"trials", trials}, {"seed", seed}, {"bound", bound}};
            results = run_lemma1_verify(trials, seed, bound, pass);
        } else if (cmd_sece->parsed()) {
            command = "section-e";
            config = {{"window", window},
                      {"n", order_n},
                      {"contexts", contexts_spec},
                      {"seed", seed}};
            results = run_section_e(window, order_n, parse_contexts(contexts_spec), seed, pass);
        }
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        json report;
        report["schema"] = 1;
        report["command"] = command;
        report["config"] = config;
        report["results"] = results;
        report["pass"] = pass;
        report["wall_time_ms"] = elapsed;
        std::string text = report.dump(2);
        std::cout << text << "\n";
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot write " + out_path);
            out << text << "\n";
        }
        std::cerr << command << ": " << (pass ? "PASS" : "FAIL") << " (" << elapsed << " ms)\n";
        return pass ? 0 : 1;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
