#include "wb/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "wb/audit.hpp"
#include "wb/certificate.hpp"
#include "wb/classify.hpp"
#include "wb/dlo_backend.hpp"
#include "wb/dynamics.hpp"
#include "wb/forb_backend.hpp"

namespace wb {
namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCounterexample = 1;
constexpr int kExitBudget = 2;
constexpr int kExitInvalid = 3;

struct Options {
    std::string config_path;
    std::string preset;
    std::string json_path;
    std::string backend = "forb";
    std::string pipeline;
    std::string variant = "both-sides";
    std::string certificate_path;
    int cherlin_n = 0;
    int max_size = 4;
    int max_base = 1;
    int max_vertices = 24;
    int bound = 6;
    unsigned seed = 1;
};

Budget work_budget() { return Budget{4096, 5'000'000}; }

/// Everything a command needs to know about the class under study.
struct Setup {
    LanguagePtr lang;
    TriangleSet T;
    std::vector<std::string> priority;
    json config; // raw config file contents, if any
    Setup() : T(Language::two_asymmetric_rg()) {}
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return json::parse(in);
}

int parse_preset(const std::string& name) {
    if (name.rfind("cherlin-", 0) == 0) {
        int n = std::stoi(name.substr(8));
        if (n >= 8 && n <= 12) return n;
    }
    throw std::invalid_argument("unknown preset (expected cherlin-8..cherlin-12): " +
                                name);
}

Setup resolve_setup(const Options& opt) {
    Setup s;
    s.lang = Language::two_asymmetric_rg();
    s.priority = {"R+", "R-"};
    std::string preset = opt.preset;
    if (!opt.config_path.empty()) {
        s.config = load_config(opt.config_path);
        if (s.config.contains("language")) {
            std::vector<Language::Symbol> symbols;
            for (const auto& e : s.config.at("language"))
                symbols.push_back({e.at("name").get<std::string>(),
                                   e.value("asymmetric", true)});
            s.lang = std::make_shared<const Language>(std::move(symbols));
        }
        if (s.config.contains("priority")) {
            s.priority.clear();
            for (const auto& n : s.config.at("priority"))
                s.priority.push_back(n.get<std::string>());
        }
        if (preset.empty() && s.config.contains("preset"))
            preset = s.config.at("preset").get<std::string>();
        if (s.config.contains("triangles")) {
            s.T = TriangleSet::parse(s.lang, s.config.at("triangles").get<std::string>());
            return s;
        }
    }
    if (!preset.empty()) {
        s.T = TriangleSet::cherlin(parse_preset(preset));
        return s;
    }
    throw std::invalid_argument("no triangle set: give --preset or a config file "
                                "with \"triangles\" or \"preset\"");
}

ForbLimitBackend build_forb(const Setup& s, const Options& opt) {
    ApproximationTower t(s.T, PriorityOrder::parse(*s.lang, s.priority),
                         opt.preset.empty() ? "custom" : opt.preset);
    t.saturate({opt.max_vertices, opt.max_base});
    return ForbLimitBackend(std::move(t));
}

void write_json(const Options& opt, const std::string& text) {
    if (opt.json_path.empty()) return;
    std::ofstream out(opt.json_path);
    if (!out) throw std::invalid_argument("cannot write: " + opt.json_path);
    out << text;
}

std::string priority_label(const std::vector<std::string>& names) {
    std::string s;
    for (const auto& n : names) {
        if (!s.empty()) s += " > ";
        s += n;
    }
    return s;
}

/// One ordering's verdict: condition-1 plus the exhaustive amalgam sweep.
struct OrderingResult {
    std::vector<std::string> names;
    SyntacticVerdict cond1;
    std::optional<ClassVerdict> sweep;
    bool pass() const { return cond1.pass && sweep && sweep->pass; }
};

OrderingResult classify_ordering(const Setup& s, const std::vector<std::string>& names,
                                 int max_size) {
    OrderingResult r;
    r.names = names;
    PriorityOrder pr = PriorityOrder::parse(*s.lang, names);
    r.cond1 = condition1_check(s.T, pr);
    // The sweep runs even when the syntactic check fails: it produces a
    // concrete amalgamation problem that replays as evidence.
    r.sweep = check_prioritised_class(s.lang, s.T, pr, max_size);
    return r;
}

void report_ordering(std::ostream& out, const Setup& s, const OrderingResult& r) {
    out << "priority " << priority_label(r.names) << ":\n";
    out << "  condition-1 (no two solution-class edges in a forbidden triangle): "
        << (r.cond1.pass ? "pass" : "FAIL") << "\n";
    if (!r.cond1.pass && r.cond1.offending)
        out << "    offending triangle: " << r.cond1.offending->to_string(*s.lang)
            << "\n";
    if (r.sweep) {
        out << "  amalgam sweep (" << r.sweep->problems_checked
            << " problems): " << (r.sweep->pass ? "pass" : "FAIL") << "\n";
        if (!r.sweep->pass) {
            const auto& c = r.sweep->least();
            out << "    least counterexample: |A|=" << c.problem.A.size()
                << " |C|=" << c.problem.C.size() << " |B|=" << c.problem.B.size()
                << " ("
                << (c.outcome.no_color ? "no admissible colour" : "forbidden triangle")
                << ")\n";
        }
    }
}

/// Emits the replayable record for the first failing ordering.
int finish_classification(std::ostream& out, const Options& opt, const Setup& s,
                          const std::vector<OrderingResult>& results) {
    bool any_pass = false;
    for (const auto& r : results) any_pass = any_pass || r.pass();
    if (any_pass) {
        out << "verdict: prioritised semi-free\n";
        if (!opt.json_path.empty()) {
            json rec{{"verdict", "prioritised-semi-free"}, {"orderings", json::array()}};
            for (const auto& r : results)
                rec["orderings"].push_back(json{{"priority", r.names},
                                                {"pass", r.pass()}});
            write_json(opt, rec.dump(2) + "\n");
        }
        return kExitOk;
    }
    out << "verdict: NOT prioritised semi-free (no ordering works)\n";
    for (const auto& r : results) {
        if (r.sweep && !r.sweep->pass) {
            PriorityOrder pr = PriorityOrder::parse(*s.lang, r.names);
            std::string cert = classification_to_json(s.T, pr, r.sweep->least());
            out << "replayable counterexample (priority " << priority_label(r.names)
                << "):\n" << cert;
            write_json(opt, cert);
            break;
        }
    }
    return kExitCounterexample;
}

int cmd_classify(const Options& opt, std::ostream& out) {
    Setup s = resolve_setup(opt);
    out << "triangle set (" << s.T.size() << " patterns):\n" << s.T.to_string();
    std::vector<std::string> names = s.priority;
    std::sort(names.begin(), names.end());
    std::vector<OrderingResult> results;
    do {
        results.push_back(classify_ordering(s, names, opt.max_size));
        report_ordering(out, s, results.back());
    } while (std::next_permutation(names.begin(), names.end()));
    return finish_classification(out, opt, s, results);
}

/// Reproduces the two-pair completion where the first cross pair is blocked
/// down to the second priority and the other is not.
bool worked_example_8(std::ostream& out) {
    auto lang = Language::two_asymmetric_rg();
    TriangleSet T = TriangleSet::cherlin(8);
    int Gp = lang->id_of("G+"), Rp = lang->id_of("R+"), Rm = lang->id_of("R-");
    CompleteStructure A(lang);
    for (int v : {0, 1, 2}) A.add_vertex(v); // b=0, a1=1, a2=2
    A.set_color(0, 1, Gp);
    A.set_color(2, 0, Gp);
    A.set_color(2, 1, Gp);
    CompleteStructure C(lang);
    C.add_vertex(0);
    C.add_vertex(3); // c=3
    C.set_color(3, 0, Gp);
    AmalgamOutcome o =
        prioritised_amalgam(AmalgamProblem(A, C, {0}), T, PriorityOrder(*lang, {Rp, Rm}));
    bool ok = o.ok() && o.completed->color(1, 3) == Rm && o.completed->color(2, 3) == Rp;
    out << "worked amalgam (base b; a1,a2 vs c): r(a1,c)="
        << (o.ok() ? lang->name(o.completed->color(1, 3)) : "-")
        << " r(a2,c)=" << (o.ok() ? lang->name(o.completed->color(2, 3)) : "-") << " ["
        << (ok ? "as expected" : "MISMATCH") << "]\n";
    return ok;
}

int cmd_cherlin(const Options& opt, std::ostream& out) {
    if (opt.cherlin_n < 8 || opt.cherlin_n > 12)
        throw std::invalid_argument("cherlin preset must be 8..12");
    Options o = opt;
    o.preset = "cherlin-" + std::to_string(opt.cherlin_n);
    o.config_path.clear();
    Setup s = resolve_setup(o);
    out << "triangle set #" << opt.cherlin_n << " (" << s.T.size() << " patterns):\n"
        << s.T.to_string();
    std::vector<OrderingResult> results;
    for (auto names : std::vector<std::vector<std::string>>{
             {"R+", "R-"}, {"R-", "R+"}, {"G+", "G-"}, {"G-", "G+"}}) {
        s.priority = names;
        results.push_back(classify_ordering(s, names, o.max_size));
        report_ordering(out, s, results.back());
    }
    int rc = finish_classification(out, o, s, results);
    if (opt.cherlin_n == 8 && rc == kExitOk && !worked_example_8(out))
        rc = kExitCounterexample;
    return rc;
}

int cmd_amalgamate(const Options& opt, std::ostream& out) {
    Setup s = resolve_setup(opt);
    if (!s.config.contains("A") || !s.config.contains("C") || !s.config.contains("B"))
        throw std::invalid_argument("amalgamate needs \"A\", \"C\" (structure literals) "
                                    "and \"B\" (shared vertex ids) in the config");
    CompleteStructure A =
        CompleteStructure::from_literal(s.lang, s.config.at("A").get<std::string>());
    CompleteStructure C =
        CompleteStructure::from_literal(s.lang, s.config.at("C").get<std::string>());
    VSet B;
    for (const auto& v : s.config.at("B")) B.push_back(v.get<int>());
    std::sort(B.begin(), B.end());
    AmalgamProblem p(std::move(A), std::move(C), B);
    PriorityOrder pr = PriorityOrder::parse(*s.lang, s.priority);
    AmalgamOutcome res = prioritised_amalgam(p, s.T, pr);
    if (res.ok()) {
        out << "completed:\n" << res.completed->to_literal();
        if (!opt.json_path.empty())
            write_json(opt, json{{"verdict", "completed"},
                                 {"structure", res.completed->to_literal()}}
                                .dump(2) +
                                "\n");
        return kExitOk;
    }
    out << "completion failed: "
        << (res.no_color ? "no admissible colour" : "forbidden triangle in result")
        << "\n";
    std::string cert = classification_to_json(s.T, pr, ClassCounterexample{p, res});
    out << "replayable counterexample:\n" << cert;
    write_json(opt, cert);
    return kExitCounterexample;
}

int cmd_limit(const Options& opt, std::ostream& out) {
    Setup s = resolve_setup(opt);
    try {
        ApproximationTower t(s.T, PriorityOrder::parse(*s.lang, s.priority),
                             opt.preset.empty() ? "custom" : opt.preset);
        SaturateStatus st = t.saturate({opt.max_vertices, opt.max_base});
        out << "stages:";
        for (int n : t.stage_sizes()) out << " " << n;
        out << "\nsaturation: "
            << (st == SaturateStatus::Fixpoint ? "fixpoint" : "vertex cap reached")
            << "\n";
        std::string dumped = t.dump();
        out << dumped;
        if (!opt.json_path.empty())
            write_json(opt, json{{"verdict", "built"},
                                 {"stage_sizes", t.stage_sizes()},
                                 {"tower", dumped}}
                                .dump(2) +
                                "\n");
        return kExitOk;
    } catch (const CompletionFailure&) {
        out << "tower construction failed: the prioritised completion broke during a "
               "realization; the class is not prioritised semi-free as configured\n";
        return kExitCounterexample;
    }
}

int cmd_check_swir(const Options& opt, std::ostream& out) {
    std::vector<AxiomReport> reports;
    std::unique_ptr<Backend> keep; // owns the audited backend
    if (opt.backend == "dlo") {
        auto b = std::make_unique<DLOBackend>(DLOBackend::grid(opt.bound));
        AuditBounds bounds;
        bounds.max_arity = 2;
        reports = opt.bound <= 9 ? audit_all_dense(*b, bounds) : audit_all(*b, bounds);
        keep = std::move(b);
        out << "backend: dense linear order, " << opt.bound << " points\n";
    } else if (opt.backend == "forb") {
        Setup s = resolve_setup(opt);
        auto b = std::make_unique<ForbLimitBackend>(build_forb(s, opt));
        VSet U = b->universe();
        AuditBounds bounds;
        bounds.max_D = 1;
        bounds.max_arity = 1;
        bounds.window = VSet(U.begin(), U.begin() + std::min<size_t>(U.size(), 7));
        reports = audit_all(*b, bounds);
        keep = std::move(b);
        out << "backend: forbidden-triangle limit, stage size " << U.size() << "\n";
    } else {
        throw std::invalid_argument("--backend must be dlo or forb");
    }

    bool hard_violation = false, budget_hit = false;
    json rec = json::array();
    for (const auto& r : reports) {
        bool expected_fail = r.axiom == Axiom::Symmetry;
        out << to_string(r.axiom) << "/" << to_string(r.variant) << ": "
            << r.configurations << " configurations, " << r.violation_count
            << " violations";
        if (r.budget_failures > 0) out << ", " << r.budget_failures << " budget misses";
        if (r.violation_count > 0 && expected_fail)
            out << " [expected: the relation is only weakly independent]";
        if (r.budget_exhausted) out << " [BUDGET EXHAUSTED]";
        out << "\n";
        if (r.axiom == Axiom::Monotonicity && r.variant == Variant::Right &&
            r.displayed_reading_failures > 0)
            out << "  second conclusion as displayed (D ind_AB D): "
                << r.displayed_reading_failures
                << " failures; corrected reading (D ind_AB C) audited above\n";
        if (r.violation_count > 0 && !r.counterexamples.empty()) {
            const auto& ce = r.counterexamples.front();
            out << "  counterexample sets:";
            for (const auto& S : ce.sets) {
                out << " {";
                for (size_t i = 0; i < S.size(); ++i) out << (i ? "," : "") << S[i];
                out << "}";
            }
            if (!ce.note.empty()) out << " (" << ce.note << ")";
            out << "\n";
        }
        if (r.violation_count > 0 && !expected_fail) hard_violation = true;
        if (r.budget_exhausted) budget_hit = true;
        json jr{{"axiom", to_string(r.axiom)},
                {"variant", to_string(r.variant)},
                {"configurations", r.configurations},
                {"violations", r.violation_count},
                {"expected_failure", expected_fail}};
        if (!r.counterexamples.empty()) jr["counterexample"] = r.counterexamples[0].sets;
        rec.push_back(jr);
    }
    write_json(opt, json{{"reports", rec}}.dump(2) + "\n");
    if (hard_violation) return kExitCounterexample;
    if (budget_hit) return kExitBudget;
    return kExitOk;
}

int dyn_exit(DynStatus s) {
    switch (s) {
        case DynStatus::Ok: return kExitOk;
        case DynStatus::BudgetExhausted: return kExitBudget;
        default: return kExitCounterexample;
    }
}

/// Seeded distinct universe points, shuffled reproducibly.
VSet pick_points(const Backend& b, unsigned seed, size_t n) {
    VSet u = b.universe();
    std::mt19937 rng(seed);
    std::shuffle(u.begin(), u.end(), rng);
    if (u.size() < n) throw std::invalid_argument("universe too small for the pipeline");
    u.resize(n);
    return u;
}

int pipeline_conjugate_product(const Options& opt, std::ostream& out,
                               ForbLimitBackend& b) {
    VSet w = pick_points(b, opt.seed, 5);
    std::vector<PartialIso> g;
    std::vector<VSet> X;
    for (int i = 0; i < 4; ++i)
        g.push_back(PartialIso::from_pairs(
            {{w[static_cast<size_t>(i)], w[static_cast<size_t>(i) + 1]}}));
    for (int i = 0; i < 5; ++i) X.push_back({w[static_cast<size_t>(i)]});
    std::vector<IsoRef> refs;
    for (auto& m : g) refs.push_back(IsoRef{&m, false});
    Budget budget = work_budget();
    out << "stage 1: relocation pipeline on singleton X_i\n";
    auto r32 = prop_tz32_pipeline(b, refs, X, budget);
    if (!r32.ok()) {
        out << "relocation failed at step " << r32.step << ": " << to_string(r32.status)
            << " (" << r32.note << ")\n";
        return dyn_exit(r32.status);
    }
    std::string why;
    if (!r32.value->verify(b, &why)) {
        out << "relocation certificate failed re-verification: " << why << "\n";
        return kExitCounterexample;
    }
    out << "relocation certificate re-verified\n";

    out << "stage 2: conjugate product through the relocated sets\n";
    const std::vector<VSet>& Y = r32.value->Y;
    // The relocated sets satisfy g_i^{a_i}(Y_{i-1}) = Y_i, so the conjugated
    // maps are the ones carrying the chain; hand those to the product solver.
    std::vector<PartialIso> H;
    for (int i = 0; i < 4; ++i)
        H.push_back(r32.value->g[static_cast<size_t>(i)].conjugate_by(
            r32.value->a[static_cast<size_t>(i)]));
    std::vector<IsoRef> hrefs;
    for (auto& m : H) hrefs.push_back(IsoRef{&m, false});
    int rep = -1;
    for (int v : b.universe())
        if (!set_contains(Y[0], v)) {
            rep = v;
            break;
        }
    if (rep < 0) throw std::invalid_argument("no free point for x0");
    auto x0 = b.realize({rep}, VTuple(Y[0].begin(), Y[0].end()), {}, Side::Left, budget);
    if (!x0) {
        out << "x0 realization exhausted the budget\n";
        return kExitBudget;
    }
    VTuple z = *x0;
    for (auto& rf : hrefs) {
        auto zi = apply_ext(b, rf, z, budget);
        if (!zi) {
            out << "composite image exhausted the budget\n";
            return kExitBudget;
        }
        z = *zi;
    }
    auto r34 = prop_tz34_solve(b, hrefs, Y, *x0, z, budget);
    if (!r34.ok()) {
        out << "conjugate product failed at step " << r34.step << ": "
            << to_string(r34.status) << " (" << r34.note << ")\n";
        return dyn_exit(r34.status);
    }
    if (!r34.value->verify(b, &why)) {
        out << "conjugate product certificate failed re-verification: " << why << "\n";
        return kExitCounterexample;
    }
    std::string cert = conjugate_product_to_json(*r34.value, b);
    out << "conjugate product certificate re-verified\n";
    if (opt.json_path.empty())
        out << cert;
    else
        write_json(opt, cert);
    return kExitOk;
}

int pipeline_moving(const Options& opt, std::ostream& out, ForbLimitBackend& b) {
    VSet w = pick_points(b, opt.seed, 3);
    Budget budget = work_budget();
    int rc = kExitOk;
    for (MoveSide side : {MoveSide::R, MoveSide::L}) {
        PartialIso g = PartialIso::from_pairs({{w[0], w[1]}});
        auto r = moving_witness(b, IsoRef{&g, false}, make_set({w[0], w[1]}), {w[2]},
                                side, budget);
        out << "side " << (side == MoveSide::R ? "R" : "L") << ": "
            << to_string(r.status);
        if (r.ok()) {
            out << ", witness a=" << r.value->a[0] << " ga=" << r.value->ga[0]
                << (r.value->verify(b) ? " (re-verified)" : " (VERIFY FAILED)");
            if (!r.value->verify(b)) rc = kExitCounterexample;
        } else {
            rc = std::max(rc, dyn_exit(r.status));
        }
        out << "\n";
    }
    return rc;
}

int pipeline_colourrange(const Options& opt, std::ostream& out, ForbLimitBackend& b) {
    VSet w = pick_points(b, opt.seed, 2);
    PartialIso g = PartialIso::from_pairs({{w[0], w[1]}});
    auto sched = default_schedule(b, opt.max_base, opt.bound);
    std::vector<int> solutions;
    for (int c = 0; c < b.stage().language().symbol_count(); ++c) solutions.push_back(c);
    ColourRangeReport report;
    Budget budget = work_budget();
    auto r = lemma_colourrange_build(b, IsoRef{&g, false}, sched, solutions, report,
                                     budget);
    out << "schedule: " << sched.size() << " types; entries: " << report.entries.size()
        << "; budget misses: " << report.budget_failures << "\n";
    for (const auto& e : report.entries)
        out << "  base size " << e.type.base.size() << ": colours "
            << (e.colours_ok ? "ok" : "FAIL") << "\n";
    if (!r.ok()) {
        out << "construction failed: " << to_string(r.status) << " (" << r.note << ")\n";
        return dyn_exit(r.status);
    }
    out << (report.all_ok() ? "all scheduled types verified\n"
                            : "some scheduled types failed\n");
    return report.all_ok() ? kExitOk : kExitCounterexample;
}

int pipeline_commutator(const Options& opt, std::ostream& out, ForbLimitBackend& b) {
    VSet w = pick_points(b, opt.seed, 2);
    PartialIso g = PartialIso::from_pairs({{w[0], w[1]}});
    CommutatorVariant variant = opt.variant == "mixed" ? CommutatorVariant::Mixed
                                                       : CommutatorVariant::BothSides;
    auto sched = default_schedule(b, opt.max_base, opt.bound);
    MoverReport report;
    Budget budget = work_budget();
    auto r = commutator_mover_build(b, IsoRef{&g, false}, sched, variant, report, budget);
    out << "variant: " << opt.variant << "; schedule: " << sched.size()
        << " types; witnesses: " << report.entries.size()
        << "; budget misses: " << report.budget_failures << "\n";
    for (const auto& e : report.entries)
        out << "  step " << e.step << " [" << (e.commutator_kg ? "k,g" : "g,k")
            << "] side " << (e.side == MoveSide::R ? "R" : "L") << ": "
            << (e.verified ? "verified" : "FAIL") << "\n";
    if (!r.ok()) {
        out << "construction failed: " << to_string(r.status) << " (" << r.note << ")\n";
        return dyn_exit(r.status);
    }
    out << (report.all_ok() ? "every scheduled type is moved on both sides\n"
                            : "some witnesses failed\n");
    return report.all_ok() ? kExitOk : kExitCounterexample;
}

int pipeline_density(const Options& opt, std::ostream& out, ForbLimitBackend& b) {
    VSet w = pick_points(b, opt.seed, 3);
    PartialIso g = PartialIso::from_pairs({{w[0], w[1]}});
    std::vector<PartialIso> u(4);
    Budget budget = work_budget();
    auto r = density_witness(b, IsoRef{&g, false}, u, {w[2]}, {}, budget);
    if (!r.ok()) {
        out << "density witness failed at step " << r.step << ": " << to_string(r.status)
            << " (" << r.note << ")\n";
        return dyn_exit(r.status);
    }
    std::string why;
    bool ok = r.value->verify(b, &why);
    out << "density certificate: " << (ok ? "re-verified" : ("FAILED: " + why)) << "\n";
    out << "w defined on " << r.value->w.size() << " points; extension wp on "
        << r.value->wp.size() << "\n";
    return ok ? kExitOk : kExitCounterexample;
}

int cmd_dynamics(const Options& opt, std::ostream& out) {
    Setup s = resolve_setup(opt);
    ForbLimitBackend b = build_forb(s, opt);
    out << "pipeline: " << opt.pipeline << "; seed " << opt.seed << "; stage size "
        << b.universe().size() << "\n";
    if (opt.pipeline == "conjugate-product") return pipeline_conjugate_product(opt, out, b);
    if (opt.pipeline == "moving") return pipeline_moving(opt, out, b);
    if (opt.pipeline == "colourrange") return pipeline_colourrange(opt, out, b);
    if (opt.pipeline == "commutator") return pipeline_commutator(opt, out, b);
    if (opt.pipeline == "density") return pipeline_density(opt, out, b);
    throw std::invalid_argument(
        "unknown pipeline (expected conjugate-product, moving, colourrange, "
        "commutator or density): " +
        opt.pipeline);
}

int cmd_verify(const Options& opt, std::ostream& out) {
    std::ifstream in(opt.certificate_path);
    if (!in) throw std::invalid_argument("cannot open: " + opt.certificate_path);
    std::stringstream buf;
    buf << in.rdbuf();
    ReplayReport rep = replay_certificate(buf.str());
    if (!rep.parsed) {
        out << "invalid certificate: " << rep.detail << "\n";
        return kExitInvalid;
    }
    out << "kind: " << rep.kind << "\n";
    if (rep.verdict) {
        out << "verdict: replays successfully\n";
        return kExitOk;
    }
    out << "verdict: REPLAY FAILED: " << rep.detail << "\n";
    return kExitCounterexample;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out) {
    Options opt;
    CLI::App app{"workbench for finite homogeneous structures with forbidden triangles"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* c) {
        c->add_option("--config", opt.config_path, "JSON config file");
        c->add_option("--preset", opt.preset, "compiled-in triangle set (cherlin-8..12)");
        c->add_option("--max-size", opt.max_size, "amalgam sweep size bound");
        c->add_option("--max-base", opt.max_base, "base size bound");
        c->add_option("--max-vertices", opt.max_vertices, "stage vertex cap");
        c->add_option("--seed", opt.seed, "seed for randomized instances");
        c->add_option("--json", opt.json_path, "write the machine-readable record here");
    };

    CLI::App* classify = app.add_subcommand(
        "classify", "test the prioritised completion over all priority orderings");
    add_common(classify);
    CLI::App* amalgamate =
        app.add_subcommand("amalgamate", "run one prioritised amalgamation problem");
    add_common(amalgamate);
    CLI::App* limit =
        app.add_subcommand("limit", "build and dump an approximation tower");
    add_common(limit);
    CLI::App* swir = app.add_subcommand(
        "check-swir", "audit the independence-relation axioms on a backend");
    add_common(swir);
    swir->add_option("--backend", opt.backend, "dlo or forb");
    swir->add_option("--bound", opt.bound, "dlo grid size");
    CLI::App* dynamics =
        app.add_subcommand("dynamics", "run an automorphism pipeline");
    add_common(dynamics);
    dynamics->add_option("pipeline", opt.pipeline, "which pipeline")->required();
    dynamics->add_option("--variant", opt.variant, "both-sides or mixed");
    dynamics->add_option("--bound", opt.bound, "schedule window size");
    CLI::App* verify =
        app.add_subcommand("verify", "replay a certificate from its file");
    verify->add_option("certificate", opt.certificate_path, "certificate file")
        ->required();
    CLI::App* cherlin =
        app.add_subcommand("cherlin", "reproduce a preset example end to end");
    add_common(cherlin);
    cherlin->add_option("n", opt.cherlin_n, "preset number (8..12)")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        out << "argument error: " << e.what() << "\n";
        return kExitInvalid;
    }

    // Pipelines need headroom for fresh points; keep the classify sweep small.
    if (dynamics->parsed() && opt.bound == 6) opt.bound = 3;

    try {
        if (classify->parsed()) return cmd_classify(opt, out);
        if (amalgamate->parsed()) return cmd_amalgamate(opt, out);
        if (limit->parsed()) return cmd_limit(opt, out);
        if (swir->parsed()) return cmd_check_swir(opt, out);
        if (dynamics->parsed()) return cmd_dynamics(opt, out);
        if (verify->parsed()) return cmd_verify(opt, out);
        if (cherlin->parsed()) return cmd_cherlin(opt, out);
    } catch (const std::invalid_argument& e) {
        out << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const json::exception& e) {
        out << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const CompletionFailure&) {
        out << "the prioritised completion failed mid-run; counterexample to the "
               "configured class\n";
        return kExitCounterexample;
    }
    return kExitInvalid;
}

} // namespace wb
