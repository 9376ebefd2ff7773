#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <iostream>
#include <random>

#include "wb/audit.hpp"
#include "wb/certificate.hpp"
#include "wb/classify.hpp"
#include "wb/dlo_backend.hpp"
#include "wb/dynamics.hpp"
#include "wb/forb_backend.hpp"
#include "wb/iso.hpp"

using namespace wb;

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void verdict(int criterion, const std::string& name, bool pass, const Stopwatch& sw) {
    std::cout << "[criterion " << criterion << "] " << name << ": "
              << (pass ? "PASS" : "FAIL") << " (" << sw.seconds() << "s)" << std::endl;
    CHECK(pass);
}

Budget big_budget() { return Budget{4096, 5'000'000}; }

ForbLimitBackend saturated_8(int max_vertices) {
    auto lang = Language::two_asymmetric_rg();
    ApproximationTower t(TriangleSet::cherlin(8),
                         PriorityOrder::parse(*lang, {"R+", "R-"}), "cherlin-8");
    t.saturate({max_vertices, 1});
    return ForbLimitBackend(std::move(t));
}

/// Random member of Forb_c(T) on the given vertices, if one is hit.
std::optional<CompleteStructure> random_forb_on(LanguagePtr lang, const TriangleSet& T,
                                                const VSet& vs, std::mt19937& rng) {
    std::uniform_int_distribution<int> col(0, lang->symbol_count() - 1);
    for (int tries = 0; tries < 40; ++tries) {
        CompleteStructure S(lang);
        for (int v : vs) S.add_vertex(v);
        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i + 1; j < vs.size(); ++j)
                S.set_color(vs[i], vs[j], col(rng));
        if (!embeds_forbidden(S, T)) return S;
    }
    return std::nullopt;
}

std::optional<AmalgamProblem> random_problem(LanguagePtr lang, const TriangleSet& T,
                                             int nb, int na, int nc, std::mt19937& rng) {
    VSet all;
    for (int v = 0; v < nb + (na - nb) + (nc - nb); ++v) all.push_back(v);
    auto D = random_forb_on(lang, T, all, rng);
    if (!D) return std::nullopt;
    VSet b, av, cv;
    for (int v = 0; v < nb; ++v) {
        b.push_back(v);
        av.push_back(v);
        cv.push_back(v);
    }
    for (int v = nb; v < na; ++v) av.push_back(v);
    for (int v = na; v < na + (nc - nb); ++v) cv.push_back(v);
    return AmalgamProblem(D->induced(av), D->induced(cv), b);
}

} // namespace

TEST_CASE("criterion 1: worked amalgam on triangle set #8") {
    Stopwatch sw;
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
    AmalgamOutcome out =
        prioritised_amalgam(AmalgamProblem(A, C, {0}), T, PriorityOrder(*lang, {Rp, Rm}));
    bool pass = out.ok() && out.completed->color(1, 3) == Rm &&
                out.completed->color(2, 3) == Rp && sw.seconds() < 1.0;
    verdict(1, "worked amalgam #8: r(a1,c)=R-, r(a2,c)=R+", pass, sw);
}

TEST_CASE("criterion 2: #8-#10 classify as prioritised semi-free under R+ > R-") {
    auto lang = Language::two_asymmetric_rg();
    PriorityOrder pr = PriorityOrder::parse(*lang, {"R+", "R-"});
    for (int n : {8, 9, 10}) {
        Stopwatch sw;
        TriangleSet T = TriangleSet::cherlin(n);
        bool c1 = condition1_check(T, pr).pass;
        ClassVerdict v = check_prioritised_class(lang, T, pr, 6, /*full_sweep=*/true);
        bool pass = c1 && v.pass && v.problems_checked > 0 && sw.seconds() < 300.0;
        verdict(2, "#" + std::to_string(n) + " full sweep to size 6 (" +
                       std::to_string(v.problems_checked) + " problems)",
                pass, sw);
    }
}

TEST_CASE("criterion 3: #11-#12 fail for R-headed and G-headed priorities") {
    auto lang = Language::two_asymmetric_rg();
    for (int n : {11, 12}) {
        Stopwatch sw;
        TriangleSet T = TriangleSet::cherlin(n);
        bool pass = true;
        std::string detail;
        for (auto names : std::vector<std::vector<std::string>>{{"R+", "R-"},
                                                                {"G+", "G-"}}) {
            PriorityOrder pr = PriorityOrder::parse(*lang, names);
            // Large counterexample cap so the figure-shaped witness (one base
            // point, two points on one side, one on the other) is retained
            // alongside the smaller ones enumerated first.
            ClassVerdict v =
                check_prioritised_class(lang, T, pr, 4, false, 1'000'000);
            bool shaped = false;
            for (const auto& c : v.counterexamples) {
                if (c.problem.B.size() == 1 && c.problem.a_side().size() == 2 &&
                    c.problem.c_side().size() == 1) {
                    // Replay: it is a genuine failure, not bookkeeping.
                    shaped = !prioritised_amalgam(c.problem, T, pr).ok();
                    if (shaped) break;
                }
            }
            if (v.pass || !shaped) pass = false;
        }
        pass = pass && sw.seconds() < 60.0;
        verdict(3, "#" + std::to_string(n) +
                       " fails with a witness of the figure shape "
                       "(|B|=1, |A-B|=2, |C-B|=1) for R and G priorities",
                pass, sw);
    }
}

TEST_CASE("criterion 4: independence audit on a saturated #8 tower") {
    Stopwatch sw;
    ForbLimitBackend bk = saturated_8(32);
    bool pass = bk.universe().size() >= 30;
    VSet U = bk.universe();
    AuditBounds bounds;
    bounds.max_A = 2;
    bounds.max_B = 2;
    bounds.max_C = 2;
    bounds.max_D = 1;
    bounds.max_arity = 2;
    // The stage satisfies the size requirement; configurations are drawn
    // exhaustively from a fixed window, since all-subset sweeps over 30+
    // points are out of desk range.
    bounds.window = VSet(U.begin(), U.begin() + 12);
    for (Axiom a : {Axiom::Monotonicity, Axiom::Transitivity, Axiom::Stationarity})
        for (Variant v : {Variant::Left, Variant::Right}) {
            AxiomReport r = audit_axiom(bk, a, v, bounds);
            if (r.violation_count != 0 || r.budget_exhausted || r.configurations == 0)
                pass = false;
        }
    AuditBounds eb = bounds;
    eb.max_arity = 1; // every 1-type over bases of size <= 2
    for (Variant v : {Variant::Left, Variant::Right}) {
        AxiomReport r = audit_axiom(bk, Axiom::Existence, v, eb);
        if (r.violation_count != 0 || r.budget_failures != 0 || r.configurations == 0)
            pass = false;
    }
    pass = pass && sw.seconds() < 600.0;
    verdict(4, "monotonicity/transitivity/stationarity clean, existence realized "
               "(stage >= 30, 12-point window)",
            pass, sw);
}

TEST_CASE("criterion 5: dense audit of the 8-point rational grid") {
    Stopwatch sw;
    DLOBackend b = DLOBackend::grid(8);
    AuditBounds bounds;
    bounds.max_arity = 2;
    auto reps = audit_all_dense(b, bounds);
    bool pass = true;
    bool symmetry_fails_with_witness = false;
    for (const auto& r : reps) {
        if (r.axiom == Axiom::Symmetry) {
            if (r.violation_count > 0 && !r.counterexamples.empty()) {
                const auto& ce = r.counterexamples.front();
                bool genuine = r.variant == Variant::Left
                                   ? b.ind(ce.sets[0], ce.sets[1], ce.sets[2]) &&
                                         !b.ind(ce.sets[2], ce.sets[1], ce.sets[0])
                                   : b.ind(ce.sets[2], ce.sets[1], ce.sets[0]) &&
                                         !b.ind(ce.sets[0], ce.sets[1], ce.sets[2]);
                symmetry_fails_with_witness = genuine;
            }
        } else if (r.violation_count != 0 || r.budget_exhausted ||
                   r.configurations == 0) {
            pass = false;
        }
    }
    pass = pass && symmetry_fails_with_witness && sw.seconds() < 60.0;
    verdict(5, "all weak axioms pass on DLO, symmetry fails with a replayed witness",
            pass, sw);
}

TEST_CASE("criterion 6: singleton solution set reduces to the free amalgam") {
    Stopwatch sw;
    auto lang = std::make_shared<const Language>(
        std::vector<Language::Symbol>{{"E", false}, {"N", false}});
    TriangleSet T(lang);
    T.insert(TrianglePattern::parse(*lang, "E E E"));
    int N = lang->id_of("N");
    PriorityOrder pr(*lang, {N});
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> nb(0, 2), extra(1, 2);
    int done = 0;
    bool pass = true;
    while (done < 1000) {
        int base = nb(rng);
        auto p = random_problem(lang, T, base, base + extra(rng), base + extra(rng), rng);
        if (!p) continue;
        ++done;
        AmalgamOutcome out = prioritised_amalgam(*p, T, pr);
        if (!out.ok() || !(*out.completed == free_amalgam(*p, N))) pass = false;
    }
    // ind over the free limit is symmetric on every tested configuration.
    ApproximationTower t(T, pr, "graph-free");
    t.saturate({14, 1});
    ForbLimitBackend bk(std::move(t));
    VSet U = bk.universe();
    AuditBounds bounds;
    bounds.window = VSet(U.begin(), U.begin() + std::min<size_t>(U.size(), 7));
    for (Variant v : {Variant::Left, Variant::Right}) {
        AxiomReport r = audit_axiom(bk, Axiom::Symmetry, v, bounds);
        if (r.violation_count != 0 || r.configurations == 0) pass = false;
    }
    pass = pass && sw.seconds() < 60.0;
    verdict(6, "prioritised == free on 1000 seeded problems; ind symmetric", pass, sw);
}

TEST_CASE("criterion 7: relocation and conjugate-product certificates, 100 seeds") {
    Stopwatch sw;
    ForbLimitBackend base = saturated_8(12);
    int verified = 0, budget_failures = 0, logical_failures = 0;
    for (unsigned seed = 1; seed <= 100; ++seed) {
        auto owned = base.clone();
        Backend& b = *owned;
        VSet w = b.universe();
        std::mt19937 rng(seed);
        std::shuffle(w.begin(), w.end(), rng);
        w.resize(5);
        std::vector<PartialIso> g;
        std::vector<VSet> X;
        for (int i = 0; i < 4; ++i)
            g.push_back(PartialIso::from_pairs(
                {{w[static_cast<size_t>(i)], w[static_cast<size_t>(i) + 1]}}));
        for (int i = 0; i < 5; ++i) X.push_back({w[static_cast<size_t>(i)]});
        std::vector<IsoRef> refs;
        for (auto& m : g) refs.push_back(IsoRef{&m, false});
        Budget budget = big_budget();

        auto r32 = prop_tz32_pipeline(b, refs, X, budget);
        if (!r32.ok()) {
            (r32.status == DynStatus::BudgetExhausted ? budget_failures
                                                      : logical_failures)++;
            continue;
        }
        // The relocated sets are carried by the conjugated maps g_i^{a_i}.
        std::vector<PartialIso> H;
        for (int i = 0; i < 4; ++i)
            H.push_back(r32.value->g[static_cast<size_t>(i)].conjugate_by(
                r32.value->a[static_cast<size_t>(i)]));
        std::vector<IsoRef> hrefs;
        for (auto& m : H) hrefs.push_back(IsoRef{&m, false});
        const std::vector<VSet>& Y = r32.value->Y;
        int rep = -1;
        for (int v : b.universe())
            if (!set_contains(Y[0], v)) {
                rep = v;
                break;
            }
        auto x0 =
            b.realize({rep}, VTuple(Y[0].begin(), Y[0].end()), {}, Side::Left, budget);
        if (!x0) {
            ++budget_failures;
            continue;
        }
        VTuple z = *x0;
        bool ran_out = false;
        for (auto& rf : hrefs) {
            auto zi = apply_ext(b, rf, z, budget);
            if (!zi) {
                ran_out = true;
                break;
            }
            z = *zi;
        }
        if (ran_out) {
            ++budget_failures;
            continue;
        }
        auto r34 = prop_tz34_solve(b, hrefs, Y, *x0, z, budget);
        if (!r34.ok()) {
            (r34.status == DynStatus::BudgetExhausted ? budget_failures
                                                      : logical_failures)++;
            continue;
        }
        // Independent re-verification on fresh readings of the stage.
        auto replay = b.clone();
        if (r32.value->verify(*replay) && r34.value->verify(*replay))
            ++verified;
        else
            ++logical_failures;
    }
    std::cout << "  verified " << verified << "/100, budget failures "
              << budget_failures << ", logical failures " << logical_failures
              << std::endl;
    bool pass = verified >= 95 && logical_failures == 0 && sw.seconds() < 900.0;
    verdict(7, "certificates re-verify in >= 95 of 100 seeded runs", pass, sw);
}

TEST_CASE("criterion 8: commutator builders on the default schedule") {
    Stopwatch sw;
    ForbLimitBackend b = saturated_8(16);
    auto lang = Language::two_asymmetric_rg();
    PartialIso g = PartialIso::from_pairs({{b.universe()[0], b.universe()[1]}});
    auto sched = default_schedule(b, 1, 4);
    std::vector<int> solutions = {lang->id_of("R+"), lang->id_of("R-")};
    Budget budget = big_budget();

    ColourRangeReport colours;
    auto h = lemma_colourrange_build(b, IsoRef{&g, false}, sched, solutions, colours,
                                     budget);
    bool pass = h.ok() && colours.all_ok() && colours.entries.size() == sched.size();
    std::cout << "  colour range: " << colours.entries.size() << " scheduled types, "
              << (colours.all_ok() ? "all cross colours in L'" : "FAILURES")
              << std::endl;

    if (h.ok()) {
        // The mover is built on the colour-range output map.
        MoverReport movers;
        Budget bu = big_budget();
        auto k = commutator_mover_build(b, IsoRef{&*h.value, false}, sched,
                                        CommutatorVariant::BothSides, movers, bu);
        pass = pass && k.ok() && movers.all_ok() &&
               movers.entries.size() == 4 * sched.size();
        std::cout << "  mover: " << movers.entries.size() << " witnesses, "
                  << (movers.all_ok() ? "all four sides verified per type"
                                      : "FAILURES")
                  << std::endl;
    } else {
        pass = false;
    }
    pass = pass && sw.seconds() < 900.0;
    verdict(8, "colour range within L' and four-sided movers on #8", pass, sw);
}

TEST_CASE("criterion 9: property suites") {
    Stopwatch sw;
    auto lang = Language::two_asymmetric_rg();
    std::mt19937 rng(99);
    bool pass = true;

    // Coherence round-trip: stored colors agree with their duals both ways,
    // and the literal serialization reproduces the structure.
    for (int it = 0; it < 50 && pass; ++it) {
        auto S = random_forb_on(lang, TriangleSet(lang), {0, 1, 2, 3, 4}, rng);
        if (!S) continue;
        for (int x : S->vertices())
            for (int y : S->vertices())
                if (x != y && S->color(x, y) != lang->dual(S->color(y, x))) pass = false;
        if (!(CompleteStructure::from_literal(lang, S->to_literal()) == *S)) pass = false;
    }

    // Canonicalization soundness and completeness at size <= 4.
    auto S8 = TriangleSet::cherlin(8);
    auto all4 = enumerate_forb(lang, S8, 4);
    for (int it = 0; it < 40 && pass; ++it) {
        auto& S = all4[static_cast<size_t>(it) % all4.size()];
        CompleteStructure c = canonical_form(S);
        if (!find_isomorphism(c, S)) pass = false; // soundness
    }
    for (size_t i = 0; i < all4.size() && pass; ++i)
        for (size_t j = i + 1; j < all4.size(); ++j)
            // Representatives are pairwise non-isomorphic with distinct forms.
            if (canonical_form(all4[i]) == canonical_form(all4[j]) ||
                find_isomorphism(all4[i], all4[j])) {
                pass = false;
                break;
            }

    // Enumeration hereditariness: induced substructures of enumerated members
    // appear among the enumerated members at their size.
    auto all3 = enumerate_forb(lang, S8, 3);
    for (const auto& S : all4) {
        VSet vs = S.vertices();
        for (int drop : vs) {
            CompleteStructure sub = S.induced(set_minus(vs, {drop}));
            bool found = false;
            for (const auto& T3 : all3)
                if (find_isomorphism(sub, T3)) found = true;
            if (!found) pass = false;
        }
    }

    // Order-independence of the prioritised completion: relabelling the
    // non-base points permutes the completion accordingly.
    PriorityOrder pr = PriorityOrder::parse(*lang, {"R+", "R-"});
    int done = 0;
    while (done < 25 && pass) {
        auto p = random_problem(lang, S8, 1, 3, 3, rng);
        if (!p) continue;
        ++done;
        AmalgamOutcome out = prioritised_amalgam(*p, S8, pr);
        std::map<int, int> rl;
        for (int v : set_union(p->A.vertices(), p->C.vertices())) rl[v] = v + 100;
        for (int v : p->B) rl[v] = v;
        auto relabel = [&](const CompleteStructure& S) {
            CompleteStructure R(lang);
            for (int v : S.vertices()) R.add_vertex(rl.at(v));
            for (int x : S.vertices())
                for (int y : S.vertices())
                    if (x < y) R.set_color(rl.at(x), rl.at(y), S.color(x, y));
            return R;
        };
        AmalgamOutcome out2 = prioritised_amalgam(
            AmalgamProblem(relabel(p->A), relabel(p->C), p->B), S8, pr);
        if (out.ok() != out2.ok()) pass = false;
        if (out.ok())
            for (int a : p->a_side())
                for (int c : p->c_side())
                    if (out.completed->color(a, c) !=
                        out2.completed->color(rl.at(a), rl.at(c)))
                        pass = false;
    }

    // Certificate replay determinism: identical emission bytes, identical
    // replay verdicts.
    {
        ClassVerdict v =
            check_prioritised_class(lang, TriangleSet::cherlin(11), pr, 4);
        if (v.pass) {
            pass = false;
        } else {
            std::string t1 =
                classification_to_json(TriangleSet::cherlin(11), pr, v.least());
            std::string t2 =
                classification_to_json(TriangleSet::cherlin(11), pr, v.least());
            if (t1 != t2) pass = false;
            ReplayReport r1 = replay_certificate(t1);
            ReplayReport r2 = replay_certificate(t1);
            if (!r1.parsed || !r1.verdict || r1.verdict != r2.verdict ||
                r1.detail != r2.detail)
                pass = false;
        }
    }
    pass = pass && sw.seconds() < 300.0;
    verdict(9, "coherence, canonicalization, hereditariness, order-independence, "
               "replay determinism",
            pass, sw);
}
