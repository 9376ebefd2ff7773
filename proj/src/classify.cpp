#include "wb/classify.hpp"

#include <functional>

#include "wb/iso.hpp"

namespace wb {

ClassVerdict check_prioritised_class(LanguagePtr lang, const TriangleSet& T,
                                     const PriorityOrder& pr, int max_size,
                                     bool full_sweep, size_t max_counterexamples) {
    if (max_size < 3) throw std::invalid_argument("check_prioritised_class: max_size < 3");
    ClassVerdict v;
    for (int total = 3; total <= max_size; ++total) {
        for (int nb = 0; nb <= total - 2; ++nb) {
            std::vector<CompleteStructure> bases;
            if (nb == 0)
                bases.push_back(CompleteStructure(lang));
            else
                bases = enumerate_forb(lang, T, nb, max_size);
            for (int ka = 1; ka <= total - nb - 1; ++ka) {
                int kc = total - nb - ka;
                if (!full_sweep && (ka > 2 || kc > 2)) continue;
                for (const CompleteStructure& base : bases) {
                    auto As = enumerate_extensions(base, T, ka, nb);
                    auto Cs = enumerate_extensions(base, T, kc, nb + ka);
                    for (const CompleteStructure& A : As)
                        for (const CompleteStructure& C : Cs) {
                            AmalgamProblem p(A, C, base.vertices());
                            ++v.problems_checked;
                            AmalgamOutcome out = prioritised_amalgam(p, T, pr);
                            if (!out.ok()) {
                                v.pass = false;
                                if (v.counterexamples.size() < max_counterexamples)
                                    v.counterexamples.push_back({p, out});
                            }
                        }
                }
            }
        }
    }
    return v;
}

SyntacticVerdict condition1_check(const TriangleSet& T, const PriorityOrder& pr) {
    const Language& lang = T.language();
    for (const TrianglePattern& p : T.patterns()) {
        int hits = 0;
        for (int e : p.edges())
            if (pr.orientation_class_in(lang, e)) ++hits;
        if (hits >= 2) return {false, p};
    }
    return {true, std::nullopt};
}

bool solution_edge(const Language&, const PriorityOrder& pr, int sym) {
    return pr.is_solution(sym);
}

namespace {

// Does the pattern, realized on three points, contain a two-edge path
// (u -> v -> w) colored with one of the given ordered pairs?
bool has_path(LanguagePtr lp, const TrianglePattern& p,
              const std::vector<std::pair<int, int>>& pairs) {
    CompleteStructure S(lp);
    for (int v : {0, 1, 2}) S.add_vertex(v);
    S.set_color(0, 1, p.edges()[0]);
    S.set_color(0, 2, p.edges()[1]);
    S.set_color(1, 2, p.edges()[2]);
    for (int u : {0, 1, 2})
        for (int v : {0, 1, 2})
            for (int w : {0, 1, 2}) {
                if (u == v || v == w || u == w) continue;
                for (auto [s1, s2] : pairs)
                    if (S.color(u, v) == s1 && S.color(v, w) == s2) return true;
            }
    return false;
}

} // namespace

MainCondVerdict maincond_check(const TriangleSet& T, const PriorityOrder& pr,
                               const Backend& backend, int max_base,
                               const VSet& window) {
    const Language& lang = T.language();
    MainCondVerdict v;

    // (i): no triangle contains a path R1,R1 or R1,R2 (either order).
    int R1 = pr.solutions()[0];
    std::vector<std::pair<int, int>> paths = {{R1, R1}};
    if (pr.solutions().size() > 1) {
        int R2 = pr.solutions()[1];
        paths.push_back({R1, R2});
        paths.push_back({R2, R1});
    }
    for (const TrianglePattern& p : T.patterns())
        if (has_path(T.language_ptr(), p, paths)) {
            v.part1_pass = false;
            v.part1_offending = p;
            break;
        }

    // (ii): a ind_{bB} c and r(a,b) in L' imply a ind_B c.
    VSet W = window.empty() ? backend.universe() : window;
    std::function<void(size_t, VSet&)> rec = [&](size_t from, VSet& B) {
        if (!v.part2_pass) return;
        for (int a : W) {
            if (set_contains(B, a)) continue;
            for (int b : W) {
                if (b == a || set_contains(B, b)) continue;
                auto col = backend.edge_color(a, b);
                if (!col || !solution_edge(lang, pr, *col)) continue;
                VSet bB = set_insert(B, b);
                for (int c : W) {
                    if (c == a || c == b || set_contains(B, c)) continue;
                    ++v.configurations_checked;
                    if (backend.ind({a}, bB, {c}) && !backend.ind({a}, B, {c})) {
                        v.part2_pass = false;
                        v.part2_counterexample = {a, b, c, B};
                        return;
                    }
                }
            }
        }
        if (static_cast<int>(B.size()) >= max_base) return;
        for (size_t i = from; i < W.size(); ++i) {
            VSet B2 = set_insert(B, W[i]);
            rec(i + 1, B2);
        }
    };
    VSet B0;
    rec(0, B0);
    return v;
}

} // namespace wb
