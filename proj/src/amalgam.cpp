#include "wb/amalgam.hpp"

#include <functional>
#include <set>
#include <stdexcept>

namespace wb {

PriorityOrder::PriorityOrder(const Language& lang, std::vector<int> solutions)
    : solutions_(std::move(solutions)) {
    if (solutions_.empty()) throw std::invalid_argument("priority order must be non-empty");
    std::set<int> seen;
    for (int s : solutions_) {
        if (s < 0 || s >= lang.symbol_count())
            throw std::invalid_argument("priority order: unknown symbol id");
        if (!seen.insert(s).second)
            throw std::invalid_argument("priority order: duplicate symbol");
    }
    if (static_cast<int>(solutions_.size()) >= lang.symbol_count())
        throw std::invalid_argument("solution set must be a proper subset of the language");
}

PriorityOrder PriorityOrder::parse(const Language& lang,
                                   const std::vector<std::string>& names) {
    std::vector<int> ids;
    for (const auto& n : names) ids.push_back(lang.id_of(n));
    return PriorityOrder(lang, std::move(ids));
}

bool PriorityOrder::is_solution(int sym) const {
    for (int s : solutions_)
        if (s == sym) return true;
    return false;
}

bool PriorityOrder::orientation_class_in(const Language& lang, int sym) const {
    return is_solution(sym) || is_solution(lang.dual(sym));
}

AmalgamProblem::AmalgamProblem(CompleteStructure a, CompleteStructure c, VSet b)
    : A(std::move(a)), C(std::move(c)), B(std::move(b)) {
    if (!is_subset(B, A.vertices()) || !is_subset(B, C.vertices()))
        throw std::invalid_argument("B must be contained in both A and C");
    if (set_intersect(A.vertices(), C.vertices()) != B)
        throw std::invalid_argument("A and C must intersect exactly in B");
    for (size_t i = 0; i < B.size(); ++i)
        for (size_t j = i + 1; j < B.size(); ++j)
            if (A.color(B[i], B[j]) != C.color(B[i], B[j]))
                throw std::invalid_argument("A and C disagree on B");
}

namespace {

/// Union of A and C without cross colors.
CompleteStructure glue(const AmalgamProblem& p) {
    CompleteStructure D(p.A.language_ptr());
    for (int v : set_union(p.A.vertices(), p.C.vertices())) D.add_vertex(v);
    const VSet& av = p.A.vertices();
    for (size_t i = 0; i < av.size(); ++i)
        for (size_t j = i + 1; j < av.size(); ++j)
            D.set_color(av[i], av[j], p.A.color(av[i], av[j]));
    const VSet& cv = p.C.vertices();
    for (size_t i = 0; i < cv.size(); ++i)
        for (size_t j = i + 1; j < cv.size(); ++j)
            D.set_color(cv[i], cv[j], p.C.color(cv[i], cv[j]));
    return D;
}

} // namespace

/// First solution color for a cross pair (a, c) not blocked by any b in B,
/// where blocking means the triangle r(a,b) R_i r(b,c) lands in T. Exposed to
/// the swir module through prioritised_amalgam only.
static std::optional<int> first_unblocked(const CompleteStructure& ab,
                                          const CompleteStructure& bc, int a, int c,
                                          const VSet& B, const TriangleSet& T,
                                          const PriorityOrder& pr,
                                          std::vector<std::pair<int, int>>* blocked) {
    const Language& lang = ab.language();
    for (int sym : pr.solutions()) {
        int blocker = -1;
        for (int b : B) {
            auto pat = TrianglePattern::canonical(lang, ab.color(a, b), sym, bc.color(b, c));
            if (T.contains(pat)) {
                blocker = b;
                break;
            }
        }
        if (blocker < 0) return sym;
        if (blocked) blocked->push_back({sym, blocker});
    }
    return std::nullopt;
}

AmalgamOutcome prioritised_amalgam(const AmalgamProblem& p, const TriangleSet& T,
                                   const PriorityOrder& pr, bool sides_free) {
    AmalgamOutcome out;
    CompleteStructure D = glue(p);
    for (int a : p.a_side()) {
        for (int c : p.c_side()) {
            std::vector<std::pair<int, int>> blocked;
            auto sym = first_unblocked(p.A, p.C, a, c, p.B, T, pr, &blocked);
            if (!sym) {
                out.no_color = NoAdmissibleColor{a, c, std::move(blocked)};
                return out;
            }
            D.set_color(a, c, *sym);
        }
    }
    auto w = sides_free ? embeds_forbidden_cross(D, T, p.a_side(), p.c_side())
                        : embeds_forbidden(D, T);
    if (w) {
        out.bad_triangle = ForbiddenTriangleInResult{*w};
        return out;
    }
    out.completed = std::move(D);
    return out;
}

CompleteStructure free_amalgam(const AmalgamProblem& p, int solution) {
    CompleteStructure D = glue(p);
    for (int a : p.a_side())
        for (int c : p.c_side()) D.set_color(a, c, solution);
    return D;
}

std::optional<CompleteStructure> semifree_complete(const AmalgamProblem& p,
                                                   const TriangleSet& T,
                                                   const std::vector<int>& solutions) {
    const Language& lang = p.A.language();
    CompleteStructure D = glue(p);
    VSet as = p.a_side(), cs = p.c_side();
    std::vector<std::pair<int, int>> pairs;
    for (int a : as)
        for (int c : cs) pairs.push_back({a, c});

    // Cross colors assigned so far, both directions.
    std::map<std::pair<int, int>, int> cur;
    auto col = [&](int x, int y) -> std::optional<int> {
        if (D.has_color(x, y)) return D.color(x, y);
        auto it = cur.find({x, y});
        if (it != cur.end()) return it->second;
        return std::nullopt;
    };

    std::function<bool(size_t)> go = [&](size_t k) -> bool {
        if (k == pairs.size()) {
            for (const auto& [e, sym] : cur)
                if (e.first < e.second) D.set_color(e.first, e.second, sym);
            return !embeds_forbidden(D, T).has_value();
        }
        auto [a, c] = pairs[k];
        for (int sym : solutions) {
            bool ok = true;
            for (int v : set_union(p.A.vertices(), p.C.vertices())) {
                if (v == a || v == c) continue;
                auto av = col(a, v);
                auto vc = col(v, c);
                if (av && vc &&
                    T.contains(TrianglePattern::canonical(lang, *av, sym, *vc))) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            cur[{a, c}] = sym;
            cur[{c, a}] = lang.dual(sym);
            if (go(k + 1)) return true;
            cur.erase({a, c});
            cur.erase({c, a});
        }
        return false;
    };
    if (!go(0)) return std::nullopt;
    return D;
}

} // namespace wb
