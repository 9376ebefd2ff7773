#include "wb/iso.hpp"

#include <functional>
#include <set>
#include <stdexcept>

namespace wb {

namespace {

bool extend_iso(const CompleteStructure& A, const CompleteStructure& B,
                const VSet& averts, std::map<int, int>& m, std::set<int>& used,
                size_t next) {
    while (next < averts.size() && m.count(averts[next])) ++next;
    if (next == averts.size()) return true;
    int a = averts[next];
    for (int b : B.vertices()) {
        if (used.count(b)) continue;
        bool ok = true;
        for (const auto& [x, fx] : m) {
            if (A.color(x, a) != B.color(fx, b)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        m[a] = b;
        used.insert(b);
        if (extend_iso(A, B, averts, m, used, next + 1)) return true;
        m.erase(a);
        used.erase(b);
    }
    return false;
}

} // namespace

std::optional<StructureEmbedding> find_isomorphism(const CompleteStructure& A,
                                                   const CompleteStructure& B,
                                                   const std::map<int, int>& fixed) {
    if (A.size() != B.size()) return std::nullopt;
    std::map<int, int> m;
    std::set<int> used;
    for (const auto& [x, y] : fixed) {
        if (!A.has_vertex(x) || !B.has_vertex(y)) return std::nullopt;
        if (!used.insert(y).second) return std::nullopt;
        m[x] = y;
    }
    // Reject fixed maps that already clash on colors.
    for (const auto& [x, fx] : m)
        for (const auto& [y, fy] : m)
            if (x != y && A.color(x, y) != B.color(fx, fy)) return std::nullopt;
    if (!extend_iso(A, B, A.vertices(), m, used, 0)) return std::nullopt;
    StructureEmbedding e;
    e.map = std::move(m);
    return e;
}

namespace {

// Lexicographic minimization of the color word (colors (perm[i], perm[j]) for
// i < j, emitted column by column as each vertex is placed), with prefix
// pruning against the best complete word found so far.
struct CanonSearch {
    const CompleteStructure& S;
    const VSet& verts;
    std::vector<int> perm;
    std::vector<bool> used;
    std::vector<int> word;
    std::vector<int> best_word;
    std::vector<int> best_perm;
    bool have_best = false;

    explicit CanonSearch(const CompleteStructure& s)
        : S(s), verts(s.vertices()), used(verts.size(), false) {}

    // `tight`: word so far equals the corresponding prefix of best_word.
    void run(bool tight) {
        if (perm.size() == verts.size()) {
            if (!have_best || word < best_word) {
                best_word = word;
                best_perm = perm;
                have_best = true;
            }
            return;
        }
        for (size_t vi = 0; vi < verts.size(); ++vi) {
            if (used[vi]) continue;
            int v = verts[vi];
            size_t base = word.size();
            bool prune = false;
            bool still_tight = tight && have_best;
            for (size_t i = 0; i < perm.size(); ++i) {
                int c = S.color(perm[i], v);
                if (still_tight) {
                    int b = best_word[base + i];
                    if (c > b) {
                        prune = true;
                        break;
                    }
                    if (c < b) still_tight = false;
                }
                word.push_back(c);
            }
            if (!prune) {
                used[vi] = true;
                perm.push_back(v);
                run(still_tight || !have_best);
                perm.pop_back();
                used[vi] = false;
            }
            word.resize(base);
        }
    }
};

} // namespace

CompleteStructure canonical_form(const CompleteStructure& S,
                                 const std::vector<int>& fixed_prefix, int max_size) {
    if (S.size() > max_size)
        throw std::length_error("canonical_form: structure exceeds size bound");
    CanonSearch cs(S);
    for (int v : fixed_prefix) {
        auto it = std::lower_bound(cs.verts.begin(), cs.verts.end(), v);
        if (it == cs.verts.end() || *it != v)
            throw std::invalid_argument("canonical_form: fixed vertex not in structure");
        size_t vi = static_cast<size_t>(it - cs.verts.begin());
        if (cs.used[vi]) throw std::invalid_argument("canonical_form: repeated fixed vertex");
        for (size_t i = 0; i < cs.perm.size(); ++i)
            cs.word.push_back(S.color(cs.perm[i], v));
        cs.used[vi] = true;
        cs.perm.push_back(v);
    }
    cs.run(true);
    CompleteStructure out(S.language_ptr());
    for (int i = 0; i < S.size(); ++i) out.add_vertex(i);
    const auto& p = cs.best_perm;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            out.set_color(static_cast<int>(i), static_cast<int>(j), S.color(p[i], p[j]));
    return out;
}

namespace {

void extend_colorings(CompleteStructure& S, const TriangleSet& T, int v,
                      const VSet& olds, size_t next,
                      const std::function<void(const CompleteStructure&)>& sink) {
    if (next == olds.size()) {
        sink(S);
        return;
    }
    int u = olds[next];
    for (int sym = 0; sym < S.language().symbol_count(); ++sym) {
        S.set_color(u, v, sym);
        bool ok = true;
        for (size_t i = 0; i < next && ok; ++i) {
            if (T.contains(triangle_of(S, olds[i], u, v))) ok = false;
        }
        if (ok) extend_colorings(S, T, v, olds, next + 1, sink);
    }
}

} // namespace

std::vector<CompleteStructure> enumerate_forb(LanguagePtr lang, const TriangleSet& T,
                                              int n, int max_n) {
    if (n < 0 || n > max_n) throw std::length_error("enumerate_forb: size bound exceeded");
    std::set<CompleteStructure> reps;
    {
        CompleteStructure one(lang);
        if (n >= 1) one.add_vertex(0);
        reps.insert(one);
    }
    for (int s = 2; s <= n; ++s) {
        std::set<CompleteStructure> next;
        for (const auto& r : reps) {
            CompleteStructure S = r;
            int v = s - 1;
            S.add_vertex(v);
            VSet olds = r.vertices();
            extend_colorings(S, T, v, olds, 0, [&](const CompleteStructure& full) {
                next.insert(canonical_form(full));
            });
        }
        reps = std::move(next);
    }
    return {reps.begin(), reps.end()};
}

std::vector<CompleteStructure> enumerate_extensions(const CompleteStructure& base,
                                                    const TriangleSet& T, int extra,
                                                    int first_id) {
    std::vector<CompleteStructure> out;
    std::set<CompleteStructure> seen;
    std::vector<int> prefix(base.vertices().begin(), base.vertices().end());
    std::function<void(CompleteStructure&, int)> go = [&](CompleteStructure& S, int k) {
        if (k == extra) {
            auto key = canonical_form(S, prefix);
            if (seen.insert(key).second) out.push_back(S);
            return;
        }
        int v = first_id + k;
        CompleteStructure S2 = S;
        S2.add_vertex(v);
        VSet olds = S.vertices();
        extend_colorings(S2, T, v, olds, 0, [&](const CompleteStructure& full) {
            CompleteStructure next = full;
            go(next, k + 1);
        });
    };
    CompleteStructure start = base;
    go(start, 0);
    return out;
}

} // namespace wb
