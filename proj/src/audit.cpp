#include "wb/audit.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>

namespace wb {

std::string to_string(Axiom a) {
    switch (a) {
        case Axiom::Invariance: return "invariance";
        case Axiom::Monotonicity: return "monotonicity";
        case Axiom::Transitivity: return "transitivity";
        case Axiom::Existence: return "existence";
        case Axiom::Stationarity: return "stationarity";
        case Axiom::Symmetry: return "symmetry";
    }
    return "?";
}

std::string to_string(Variant v) { return v == Variant::Left ? "left" : "right"; }

namespace {

std::vector<VSet> subsets_up_to(const VSet& W, int maxk) {
    std::vector<VSet> out;
    VSet cur;
    std::function<void(size_t)> rec = [&](size_t from) {
        out.push_back(cur);
        if (static_cast<int>(cur.size()) == maxk) return;
        for (size_t i = from; i < W.size(); ++i) {
            cur.push_back(W[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

/// Nonempty ordered tuples of distinct elements of W avoiding `excl`.
std::vector<VTuple> tuples_up_to(const VSet& W, int max_arity, const VSet& excl) {
    std::vector<VTuple> out;
    VTuple cur;
    std::function<void()> rec = [&]() {
        if (!cur.empty()) out.push_back(cur);
        if (static_cast<int>(cur.size()) == max_arity) return;
        for (int v : W) {
            if (set_contains(excl, v)) continue;
            bool used = false;
            for (int u : cur) used = used || u == v;
            if (used) continue;
            cur.push_back(v);
            rec();
            cur.pop_back();
        }
    };
    rec();
    return out;
}

/// Memoizing wrapper around backend.ind: the audits revisit the same small
/// configurations constantly.
class IndCache {
public:
    explicit IndCache(const Backend& b) : b_(b) {}
    bool operator()(const VSet& A, const VSet& B, const VSet& C) {
        auto key = std::tie(A, B, C);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        bool r = b_.ind(A, B, C);
        memo_.emplace(std::make_tuple(A, B, C), r);
        return r;
    }

private:
    const Backend& b_;
    std::map<std::tuple<VSet, VSet, VSet>, bool> memo_;
};

void record(AxiomReport& rep, std::vector<VSet> sets, std::string note = "") {
    ++rep.violation_count;
    if (rep.counterexamples.size() < 25)
        rep.counterexamples.push_back({std::move(sets), std::move(note)});
}

bool spend(AxiomReport& rep, const AuditBounds& bounds) {
    if (++rep.configurations > bounds.max_configs) {
        rep.budget_exhausted = true;
        return false;
    }
    return true;
}

/// All partial isomorphisms over W of size 1..max_size, in canonical order,
/// capped. Domain indices strictly increase so each map appears once.
std::vector<PairMap> iso_pool(const Backend& b, const VSet& W, int max_size, int cap) {
    std::vector<PairMap> pool;
    PairMap m;
    std::function<void(size_t)> rec = [&](size_t from) {
        if (static_cast<int>(pool.size()) >= cap) return;
        if (!m.empty()) pool.push_back(m);
        if (static_cast<int>(m.size()) >= max_size) return;
        for (size_t i = from; i < W.size(); ++i) {
            for (int y : W) {
                bool ok = true;
                for (auto [px, py] : m) {
                    if (py == y || !b.pair_compatible(W[i], px, y, py)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                m.push_back({W[i], y});
                rec(i + 1);
                m.pop_back();
                if (static_cast<int>(pool.size()) >= cap) return;
            }
        }
    };
    rec(0);
    return pool;
}

VSet apply_map(const PairMap& m, const VSet& s) {
    VSet out;
    for (int v : s)
        for (auto [x, y] : m)
            if (x == v) {
                out.push_back(y);
                break;
            }
    std::sort(out.begin(), out.end());
    return out;
}

void audit_invariance(Backend& b, Variant variant, const AuditBounds& bounds,
                      const VSet& W, AxiomReport& rep) {
    IndCache ind(b);
    auto pool = iso_pool(b, W, 3, bounds.max_iso_pool);
    for (const PairMap& g : pool) {
        VSet dom;
        for (auto [x, y] : g) dom.push_back(x);
        std::sort(dom.begin(), dom.end());
        auto doms = subsets_up_to(dom, static_cast<int>(dom.size()));
        for (const VSet& A : doms)
            for (const VSet& B : doms)
                for (const VSet& C : doms) {
                    if (!spend(rep, bounds)) return;
                    VSet gA = apply_map(g, A), gB = apply_map(g, B), gC = apply_map(g, C);
                    bool src = ind(A, B, C), dst = ind(gA, gB, gC);
                    if (variant == Variant::Left ? (src && !dst) : (dst && !src))
                        record(rep, {A, B, C, gA, gB, gC});
                }
    }
}

void audit_monotonicity(Backend& b, Variant variant, const AuditBounds& bounds,
                        const VSet& W, AxiomReport& rep) {
    IndCache ind(b);
    auto As = subsets_up_to(W, bounds.max_A);
    auto Bs = subsets_up_to(W, bounds.max_B);
    auto Cs = subsets_up_to(W, bounds.max_C);
    auto Ds = subsets_up_to(W, bounds.max_D);
    for (const VSet& A : As)
        for (const VSet& B : Bs)
            for (const VSet& C : Cs)
                for (const VSet& D : Ds) {
                    if (!spend(rep, bounds)) return;
                    if (variant == Variant::Left) {
                        if (!ind(A, B, set_union(C, D))) continue;
                        if (!ind(A, B, C) || !ind(A, set_union(B, C), D))
                            record(rep, {A, B, C, D});
                    } else {
                        if (!ind(set_union(A, D), B, C)) continue;
                        if (!ind(A, B, C) || !ind(D, set_union(A, B), C))
                            record(rep, {A, B, C, D});
                        if (!ind(D, set_union(A, B), D)) {
                            ++rep.displayed_reading_failures;
                            if (rep.displayed_reading_examples.size() < 5)
                                rep.displayed_reading_examples.push_back(
                                    {{A, B, C, D}, "second conclusion as displayed"});
                        }
                    }
                }
}

void audit_transitivity(Backend& b, Variant variant, const AuditBounds& bounds,
                        const VSet& W, AxiomReport& rep) {
    IndCache ind(b);
    auto As = subsets_up_to(W, bounds.max_A);
    auto Bs = subsets_up_to(W, bounds.max_B);
    auto Cs = subsets_up_to(W, bounds.max_C);
    auto Ds = subsets_up_to(W, bounds.max_D);
    for (const VSet& A : As)
        for (const VSet& B : Bs)
            for (const VSet& C : Cs) {
                if (!ind(A, B, C)) {
                    rep.configurations += static_cast<long>(Ds.size());
                    continue;
                }
                for (const VSet& D : Ds) {
                    if (!spend(rep, bounds)) return;
                    if (variant == Variant::Left) {
                        if (ind(A, set_union(B, C), D) && !ind(A, B, D))
                            record(rep, {A, B, C, D});
                    } else {
                        if (ind(D, set_union(A, B), C) && !ind(D, B, C))
                            record(rep, {A, B, C, D});
                    }
                }
            }
}

void audit_symmetry(Backend& b, Variant variant, const AuditBounds& bounds,
                    const VSet& W, AxiomReport& rep) {
    IndCache ind(b);
    auto As = subsets_up_to(W, bounds.max_A);
    auto Bs = subsets_up_to(W, bounds.max_B);
    auto Cs = subsets_up_to(W, bounds.max_C);
    for (const VSet& A : As)
        for (const VSet& B : Bs)
            for (const VSet& C : Cs) {
                if (!spend(rep, bounds)) return;
                bool fwd = ind(A, B, C), bwd = ind(C, B, A);
                if (variant == Variant::Left ? (fwd && !bwd) : (bwd && !fwd))
                    record(rep, {A, B, C});
            }
}

void audit_stationarity(Backend& b, Variant variant, const AuditBounds& bounds,
                        const VSet& W, AxiomReport& rep) {
    IndCache ind(b);
    auto Bs = subsets_up_to(W, bounds.max_B);
    auto Cs = subsets_up_to(W, bounds.max_C);
    for (const VSet& B : Bs) {
        auto tuples = tuples_up_to(W, bounds.max_arity, B);
        for (const VTuple& a : tuples)
            for (const VTuple& a2 : tuples) {
                if (a.size() != a2.size() || a == a2) continue;
                if (!b.same_type(a, a2, B)) continue;
                VSet as = to_set(a), a2s = to_set(a2);
                for (const VSet& C : Cs) {
                    if (!spend(rep, bounds)) return;
                    bool i1 = variant == Variant::Left ? ind(as, B, C) : ind(C, B, as);
                    if (!i1) continue;
                    bool i2 = variant == Variant::Left ? ind(a2s, B, C) : ind(C, B, a2s);
                    if (!i2) continue;
                    if (!b.same_type(a, a2, set_union(B, C)))
                        record(rep, {as, a2s, B, C});
                }
            }
    }
}

void audit_existence(Backend& b, Variant variant, const AuditBounds& bounds,
                     const VSet& W, AxiomReport& rep) {
    auto Bs = subsets_up_to(W, bounds.max_B);
    auto Cs = subsets_up_to(W, bounds.max_C);
    for (const VSet& B : Bs) {
        // One representative tuple per type over B.
        std::vector<VTuple> reps;
        for (const VTuple& t : tuples_up_to(W, bounds.max_arity, B)) {
            bool seen = false;
            for (const VTuple& r : reps)
                if (r.size() == t.size() && b.same_type(r, t, B)) {
                    seen = true;
                    break;
                }
            if (!seen) reps.push_back(t);
        }
        VTuple Bt(B.begin(), B.end());
        for (const VTuple& rep_t : reps)
            for (const VSet& C : Cs) {
                if (!spend(rep, bounds)) return;
                auto copy = b.clone();
                Budget budget;
                budget.max_vertices = bounds.realize_vertices;
                Side side = variant == Variant::Left ? Side::Left : Side::Right;
                std::optional<VTuple> a;
                try {
                    a = copy->realize_mapped(rep_t, Bt, Bt, C, side, budget);
                } catch (...) {
                    // Construction failure is logical, not budget.
                    record(rep, {to_set(rep_t), B, C}, "realization construction failed");
                    continue;
                }
                if (!a) {
                    ++rep.budget_failures;
                    continue;
                }
                bool type_ok = copy->same_type(*a, rep_t, B);
                VSet as = to_set(*a);
                bool ind_ok = variant == Variant::Left ? copy->ind(as, B, C)
                                                       : copy->ind(C, B, as);
                if (!type_ok || !ind_ok)
                    record(rep, {to_set(rep_t), B, C, as},
                           type_ok ? "independence violated" : "wrong type realized");
            }
    }
}

} // namespace

AxiomReport audit_axiom(Backend& backend, Axiom axiom, Variant variant,
                        const AuditBounds& bounds) {
    AxiomReport rep;
    rep.axiom = axiom;
    rep.variant = variant;
    VSet W = bounds.window.empty() ? backend.universe() : bounds.window;
    switch (axiom) {
        case Axiom::Invariance: audit_invariance(backend, variant, bounds, W, rep); break;
        case Axiom::Monotonicity: audit_monotonicity(backend, variant, bounds, W, rep); break;
        case Axiom::Transitivity: audit_transitivity(backend, variant, bounds, W, rep); break;
        case Axiom::Existence: audit_existence(backend, variant, bounds, W, rep); break;
        case Axiom::Stationarity: audit_stationarity(backend, variant, bounds, W, rep); break;
        case Axiom::Symmetry: audit_symmetry(backend, variant, bounds, W, rep); break;
    }
    return rep;
}

std::vector<AxiomReport> audit_all(Backend& backend, const AuditBounds& bounds) {
    std::vector<AxiomReport> out;
    for (Axiom a : {Axiom::Invariance, Axiom::Monotonicity, Axiom::Transitivity,
                    Axiom::Existence, Axiom::Stationarity, Axiom::Symmetry})
        for (Variant v : {Variant::Left, Variant::Right})
            out.push_back(audit_axiom(backend, a, v, bounds));
    return out;
}

namespace {

/// ind tabulated over bitmasks of a universe of at most 9 points.
class DenseTable {
public:
    DenseTable(const Backend& b, const VSet& pts) : pts_(pts) {
        n_ = static_cast<int>(pts.size());
        if (n_ > 9) throw std::invalid_argument("dense audit: universe too large");
        m_ = 1u << n_;
        b.tabulate_ind(pts, bits_);
    }

    bool get(unsigned A, unsigned B, unsigned C) const { return bits_[idx(A, B, C)] != 0; }
    /// The C-indexed row of ind values for fixed (A, B).
    const char* row(unsigned A, unsigned B) const { return bits_.data() + idx(A, B, 0); }
    unsigned count() const { return m_; }
    VSet to_set_of(unsigned mask) const {
        VSet s;
        for (int i = 0; i < n_; ++i)
            if (mask & (1u << i)) s.push_back(pts_[static_cast<size_t>(i)]);
        return s;
    }

private:
    size_t idx(unsigned A, unsigned B, unsigned C) const {
        return (static_cast<size_t>(A) * m_ + B) * m_ + C;
    }
    VSet pts_;
    int n_ = 0;
    unsigned m_ = 0;
    std::vector<char> bits_;
};

void dense_record(AxiomReport& rep, const DenseTable& t, std::vector<unsigned> masks,
                  std::string note = "") {
    std::vector<VSet> sets;
    for (unsigned m : masks) sets.push_back(t.to_set_of(m));
    record(rep, std::move(sets), std::move(note));
}

} // namespace

std::vector<AxiomReport> audit_all_dense(Backend& backend, const AuditBounds& bounds) {
    VSet U = backend.universe();
    DenseTable t(backend, U);
    unsigned m = t.count();
    std::vector<AxiomReport> out;

    for (Variant v : {Variant::Left, Variant::Right}) {
        AxiomReport rep;
        rep.axiom = Axiom::Monotonicity;
        rep.variant = v;
        rep.configurations = static_cast<long>(m) * m * m * m;
        if (v == Variant::Left) {
            for (unsigned A = 0; A < m; ++A)
                for (unsigned B = 0; B < m; ++B) {
                    const char* row = t.row(A, B);
                    for (unsigned C = 0; C < m; ++C) {
                        const char* row_bc = t.row(A, B | C);
                        bool abc = row[C];
                        for (unsigned D = 0; D < m; ++D)
                            if (row[C | D] && (!abc || !row_bc[D]))
                                dense_record(rep, t, {A, B, C, D});
                    }
                }
        } else {
            for (unsigned A = 0; A < m; ++A)
                for (unsigned B = 0; B < m; ++B) {
                    const char* row = t.row(A, B);
                    for (unsigned D = 0; D < m; ++D) {
                        const char* row_ad = t.row(A | D, B);
                        const char* row_d = t.row(D, A | B);
                        bool displayed_ok = row_d[D];
                        for (unsigned C = 0; C < m; ++C) {
                            if (!row_ad[C]) continue;
                            if (!row[C] || !row_d[C]) dense_record(rep, t, {A, B, C, D});
                            if (!displayed_ok) {
                                ++rep.displayed_reading_failures;
                                if (rep.displayed_reading_examples.size() < 5)
                                    rep.displayed_reading_examples.push_back(
                                        {{t.to_set_of(A), t.to_set_of(B), t.to_set_of(C),
                                          t.to_set_of(D)},
                                         "second conclusion as displayed"});
                            }
                        }
                    }
                }
        }
        out.push_back(std::move(rep));
    }

    for (Variant v : {Variant::Left, Variant::Right}) {
        AxiomReport rep;
        rep.axiom = Axiom::Transitivity;
        rep.variant = v;
        rep.configurations = static_cast<long>(m) * m * m * m;
        if (v == Variant::Left) {
            for (unsigned A = 0; A < m; ++A)
                for (unsigned B = 0; B < m; ++B) {
                    const char* row = t.row(A, B);
                    for (unsigned C = 0; C < m; ++C) {
                        if (!row[C]) continue;
                        const char* row_bc = t.row(A, B | C);
                        for (unsigned D = 0; D < m; ++D)
                            if (row_bc[D] && !row[D]) dense_record(rep, t, {A, B, C, D});
                    }
                }
        } else {
            for (unsigned A = 0; A < m; ++A)
                for (unsigned B = 0; B < m; ++B) {
                    const char* row = t.row(A, B);
                    for (unsigned D = 0; D < m; ++D) {
                        const char* row_dab = t.row(D, A | B);
                        const char* row_db = t.row(D, B);
                        for (unsigned C = 0; C < m; ++C)
                            if (row[C] && row_dab[C] && !row_db[C])
                                dense_record(rep, t, {A, B, C, D});
                    }
                }
        }
        out.push_back(std::move(rep));
    }

    for (Variant v : {Variant::Left, Variant::Right}) {
        AxiomReport rep;
        rep.axiom = Axiom::Symmetry;
        rep.variant = v;
        for (unsigned A = 0; A < m; ++A)
            for (unsigned B = 0; B < m; ++B)
                for (unsigned C = 0; C < m; ++C) {
                    ++rep.configurations;
                    bool fwd = t.get(A, B, C), bwd = t.get(C, B, A);
                    if (v == Variant::Left ? (fwd && !bwd) : (bwd && !fwd))
                        dense_record(rep, t, {A, B, C});
                }
        out.push_back(std::move(rep));
    }

    auto mask_of = [&](const VSet& s) {
        unsigned mk = 0;
        for (int v : s) {
            size_t i = 0;
            while (U[i] != v) ++i;
            mk |= 1u << i;
        }
        return mk;
    };

    for (Variant v : {Variant::Left, Variant::Right}) {
        AxiomReport rep;
        rep.axiom = Axiom::Invariance;
        rep.variant = v;
        auto pool = iso_pool(backend, U, 3, bounds.max_iso_pool);
        for (const PairMap& g : pool) {
            unsigned dom = 0;
            for (auto [x, y] : g) dom |= mask_of({x});
            // All (A,B,C) with every set inside dom(g).
            for (unsigned A = dom;; A = (A - 1) & dom) {
                for (unsigned B = dom;; B = (B - 1) & dom) {
                    for (unsigned C = dom;; C = (C - 1) & dom) {
                        ++rep.configurations;
                        unsigned gA = mask_of(apply_map(g, t.to_set_of(A)));
                        unsigned gB = mask_of(apply_map(g, t.to_set_of(B)));
                        unsigned gC = mask_of(apply_map(g, t.to_set_of(C)));
                        bool src = t.get(A, B, C), dst = t.get(gA, gB, gC);
                        if (v == Variant::Left ? (src && !dst) : (dst && !src))
                            dense_record(rep, t, {A, B, C, gA, gB, gC});
                        if (C == 0) break;
                    }
                    if (B == 0) break;
                }
                if (A == 0) break;
            }
        }
        out.push_back(std::move(rep));
    }

    for (Variant v : {Variant::Left, Variant::Right}) {
        AxiomReport rep;
        rep.axiom = Axiom::Stationarity;
        rep.variant = v;
        for (unsigned B = 0; B < m; ++B) {
            VSet Bset = t.to_set_of(B);
            auto tuples = tuples_up_to(U, bounds.max_arity, Bset);
            for (const VTuple& a : tuples)
                for (const VTuple& a2 : tuples) {
                    if (a.size() != a2.size() || a == a2) continue;
                    if (!backend.same_type(a, a2, Bset)) continue;
                    unsigned am = mask_of(to_set(a)), a2m = mask_of(to_set(a2));
                    for (unsigned C = 0; C < m; ++C) {
                        ++rep.configurations;
                        bool i1 = v == Variant::Left ? t.get(am, B, C) : t.get(C, B, am);
                        if (!i1) continue;
                        bool i2 = v == Variant::Left ? t.get(a2m, B, C) : t.get(C, B, a2m);
                        if (!i2) continue;
                        if (!backend.same_type(a, a2, set_union(Bset, t.to_set_of(C))))
                            dense_record(rep, t, {am, a2m, B, C});
                    }
                }
        }
        out.push_back(std::move(rep));
    }

    // Existence grows the universe, so it runs on clones with direct ind.
    AuditBounds full = bounds;
    full.window = U;
    full.max_B = static_cast<int>(U.size());
    full.max_C = static_cast<int>(U.size());
    for (Variant v : {Variant::Left, Variant::Right})
        out.push_back(audit_axiom(backend, Axiom::Existence, v, full));
    return out;
}

MonotonicityInstance monotonicity_decompose(const Backend& backend, Variant variant,
                                            const VSet& A, const VSet& B,
                                            const VSet& C, const VSet& D) {
    MonotonicityInstance r{};
    if (variant == Variant::Left) {
        r.premise = backend.ind(A, B, set_union(C, D));
        r.conclusion1 = backend.ind(A, B, C);
        r.conclusion2 = backend.ind(A, set_union(B, C), D);
        r.conclusion2_displayed = r.conclusion2;
    } else {
        r.premise = backend.ind(set_union(A, D), B, C);
        r.conclusion1 = backend.ind(A, B, C);
        r.conclusion2 = backend.ind(D, set_union(A, B), C);
        r.conclusion2_displayed = backend.ind(D, set_union(A, B), D);
    }
    return r;
}

} // namespace wb
