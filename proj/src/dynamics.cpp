#include "wb/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

#include "wb/tower.hpp"

namespace wb {

namespace {

VTuple as_tuple(const VSet& s) { return VTuple(s.begin(), s.end()); }

/// Realizes the transported type of `rep` along from -> to, keeping the
/// components of rep that already lie on the from side forced to their
/// images. Wraps the backend call so completion failures and invalid maps
/// surface as error notes instead of exceptions.
struct Transport {
    std::optional<VTuple> t;
    bool budget = false;
    std::string err;
};

Transport transport(Backend& bk, const VTuple& rep, const VTuple& from, const VTuple& to,
                    const VSet& C, Side side, Budget& budget) {
    Transport out;
    std::vector<int> val(rep.size(), -1);
    std::vector<char> forced(rep.size(), 0);
    VTuple missing;
    for (size_t i = 0; i < rep.size(); ++i) {
        for (size_t k = 0; k < from.size(); ++k)
            if (from[k] == rep[i]) {
                val[i] = to[k];
                forced[i] = 1;
                break;
            }
        if (!forced[i]) missing.push_back(rep[i]);
    }
    if (missing.empty()) {
        out.t = VTuple(val.begin(), val.end());
        return out;
    }
    try {
        auto fresh = bk.realize_mapped(missing, from, to, C, side, budget);
        if (!fresh) {
            // Backends report both budget exhaustion and contradictory
            // constraints as a failed realization; tell them apart here.
            out.budget = budget.max_nodes <= 0;
            out.err = out.budget ? "realization budget exhausted"
                                 : "constrained realization failed";
            return out;
        }
        size_t j = 0;
        for (size_t i = 0; i < rep.size(); ++i)
            if (!forced[i]) val[i] = (*fresh)[j++];
        out.t = VTuple(val.begin(), val.end());
    } catch (const CompletionFailure&) {
        out.err = "prioritised completion failed during realization";
    } catch (const std::invalid_argument& e) {
        out.err = e.what();
    }
    return out;
}

/// A composite of partial maps viewed in chosen directions, applied in
/// vector order (fs[0] first). Conjugation pipelines pass these around so
/// that every extension made while applying a composite lands in the shared
/// underlying maps.
struct Chain {
    std::vector<IsoRef> fs;

    Chain() = default;
    Chain(IsoRef g) : fs{g} {}

    Chain inv() const {
        Chain c;
        for (auto it = fs.rbegin(); it != fs.rend(); ++it) c.fs.push_back(it->rev());
        return c;
    }
    /// a g a^{-1} as a chain: a^{-1} applied first.
    static Chain conj(const Chain& a, const Chain& g) {
        Chain c = a.inv();
        c.fs.insert(c.fs.end(), g.fs.begin(), g.fs.end());
        c.fs.insert(c.fs.end(), a.fs.begin(), a.fs.end());
        return c;
    }
};

struct ChainApply {
    std::optional<VTuple> t;
    bool budget = false;
    std::string err;
};

/// Applies the chain, extending the factor maps at missing points. The
/// optional independence constraint is passed to the realization of the
/// final factor.
ChainApply chain_apply(Backend& bk, const Chain& g, VTuple t, Budget& budget,
                       const VSet& C = {}, Side side = Side::Left) {
    ChainApply out;
    try {
        for (size_t i = 0; i < g.fs.size(); ++i) {
            bool last = i + 1 == g.fs.size();
            auto r = apply_ext(bk, g.fs[i], t, budget, last ? C : VSet{}, side);
            if (!r) {
                out.budget = budget.max_nodes <= 0;
                out.err = out.budget ? "realization budget exhausted"
                                     : "constrained realization failed";
                return out;
            }
            t = *r;
        }
        out.t = std::move(t);
    } catch (const CompletionFailure&) {
        out.err = "prioritised completion failed during realization";
    } catch (const std::invalid_argument& e) {
        out.err = e.what();
    }
    return out;
}

Chain local_chain(std::vector<PartialIso*> factors) {
    Chain c;
    for (PartialIso* f : factors) c.fs.push_back(IsoRef{f, false});
    return c;
}

/// Adds the pairs s_i -> t_i to m; returns false on an injectivity or
/// well-definedness conflict.
bool add_pairs(PartialIso& m, const VTuple& s, const VTuple& t) {
    if (s.size() != t.size()) return false;
    try {
        for (size_t i = 0; i < s.size(); ++i) m.add(s[i], t[i]);
    } catch (const std::invalid_argument&) {
        return false;
    }
    return true;
}

DynResult<MovingMaxWitness> moving_witness_core(Backend& bk, const Chain& g, const VSet& X,
                                                const VTuple& rep, MoveSide side,
                                                Budget& budget) {
    using R = DynResult<MovingMaxWitness>;
    for (int v : to_set(rep))
        if (set_contains(X, v))
            return R::fail(DynStatus::HypothesisFailed, 0,
                           "the type must be non-algebraic: its representative meets the base");
    if (g.fs.size() == 1) {
        PartialIso m = g.fs[0].materialize();
        if (!m.empty() && m.is_identity())
            return R::fail(DynStatus::NotFound, 1,
                           "the map is the identity on its domain; its canonical extension "
                           "moves nothing");
    }
    // Points the candidate realization may want to be independent from.
    VSet rel = X;
    for (const IsoRef& f : g.fs) {
        rel = set_union(rel, to_set(f.domain_tuple()));
        rel = set_union(rel, to_set(f.range_tuple()));
    }
    VTuple Xt = as_tuple(X);
    std::string lastErr;
    // Constraint strategies. A backend may report a contradictory constraint
    // as a failed realization (or ignore the constraint entirely), so every
    // combination is tried and the witness condition is re-checked directly
    // each time. The side the witness asks for comes first.
    Side near = side == MoveSide::R ? Side::Left : Side::Right;
    Side far = side == MoveSide::R ? Side::Right : Side::Left;
    for (Side aSide : {near, far}) {
        for (int aCk = 0; aCk < 2; ++aCk) {
            const VSet& aC = aCk ? X : rel;
            for (int gk = 0; gk < 4; ++gk) {
                // A fresh realization per attempt: applying the chain commits
                // the image, so re-applying to the same tuple is a lookup.
                auto ar = transport(bk, rep, Xt, Xt, aC, aSide, budget);
                if (!ar.t) {
                    lastErr = ar.err;
                    break;
                }
                VSet gC = gk < 2 ? set_union(X, to_set(*ar.t)) : VSet{};
                Side gSide = (gk % 2 == 0) ? far : near;
                auto gr = chain_apply(bk, g, *ar.t, budget, gC, gSide);
                if (!gr.t) {
                    lastErr = gr.err;
                    continue;
                }
                MovingMaxWitness w{rep, X, side, *ar.t, *gr.t};
                if (w.verify(bk)) return R::of(std::move(w));
            }
        }
    }
    if (budget.max_nodes <= 0)
        return R::fail(DynStatus::BudgetExhausted, 2, "realization budget exhausted");
    std::string note = "no realization moved independently on the requested side";
    if (!lastErr.empty()) note += ": " + lastErr;
    return R::fail(DynStatus::NotFound, 2, note);
}

DynResult<SlideWitness> tz35_core(Backend& bk, const Chain& g, const VSet& X, const VSet& Y,
                                  const VSet& C, const VTuple& x, Budget& budget) {
    using R = DynResult<SlideWitness>;
    VSet XY = set_union(X, Y);
    for (int v : to_set(x))
        if (set_contains(XY, v))
            return R::fail(DynStatus::HypothesisFailed, 0,
                           "the tuple must be non-algebraic over X and Y");
    auto im = chain_apply(bk, g, as_tuple(X), budget);
    if (im.budget) return R::fail(DynStatus::BudgetExhausted, 0, im.err);
    if (!im.t) return R::fail(DynStatus::HypothesisFailed, 0, im.err);
    if (to_set(*im.t) != Y)
        return R::fail(DynStatus::HypothesisFailed, 0, "the map does not carry X onto Y");
    if (!bk.ind(X, Y, C))
        return R::fail(DynStatus::HypothesisFailed, 0, "precondition X ind_Y C fails");

    // A realization x' of tp(x/XY) whose image the map moves independently.
    auto mw = moving_witness_core(bk, g, XY, x, MoveSide::L, budget);
    if (!mw.ok()) return R::fail(mw.status, 1, mw.note);
    const VTuple& xp = mw.value->a;
    const VTuple& gxp = mw.value->ga;

    // y realizing tp(g(x')/XYx') transported along x' -> x, independent from C.
    VTuple from = tuple_concat(as_tuple(XY), xp);
    VTuple to = tuple_concat(as_tuple(XY), x);
    auto yr = transport(bk, gxp, from, to, C, Side::Left, budget);
    if (yr.budget) return R::fail(DynStatus::BudgetExhausted, 2, yr.err);
    if (!yr.t) return R::fail(DynStatus::NotFound, 2, yr.err);
    const VTuple& y = *yr.t;

    PartialIso a = PartialIso::identity_on(XY);
    if (!add_pairs(a, xp, x) || !add_pairs(a, gxp, y))
        return R::fail(DynStatus::VerificationFailed, 3,
                       "witness assignments conflict as a partial map");
    if (!a.valid_on(bk))
        return R::fail(DynStatus::VerificationFailed, 3,
                       "witness map is not structure-preserving");
    if (!bk.ind(to_set(y), Y, C))
        return R::fail(DynStatus::VerificationFailed, 4,
                       "transitivity chain fails: the relocated image is not "
                       "independent from C over Y");
    return R::of(SlideWitness{std::move(a), y});
}

DynResult<PartialIso> tz36_core(Backend& bk, const Chain& g, const VSet& X, const VSet& Y,
                                const VTuple& x, const VTuple& y, Budget& budget) {
    using R = DynResult<PartialIso>;
    VSet XY = set_union(X, Y);
    for (int v : set_union(to_set(x), to_set(y)))
        if (set_contains(XY, v))
            return R::fail(DynStatus::HypothesisFailed, 0,
                           "the tuples must be non-algebraic over X and Y");
    auto im = chain_apply(bk, g, as_tuple(X), budget);
    if (im.budget) return R::fail(DynStatus::BudgetExhausted, 0, im.err);
    if (!im.t) return R::fail(DynStatus::HypothesisFailed, 0, im.err);
    if (to_set(*im.t) != Y)
        return R::fail(DynStatus::HypothesisFailed, 0, "the map does not carry X onto Y");
    auto gx = chain_apply(bk, g, x, budget);
    if (gx.budget) return R::fail(DynStatus::BudgetExhausted, 0, gx.err);
    if (!gx.t) return R::fail(DynStatus::HypothesisFailed, 0, gx.err);
    if (!bk.same_type(*gx.t, y, Y))
        return R::fail(DynStatus::HypothesisFailed, 0,
                       "the map does not carry tp(x/X) to tp(y/Y)");
    if (!bk.ind(to_set(x), X, set_union(to_set(y), Y)))
        return R::fail(DynStatus::HypothesisFailed, 0, "precondition x ind_X yY fails");
    if (!bk.ind(to_set(y), Y, X))
        return R::fail(DynStatus::HypothesisFailed, 0, "precondition y ind_Y X fails");

    // y' realizing tp(y/XY) independent from g(Y).
    auto gY = chain_apply(bk, g, as_tuple(Y), budget);
    if (gY.budget) return R::fail(DynStatus::BudgetExhausted, 1, gY.err);
    if (!gY.t) return R::fail(DynStatus::NotFound, 1, gY.err);
    VTuple XYt = as_tuple(XY);
    auto yp = transport(bk, y, XYt, XYt, to_set(*gY.t), Side::Left, budget);
    if (yp.budget) return R::fail(DynStatus::BudgetExhausted, 1, yp.err);
    if (!yp.t) return R::fail(DynStatus::NotFound, 1, yp.err);

    // y'' realizing tp(y'/XYg(Y)) moved independently on the right.
    auto mw = moving_witness_core(bk, g, set_union(XY, to_set(*gY.t)), *yp.t, MoveSide::R,
                                  budget);
    if (!mw.ok()) return R::fail(mw.status, 2, mw.note);
    const VTuple& ypp = mw.value->a;

    // The preimage u = g^{-1}(y''); stationarity says u y'' and x y have the
    // same type over XY, which the direct validity check below confirms.
    auto u = chain_apply(bk, g.inv(), ypp, budget);
    if (u.budget) return R::fail(DynStatus::BudgetExhausted, 3, u.err);
    if (!u.t) return R::fail(DynStatus::NotFound, 3, u.err);

    PartialIso a = PartialIso::identity_on(XY);
    if (!add_pairs(a, *u.t, x) || !add_pairs(a, ypp, y))
        return R::fail(DynStatus::VerificationFailed, 4,
                       "witness assignments conflict as a partial map");
    if (!a.valid_on(bk))
        return R::fail(DynStatus::VerificationFailed, 4,
                       "stationarity step fails: the relocated preimage and x disagree "
                       "over the base");
    return R::of(std::move(a));
}

struct Tz32Out {
    std::vector<PartialIso> a;
    std::vector<VSet> Y;
};

DynResult<Tz32Out> tz32_core(Backend& bk, const std::vector<Chain>& g,
                             const std::vector<VSet>& X, Budget& budget) {
    using R = DynResult<Tz32Out>;
    if (g.size() != 4 || X.size() != 5)
        return R::fail(DynStatus::HypothesisFailed, 0, "expected four maps and five sets");
    for (int i = 0; i < 4; ++i) {
        auto im = chain_apply(bk, g[i], as_tuple(X[i]), budget);
        if (im.budget) return R::fail(DynStatus::BudgetExhausted, 0, im.err);
        if (!im.t) return R::fail(DynStatus::HypothesisFailed, 0, im.err);
        if (to_set(*im.t) != X[static_cast<size_t>(i) + 1])
            return R::fail(DynStatus::HypothesisFailed, 0,
                           "the maps do not carry X_{i-1} onto X_i");
    }

    // Steps 1-2: the extension X1' := X_0 ... X_4 of X_1 makes the first
    // independence requirement hold outright, so the first relocating map can
    // be the identity; X2', X3', X4' are the composite images of X1'.
    VSet X1p = X[0];
    for (int i = 1; i < 5; ++i) X1p = set_union(X1p, X[i]);
    auto i2 = chain_apply(bk, g[1], as_tuple(X1p), budget);
    if (i2.budget) return R::fail(DynStatus::BudgetExhausted, 2, i2.err);
    if (!i2.t) return R::fail(DynStatus::NotFound, 2, i2.err);
    auto i3 = chain_apply(bk, g[2], *i2.t, budget);
    if (i3.budget) return R::fail(DynStatus::BudgetExhausted, 2, i3.err);
    if (!i3.t) return R::fail(DynStatus::NotFound, 2, i3.err);
    auto i4 = chain_apply(bk, g[3], *i3.t, budget);
    if (i4.budget) return R::fail(DynStatus::BudgetExhausted, 2, i4.err);
    if (!i4.t) return R::fail(DynStatus::NotFound, 2, i4.err);
    VSet X2p = to_set(*i2.t), X3p = to_set(*i3.t), X4p = to_set(*i4.t);
    VSet C234 = set_union(X2p, set_union(X3p, X4p));
    if (!is_subset(X[2], X2p) || !is_subset(X[3], X3p) || !is_subset(X[4], X4p))
        return R::fail(DynStatus::VerificationFailed, 2,
                       "composite images fail to extend the given sets");
    if (!bk.ind(X[0], X1p, C234))
        return R::fail(DynStatus::VerificationFailed, 2,
                       "X_0 is not independent from the images over the extended base");

    // Step 3: relocate the g_1-preimage of X1' to the independent side,
    // giving X0' and the conjugating map f that fixes X1'.
    auto d0 = chain_apply(bk, g[0].inv(), as_tuple(X1p), budget);
    if (d0.budget) return R::fail(DynStatus::BudgetExhausted, 3, d0.err);
    if (!d0.t) return R::fail(DynStatus::NotFound, 3, d0.err);
    auto D3 = lemma_addset_witness(bk, X1p, X1p, C234, *d0.t, 2, budget);
    if (!D3.ok()) return R::fail(D3.status, 3, D3.note);
    PartialIso f = PartialIso::identity_on(X1p);
    if (!add_pairs(f, *d0.t, *D3.value) || !f.valid_on(bk))
        return R::fail(DynStatus::VerificationFailed, 3,
                       "relocating map for the preimage side is not a partial isomorphism");
    VSet X0p = to_set(*D3.value);
    if (!is_subset(X[0], X0p))
        return R::fail(DynStatus::VerificationFailed, 3, "X_0' fails to extend X_0");
    if (!bk.ind(X0p, X1p, C234))
        return R::fail(DynStatus::VerificationFailed, 3,
                       "X_0' is not independent from X_2'X_3'X_4' over X_1'");
    Chain h1 = Chain::conj(local_chain({&f}), g[0]);

    // Step 4: Y_3 := X1'X2'X3'X4'; relocate the h_3 / h_2h_3 preimages of Y_3
    // so that X_4' stays independent, producing Y_2 and Y_1.
    VSet Y3 = set_union(X1p, C234);
    VTuple Y3t = as_tuple(Y3);
    auto j3 = chain_apply(bk, g[2].inv(), Y3t, budget);
    if (j3.budget) return R::fail(DynStatus::BudgetExhausted, 4, j3.err);
    if (!j3.t) return R::fail(DynStatus::NotFound, 4, j3.err);
    auto j2 = chain_apply(bk, g[1].inv(), *j3.t, budget);
    if (j2.budget) return R::fail(DynStatus::BudgetExhausted, 4, j2.err);
    if (!j2.t) return R::fail(DynStatus::NotFound, 4, j2.err);
    VTuple pre = tuple_concat(*j3.t, *j2.t);
    auto D4 = lemma_addset_witness(bk, X4p, Y3, Y3, pre, 1, budget);
    if (!D4.ok()) return R::fail(D4.status, 4, D4.note);
    PartialIso amap = PartialIso::identity_on(Y3);
    if (!add_pairs(amap, pre, *D4.value) || !amap.valid_on(bk))
        return R::fail(DynStatus::VerificationFailed, 4,
                       "relocating map for the preimages of Y_3 is not a partial "
                       "isomorphism");
    VTuple y2t(D4.value->begin(), D4.value->begin() + Y3t.size());
    VTuple y1t(D4.value->begin() + Y3t.size(), D4.value->end());
    VSet Y2 = to_set(y2t), Y1 = to_set(y1t);
    if (!is_subset(X2p, Y2) || !is_subset(X1p, Y1))
        return R::fail(DynStatus::VerificationFailed, 4,
                       "Y_2 or Y_1 fails to extend the corresponding set");
    if (!bk.ind(X4p, Y3, set_union(Y1, Y2)))
        return R::fail(DynStatus::VerificationFailed, 4,
                       "X_4' is not independent from Y_1Y_2 over Y_3");

    // Step 5: relocate h_4(Y_3) to the independent side, producing Y_4.
    auto m4 = chain_apply(bk, g[3], Y3t, budget);
    if (m4.budget) return R::fail(DynStatus::BudgetExhausted, 5, m4.err);
    if (!m4.t) return R::fail(DynStatus::NotFound, 5, m4.err);
    auto D5 = lemma_addset_witness(bk, Y3, Y3, set_union(Y1, Y2), *m4.t, 2, budget);
    if (!D5.ok()) return R::fail(D5.status, 5, D5.note);
    PartialIso bmap = PartialIso::identity_on(Y3);
    if (!add_pairs(bmap, *m4.t, *D5.value) || !bmap.valid_on(bk))
        return R::fail(DynStatus::VerificationFailed, 5,
                       "relocating map for h_4(Y_3) is not a partial isomorphism");
    VSet Y4 = to_set(*D5.value);
    if (!is_subset(X4p, Y4))
        return R::fail(DynStatus::VerificationFailed, 5, "Y_4 fails to extend X_4'");
    if (!bk.ind(Y4, Y3, set_union(Y1, Y2)))
        return R::fail(DynStatus::VerificationFailed, 5,
                       "Y_4 is not independent from Y_1Y_2 over Y_3");

    // Step 6: if X_0' is not yet independent from Y_1..Y_4 over X_1',
    // relocate Y_1Y_2Y_4 (fixing Y_3 = X_1'..X_4') to make it so; the
    // relocation preserves the step-5 conclusion by invariance.
    PartialIso sigma = PartialIso::identity_on(Y3);
    bool use_sigma = false;
    VSet Yall = set_union(set_union(Y1, Y2), set_union(Y3, Y4));
    if (!bk.ind(X0p, X1p, Yall)) {
        use_sigma = true;
        VTuple yt = as_tuple(Yall);
        auto D6 = lemma_addset_witness(bk, X0p, X1p, C234, yt, 1, budget);
        if (!D6.ok()) return R::fail(D6.status, 6, D6.note);
        if (!add_pairs(sigma, yt, *D6.value) || !sigma.valid_on(bk))
            return R::fail(DynStatus::VerificationFailed, 6,
                           "relocating map for Y_1..Y_4 is not a partial isomorphism");
        Y1 = *sigma.apply_set(Y1);
        Y2 = *sigma.apply_set(Y2);
        Y4 = *sigma.apply_set(Y4);
        Yall = set_union(set_union(Y1, Y2), set_union(Y3, Y4));
        if (!bk.ind(X0p, X1p, Yall))
            return R::fail(DynStatus::VerificationFailed, 6,
                           "X_0' is not independent from the relocated Y_1..Y_4");
        if (!bk.ind(Y4, Y3, set_union(Y1, Y2)))
            return R::fail(DynStatus::VerificationFailed, 6,
                           "invariance fails: the relocation broke Y_4 ind_{Y_3} Y_1Y_2");
    }
    VSet Y234 = set_union(Y2, set_union(Y3, Y4));
    if (!bk.ind(X0p, Y1, Y234))
        return R::fail(DynStatus::VerificationFailed, 6,
                       "base monotonicity fails when enlarging X_1' to Y_1");

    // Final step: relocate the h_1-preimage of X_0'Y_1 to get Y_0 and the
    // conjugating map c that fixes X_0'Y_1.
    VSet A6 = set_union(X0p, Y1);
    VTuple A6t = as_tuple(A6);
    auto p1 = chain_apply(bk, h1.inv(), A6t, budget);
    if (p1.budget) return R::fail(DynStatus::BudgetExhausted, 7, p1.err);
    if (!p1.t) return R::fail(DynStatus::NotFound, 7, p1.err);
    auto D7 = lemma_addset_witness(bk, A6, Y1, Y234, *p1.t, 2, budget);
    if (!D7.ok()) return R::fail(D7.status, 7, D7.note);
    PartialIso cmap = PartialIso::identity_on(A6);
    if (!add_pairs(cmap, *p1.t, *D7.value) || !cmap.valid_on(bk))
        return R::fail(DynStatus::VerificationFailed, 7,
                       "relocating map for the h_1-preimage is not a partial isomorphism");
    VSet Y0;
    for (size_t j = 0; j < A6t.size(); ++j)
        if (set_contains(Y1, A6t[j])) Y0 = set_insert(Y0, (*D7.value)[j]);
    if (!is_subset(X[0], Y0))
        return R::fail(DynStatus::VerificationFailed, 7, "Y_0 fails to extend X_0");
    if (!bk.ind(Y0, Y1, Y234))
        return R::fail(DynStatus::VerificationFailed, 7,
                       "Y_0 is not independent from Y_2Y_3Y_4 over Y_1");

    // Assemble the conjugators a_1 = c f, a_2 = a_3 = sigma a, a_4 = sigma b
    // and materialize them with every pair the certificate replay needs.
    Tz32Out out;
    out.Y = {Y0, Y1, Y2, Y3, Y4};
    std::vector<std::vector<PartialIso*>> factors(4);
    factors[0] = {&f, &cmap};
    factors[1] = {&amap};
    factors[2] = {&amap};
    factors[3] = {&bmap};
    if (use_sigma) {
        factors[1].push_back(&sigma);
        factors[2].push_back(&sigma);
        factors[3].push_back(&sigma);
    }
    out.a.resize(4);
    for (int i = 0; i < 4; ++i) {
        Chain ai = local_chain(factors[static_cast<size_t>(i)]);
        PartialIso rec;
        VSet fix = set_union(X[static_cast<size_t>(i)], X[static_cast<size_t>(i) + 1]);
        auto fx = chain_apply(bk, ai, as_tuple(fix), budget);
        if (fx.budget) return R::fail(DynStatus::BudgetExhausted, 8, fx.err);
        if (!fx.t || *fx.t != as_tuple(fix))
            return R::fail(DynStatus::VerificationFailed, 8,
                           "a conjugator fails to fix X_{i-1}X_i pointwise");
        if (!add_pairs(rec, as_tuple(fix), *fx.t))
            return R::fail(DynStatus::VerificationFailed, 8, "conjugator pairs conflict");
        VTuple yprev = as_tuple(out.Y[static_cast<size_t>(i)]);
        auto u = chain_apply(bk, ai.inv(), yprev, budget);
        if (u.budget) return R::fail(DynStatus::BudgetExhausted, 8, u.err);
        if (!u.t) return R::fail(DynStatus::NotFound, 8, u.err);
        auto q = chain_apply(bk, g[static_cast<size_t>(i)], *u.t, budget);
        if (q.budget) return R::fail(DynStatus::BudgetExhausted, 8, q.err);
        if (!q.t) return R::fail(DynStatus::NotFound, 8, q.err);
        auto r = chain_apply(bk, ai, *q.t, budget);
        if (r.budget) return R::fail(DynStatus::BudgetExhausted, 8, r.err);
        if (!r.t) return R::fail(DynStatus::NotFound, 8, r.err);
        if (to_set(*r.t) != out.Y[static_cast<size_t>(i) + 1])
            return R::fail(DynStatus::VerificationFailed, 8,
                           "the conjugated map does not carry Y_{i-1} onto Y_i");
        if (!add_pairs(rec, *u.t, yprev) || !add_pairs(rec, *q.t, *r.t))
            return R::fail(DynStatus::VerificationFailed, 8, "conjugator pairs conflict");
        out.a[static_cast<size_t>(i)] = std::move(rec);
    }
    return R::of(std::move(out));
}

struct Tz34Out {
    std::vector<PartialIso> a;
    std::vector<VTuple> x;
};

DynResult<Tz34Out> tz34_core(Backend& bk, const std::vector<Chain>& g,
                             const std::vector<VSet>& Y, const VTuple& x0,
                             const VTuple& x4, Budget& budget) {
    using R = DynResult<Tz34Out>;
    if (g.size() != 4 || Y.size() != 5)
        return R::fail(DynStatus::HypothesisFailed, 0, "expected four maps and five sets");
    for (int v : to_set(x0))
        if (set_contains(Y[0], v))
            return R::fail(DynStatus::HypothesisFailed, 0, "x_0 must avoid Y_0");
    for (int v : to_set(x4))
        if (set_contains(Y[4], v))
            return R::fail(DynStatus::HypothesisFailed, 0, "x_4 must avoid Y_4");
    VTuple z = x0;
    for (int i = 0; i < 4; ++i) {
        auto im = chain_apply(bk, g[static_cast<size_t>(i)],
                              as_tuple(Y[static_cast<size_t>(i)]), budget);
        if (im.budget) return R::fail(DynStatus::BudgetExhausted, 0, im.err);
        if (!im.t) return R::fail(DynStatus::HypothesisFailed, 0, im.err);
        if (to_set(*im.t) != Y[static_cast<size_t>(i) + 1])
            return R::fail(DynStatus::HypothesisFailed, 0,
                           "the maps do not carry Y_{i-1} onto Y_i");
        auto zi = chain_apply(bk, g[static_cast<size_t>(i)], z, budget);
        if (zi.budget) return R::fail(DynStatus::BudgetExhausted, 0, zi.err);
        if (!zi.t) return R::fail(DynStatus::HypothesisFailed, 0, zi.err);
        z = *zi.t;
    }
    if (!bk.same_type(z, x4, Y[4]))
        return R::fail(DynStatus::HypothesisFailed, 0,
                       "the composite does not carry tp(x_0/Y_0) to tp(x_4/Y_4)");
    if (!bk.ind(Y[0], Y[1], Y[2]))
        return R::fail(DynStatus::HypothesisFailed, 0, "precondition Y_0 ind_{Y_1} Y_2 fails");
    if (!bk.ind(Y[4], Y[3], Y[2]))
        return R::fail(DynStatus::HypothesisFailed, 0, "precondition Y_4 ind_{Y_3} Y_2 fails");

    // x_1 and x_3 via the relocation lemma at both ends.
    auto s1 = tz35_core(bk, g[0], Y[0], Y[1], Y[2], x0, budget);
    if (!s1.ok()) return R::fail(s1.status, 1, s1.note);
    VTuple x1 = s1.value->gax;
    auto s4 = tz35_core(bk, g[3].inv(), Y[4], Y[3], Y[2], x4, budget);
    if (!s4.ok()) return R::fail(s4.status, 2, s4.note);
    VTuple x3 = s4.value->gax;

    // x_2 realizing the transported middle type, independent from both ends.
    auto r2 = chain_apply(bk, g[1], x1, budget);
    if (r2.budget) return R::fail(DynStatus::BudgetExhausted, 3, r2.err);
    if (!r2.t) return R::fail(DynStatus::NotFound, 3, r2.err);
    VTuple Y2t = as_tuple(Y[2]);
    VSet ends = set_union(set_union(to_set(x1), Y[1]), set_union(to_set(x3), Y[3]));
    auto x2r = transport(bk, *r2.t, Y2t, Y2t, ends, Side::Left, budget);
    if (x2r.budget) return R::fail(DynStatus::BudgetExhausted, 3, x2r.err);
    if (!x2r.t) return R::fail(DynStatus::NotFound, 3, x2r.err);
    VTuple x2 = *x2r.t;

    // Conjugators pinning the middle equalities.
    auto a2 = tz36_core(bk, g[1].inv(), Y[2], Y[1], x2, x1, budget);
    if (!a2.ok()) return R::fail(a2.status, 4, a2.note);
    auto a3 = tz36_core(bk, g[2], Y[2], Y[3], x2, x3, budget);
    if (!a3.ok()) return R::fail(a3.status, 5, a3.note);

    Tz34Out out;
    out.a = {std::move(s1.value->a), std::move(*a2.value), std::move(*a3.value),
             std::move(s4.value->a)};
    out.x = {x0, x1, x2, x3, x4};
    return R::of(std::move(out));
}

} // namespace

std::string to_string(DynStatus s) {
    switch (s) {
    case DynStatus::Ok: return "ok";
    case DynStatus::BudgetExhausted: return "budget-exhausted";
    case DynStatus::HypothesisFailed: return "hypothesis-failed";
    case DynStatus::NotFound: return "not-found";
    case DynStatus::VerificationFailed: return "verification-failed";
    }
    return "unknown";
}

bool MovingMaxWitness::verify(const Backend& b) const {
    if (!b.same_type(a, rep, X)) return false;
    VSet A = to_set(a), G = to_set(ga);
    return side == MoveSide::R ? b.ind(A, X, G) : b.ind(G, X, A);
}

std::vector<TypeSchedule> default_schedule(const Backend& b, int max_base, int window_size,
                                           size_t max_types) {
    VSet uni = b.universe();
    VSet win(uni.begin(),
             uni.begin() + std::min<size_t>(uni.size(), static_cast<size_t>(window_size)));
    size_t nw = std::min<size_t>(win.size(), 12);
    std::vector<unsigned> masks;
    for (unsigned m = 0; m < (1u << nw); ++m)
        if (__builtin_popcount(m) <= max_base) masks.push_back(m);
    std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b2) {
        return __builtin_popcount(a) < __builtin_popcount(b2);
    });
    std::vector<TypeSchedule> out;
    for (unsigned m : masks) {
        if (out.size() >= max_types) break;
        VSet base;
        for (size_t i = 0; i < nw; ++i)
            if (m & (1u << i)) base = set_insert(base, win[i]);
        std::vector<VTuple> reps;
        for (int v : win) {
            if (set_contains(base, v)) continue;
            bool dup = false;
            for (const VTuple& r : reps)
                if (b.same_type({v}, r, base)) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            reps.push_back({v});
            out.push_back(TypeSchedule{{v}, base});
            if (out.size() >= max_types) break;
        }
    }
    return out;
}

DynResult<MovingMaxWitness> moving_witness(Backend& b, IsoRef g, const VSet& X,
                                           const VTuple& rep, MoveSide side,
                                           Budget& budget) {
    return moving_witness_core(b, Chain(g), X, rep, side, budget);
}

DynResult<VTuple> lemma_addset_witness(Backend& b, const VSet& A, const VSet& B,
                                       const VSet& C, const VTuple& D, int side,
                                       Budget& budget) {
    using R = DynResult<VTuple>;
    if (side != 1 && side != 2)
        return R::fail(DynStatus::HypothesisFailed, 0, "side must be 1 or 2");
    if (!b.ind(A, B, C))
        return R::fail(DynStatus::HypothesisFailed, 0, "precondition A ind_B C fails");
    VSet base = side == 1 ? set_union(B, C) : set_union(A, B);
    const VSet& other = side == 1 ? A : C;
    VTuple bt = as_tuple(base);
    auto tr = transport(b, D, bt, bt, other, side == 1 ? Side::Right : Side::Left, budget);
    if (tr.budget) return R::fail(DynStatus::BudgetExhausted, 1, tr.err);
    if (!tr.t) return R::fail(DynStatus::NotFound, 1, tr.err);
    if (!b.same_type(*tr.t, D, base))
        return R::fail(DynStatus::VerificationFailed, 2,
                       "relocated tuple has a different type over the base");
    bool ok = side == 1 ? b.ind(A, B, set_union(C, to_set(*tr.t)))
                        : b.ind(set_union(A, to_set(*tr.t)), B, C);
    if (!ok)
        return R::fail(DynStatus::VerificationFailed, 3,
                       "transitivity conclusion fails on this backend");
    return R::of(std::move(*tr.t));
}

DynResult<PartialIso> lemma_tz31_witness(Backend& b, const VSet& A, const VSet& B,
                                         const VSet& C, const std::vector<IsoRef>& gs,
                                         int side, Budget& budget) {
    using R = DynResult<PartialIso>;
    if (side != 1 && side != 2)
        return R::fail(DynStatus::HypothesisFailed, 0, "side must be 1 or 2");
    const VSet& moved = side == 1 ? C : A;
    VTuple mt = as_tuple(moved);
    VTuple big;
    for (const IsoRef& g : gs) {
        auto im = chain_apply(b, Chain(g), mt, budget);
        if (im.budget) return R::fail(DynStatus::BudgetExhausted, 1, im.err);
        if (!im.t) return R::fail(DynStatus::NotFound, 1, im.err);
        big = tuple_concat(big, *im.t);
    }
    auto D = lemma_addset_witness(b, A, B, C, big, side, budget);
    if (!D.ok()) return R::fail(D.status, 2, D.note);
    VSet fixed = side == 1 ? set_union(B, C) : set_union(A, B);
    PartialIso e = PartialIso::identity_on(fixed);
    if (!add_pairs(e, big, *D.value) || !e.valid_on(b))
        return R::fail(DynStatus::VerificationFailed, 3,
                       "relocating map is not a partial isomorphism");
    return R::of(std::move(e));
}

bool RelocationCertificate::verify(const Backend& b, std::string* why) const {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (g.size() != 4 || a.size() != 4 || X.size() != 5 || Y.size() != 5)
        return fail("certificate has the wrong shape");
    for (const PartialIso& m : g)
        if (!m.valid_on(b)) return fail("a stored map is not structure-preserving");
    for (const PartialIso& m : a)
        if (!m.valid_on(b)) return fail("a stored conjugator is not structure-preserving");
    for (int i = 0; i < 5; ++i)
        if (!is_subset(X[static_cast<size_t>(i)], Y[static_cast<size_t>(i)]))
            return fail("Y_i does not extend X_i");
    for (int i = 0; i < 4; ++i) {
        const PartialIso& ai = a[static_cast<size_t>(i)];
        const PartialIso& gi = g[static_cast<size_t>(i)];
        if (!ai.fixes(set_union(X[static_cast<size_t>(i)], X[static_cast<size_t>(i) + 1])))
            return fail("a conjugator does not fix X_{i-1}X_i pointwise");
        VSet img;
        for (int y : Y[static_cast<size_t>(i)]) {
            auto p = ai.try_preimage(y);
            if (!p) return fail("conjugation chain is missing a preimage");
            auto q = gi.try_image(*p);
            if (!q) return fail("conjugation chain is missing a map image");
            auto r = ai.try_image(*q);
            if (!r) return fail("conjugation chain is missing a conjugator image");
            img = set_insert(img, *r);
        }
        if (img != Y[static_cast<size_t>(i) + 1])
            return fail("the conjugated map does not carry Y_{i-1} onto Y_i");
    }
    if (!b.ind(Y[0], Y[1], Y[2])) return fail("Y_0 ind_{Y_1} Y_2 fails");
    if (!b.ind(Y[4], Y[3], Y[2])) return fail("Y_4 ind_{Y_3} Y_2 fails");
    return true;
}

DynResult<RelocationCertificate> prop_tz32_pipeline(Backend& b,
                                                    const std::vector<IsoRef>& g,
                                                    const std::vector<VSet>& X,
                                                    Budget& budget) {
    using R = DynResult<RelocationCertificate>;
    std::vector<Chain> ch;
    for (const IsoRef& r : g) ch.push_back(Chain(r));
    auto core = tz32_core(b, ch, X, budget);
    if (!core.ok()) return R::fail(core.status, core.step, core.note);
    RelocationCertificate cert;
    for (const IsoRef& r : g) cert.g.push_back(r.materialize());
    cert.a = std::move(core.value->a);
    cert.X = X;
    cert.Y = std::move(core.value->Y);
    std::string why;
    if (!cert.verify(b, &why)) return R::fail(DynStatus::VerificationFailed, 9, why);
    return R::of(std::move(cert));
}

DynResult<SlideWitness> lemma_tz35_witness(Backend& b, IsoRef g, const VSet& X,
                                           const VSet& Y, const VSet& C, const VTuple& x,
                                           Budget& budget) {
    return tz35_core(b, Chain(g), X, Y, C, x, budget);
}

DynResult<PartialIso> lemma_tz36_witness(Backend& b, IsoRef g, const VSet& X,
                                         const VSet& Y, const VTuple& x, const VTuple& y,
                                         Budget& budget) {
    return tz36_core(b, Chain(g), X, Y, x, y, budget);
}

bool ConjugateProductCertificate::verify(const Backend& b, std::string* why) const {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (g.size() != 4 || a.size() != 4 || Y.size() != 5 || x.size() != 5)
        return fail("certificate has the wrong shape");
    for (const PartialIso& m : g)
        if (!m.valid_on(b)) return fail("a stored map is not structure-preserving");
    for (const PartialIso& m : a)
        if (!m.valid_on(b)) return fail("a stored conjugator is not structure-preserving");
    if (!b.ind(Y[0], Y[1], Y[2])) return fail("Y_0 ind_{Y_1} Y_2 fails");
    if (!b.ind(Y[4], Y[3], Y[2])) return fail("Y_4 ind_{Y_3} Y_2 fails");
    for (int i = 0; i < 4; ++i) {
        const PartialIso& ai = a[static_cast<size_t>(i)];
        const PartialIso& gi = g[static_cast<size_t>(i)];
        if (!ai.fixes(set_union(Y[static_cast<size_t>(i)], Y[static_cast<size_t>(i) + 1])))
            return fail("a conjugator does not fix Y_{i-1}Y_i pointwise");
        const VTuple& xin = x[static_cast<size_t>(i)];
        const VTuple& xout = x[static_cast<size_t>(i) + 1];
        if (xin.size() != xout.size()) return fail("tuple lengths disagree");
        for (size_t j = 0; j < xin.size(); ++j) {
            auto p = ai.try_preimage(xin[j]);
            if (!p) return fail("product chain is missing a preimage");
            auto q = gi.try_image(*p);
            if (!q) return fail("product chain is missing a map image");
            auto r = ai.try_image(*q);
            if (!r) return fail("product chain is missing a conjugator image");
            if (*r != xout[j]) return fail("the conjugate product misses its target");
        }
    }
    return true;
}

DynResult<ConjugateProductCertificate> prop_tz34_solve(Backend& b,
                                                       const std::vector<IsoRef>& g,
                                                       const std::vector<VSet>& Y,
                                                       const VTuple& x0, const VTuple& x4,
                                                       Budget& budget) {
    using R = DynResult<ConjugateProductCertificate>;
    std::vector<Chain> ch;
    for (const IsoRef& r : g) ch.push_back(Chain(r));
    auto core = tz34_core(b, ch, Y, x0, x4, budget);
    if (!core.ok()) return R::fail(core.status, core.step, core.note);
    ConjugateProductCertificate cert;
    for (const IsoRef& r : g) cert.g.push_back(r.materialize());
    cert.a = std::move(core.value->a);
    cert.Y = Y;
    cert.x = std::move(core.value->x);
    std::string why;
    if (!cert.verify(b, &why)) return R::fail(DynStatus::VerificationFailed, 6, why);
    return R::of(std::move(cert));
}

bool DensityCertificate::verify(const Backend& b, std::string* why) const {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (u.size() != 4 || h.size() != 4 || Y.size() != 5)
        return fail("certificate has the wrong shape");
    if (!g.valid_on(b)) return fail("the stored map is not structure-preserving");
    for (const PartialIso& m : u)
        if (!m.valid_on(b)) return fail("a stored constraint map is not structure-preserving");
    for (const PartialIso& m : h)
        if (!m.valid_on(b)) return fail("a stored conjugator is not structure-preserving");
    if (!w.valid_on(b) || !wp.valid_on(b))
        return fail("a stored target map is not structure-preserving");
    for (int i = 0; i < 4; ++i)
        if (!h[static_cast<size_t>(i)].extends(u[static_cast<size_t>(i)]))
            return fail("a conjugator does not extend its constraint map");
    if (!wp.extends(w)) return fail("the extended target does not extend the base target");
    if (w.domain() != Y[0]) return fail("the base target is not defined exactly on Y_0");
    if (!b.ind(Y[0], Y[1], Y[2])) return fail("Y_0 ind_{Y_1} Y_2 fails");
    if (!b.ind(Y[4], Y[3], Y[2])) return fail("Y_4 ind_{Y_3} Y_2 fails");
    for (auto [p0, q0] : wp.pairs()) {
        int t = p0;
        for (int i = 0; i < 4; ++i) {
            const PartialIso& hi = h[static_cast<size_t>(i)];
            auto s = hi.try_preimage(t);
            if (!s) return fail("product chain is missing a conjugator preimage");
            auto gs = g.try_image(*s);
            if (!gs) return fail("product chain is missing a map image");
            auto r = hi.try_image(*gs);
            if (!r) return fail("product chain is missing a conjugator image");
            t = *r;
        }
        if (t != q0) return fail("the conjugate product does not extend the target map");
    }
    return true;
}

DynResult<DensityCertificate> density_witness(Backend& b, IsoRef g,
                                              const std::vector<PartialIso>& u,
                                              const VSet& seed, const VTuple& extra,
                                              Budget& budget) {
    using R = DynResult<DensityCertificate>;
    if (u.size() != 4)
        return R::fail(DynStatus::HypothesisFailed, 0, "expected four constraint maps");
    for (const PartialIso& m : u)
        if (!m.valid_on(b))
            return R::fail(DynStatus::HypothesisFailed, 0,
                           "a constraint map is not structure-preserving");

    // Step 1: extend each u_i to a_i with g^{a_i}(X_{i-1}) = X_i and
    // Im(u_i) within X_i. A backward pass realizes the needed preimages; the
    // forward pass then reads the sets off by plain lookups.
    std::vector<PartialIso> a(u.begin(), u.end());
    std::vector<Chain> G;
    for (int i = 0; i < 4; ++i)
        G.push_back(Chain::conj(local_chain({&a[static_cast<size_t>(i)]}), Chain(g)));
    std::vector<VSet> X(5);
    VSet req;
    for (int i = 3; i >= 0; --i) {
        VSet T = set_union(to_set(u[static_cast<size_t>(i)].range_tuple()), req);
        auto pre = chain_apply(b, G[static_cast<size_t>(i)].inv(), as_tuple(T), budget);
        if (pre.budget) return R::fail(DynStatus::BudgetExhausted, 1, pre.err);
        if (!pre.t) return R::fail(DynStatus::NotFound, 1, pre.err);
        req = to_set(*pre.t);
    }
    X[0] = set_union(seed, req);
    for (int i = 0; i < 4; ++i) {
        auto im = chain_apply(b, G[static_cast<size_t>(i)], as_tuple(X[static_cast<size_t>(i)]),
                              budget);
        if (im.budget) return R::fail(DynStatus::BudgetExhausted, 1, im.err);
        if (!im.t) return R::fail(DynStatus::NotFound, 1, im.err);
        X[static_cast<size_t>(i) + 1] = to_set(*im.t);
        if (!is_subset(to_set(u[static_cast<size_t>(i)].range_tuple()),
                       X[static_cast<size_t>(i) + 1]))
            return R::fail(DynStatus::VerificationFailed, 1,
                           "X_i fails to cover the image of the constraint map");
    }

    // Step 2: the Y_i construction and the relocating conjugators b_i.
    auto reloc = tz32_core(b, G, X, budget);
    if (!reloc.ok()) return R::fail(reloc.status, 2, reloc.note);
    std::vector<PartialIso> bmap = std::move(reloc.value->a);
    std::vector<VSet> Y = std::move(reloc.value->Y);
    std::vector<Chain> H;
    for (int i = 0; i < 4; ++i)
        H.push_back(Chain::conj(
            local_chain({&a[static_cast<size_t>(i)], &bmap[static_cast<size_t>(i)]}),
            Chain(g)));

    // Step 3: the base target w = the conjugate product on Y_0.
    PartialIso w;
    for (int v : Y[0]) {
        VTuple t{v};
        for (int i = 0; i < 4; ++i) {
            auto r = chain_apply(b, H[static_cast<size_t>(i)], t, budget);
            if (r.budget) return R::fail(DynStatus::BudgetExhausted, 3, r.err);
            if (!r.t) return R::fail(DynStatus::NotFound, 3, r.err);
            t = *r.t;
        }
        if (!add_pairs(w, {v}, t))
            return R::fail(DynStatus::VerificationFailed, 3,
                           "the conjugate product is not well-defined on Y_0");
    }

    // Step 4: a target extension on the extra points: the transported type is
    // realized afresh so hitting it is a genuine relocation problem.
    std::vector<PartialIso> cmap;
    PartialIso wp = w;
    std::vector<VTuple> xmid;
    if (!extra.empty()) {
        for (int v : to_set(extra))
            if (set_contains(Y[0], v))
                return R::fail(DynStatus::HypothesisFailed, 4,
                               "extra points must avoid Y_0");
        VTuple t = extra;
        for (int i = 0; i < 4; ++i) {
            auto r = chain_apply(b, H[static_cast<size_t>(i)], t, budget);
            if (r.budget) return R::fail(DynStatus::BudgetExhausted, 4, r.err);
            if (!r.t) return R::fail(DynStatus::NotFound, 4, r.err);
            t = *r.t;
        }
        VTuple Y4t = as_tuple(Y[4]);
        auto yt = transport(b, t, Y4t, Y4t, {}, Side::Left, budget);
        if (yt.budget) return R::fail(DynStatus::BudgetExhausted, 4, yt.err);
        if (!yt.t) return R::fail(DynStatus::NotFound, 4, yt.err);
        auto solved = tz34_core(b, H, Y, extra, *yt.t, budget);
        if (!solved.ok()) return R::fail(solved.status, 4, solved.note);
        cmap = std::move(solved.value->a);
        if (!add_pairs(wp, extra, *yt.t))
            return R::fail(DynStatus::VerificationFailed, 4,
                           "the extra target pairs conflict with the base target");
    } else {
        for (int i = 0; i < 4; ++i)
            cmap.push_back(PartialIso::identity_on(
                set_union(Y[static_cast<size_t>(i)], Y[static_cast<size_t>(i) + 1])));
    }

    // Step 5: materialize h_i = c_i b_i a_i with every pair the replay needs.
    DensityCertificate cert;
    cert.u = u;
    cert.Y = Y;
    cert.w = std::move(w);
    cert.wp = std::move(wp);
    cert.h.resize(4);
    std::vector<Chain> hch(4);
    for (int i = 0; i < 4; ++i)
        hch[static_cast<size_t>(i)] =
            local_chain({&a[static_cast<size_t>(i)], &bmap[static_cast<size_t>(i)],
                         &cmap[static_cast<size_t>(i)]});
    for (int i = 0; i < 4; ++i) {
        PartialIso& rec = cert.h[static_cast<size_t>(i)];
        for (auto [p, q] : u[static_cast<size_t>(i)].pairs()) {
            auto r = chain_apply(b, hch[static_cast<size_t>(i)], {p}, budget);
            if (r.budget) return R::fail(DynStatus::BudgetExhausted, 5, r.err);
            if (!r.t || (*r.t)[0] != q)
                return R::fail(DynStatus::VerificationFailed, 5,
                               "a conjugator fails to extend its constraint map");
            if (!add_pairs(rec, {p}, {q}))
                return R::fail(DynStatus::VerificationFailed, 5, "conjugator pairs conflict");
        }
    }
    for (auto [p, q] : cert.wp.pairs()) {
        int t = p;
        for (int i = 0; i < 4; ++i) {
            auto s = chain_apply(b, hch[static_cast<size_t>(i)].inv(), {t}, budget);
            if (s.budget) return R::fail(DynStatus::BudgetExhausted, 5, s.err);
            if (!s.t) return R::fail(DynStatus::NotFound, 5, s.err);
            auto gs = apply_ext(b, g, *s.t, budget);
            if (!gs) return R::fail(DynStatus::BudgetExhausted, 5, "realization budget exhausted");
            auto r = chain_apply(b, hch[static_cast<size_t>(i)], *gs, budget);
            if (r.budget) return R::fail(DynStatus::BudgetExhausted, 5, r.err);
            if (!r.t) return R::fail(DynStatus::NotFound, 5, r.err);
            if (!add_pairs(cert.h[static_cast<size_t>(i)], *s.t, {t}) ||
                !add_pairs(cert.h[static_cast<size_t>(i)], *gs, *r.t))
                return R::fail(DynStatus::VerificationFailed, 5, "conjugator pairs conflict");
            t = (*r.t)[0];
        }
        if (t != q)
            return R::fail(DynStatus::VerificationFailed, 5,
                           "the conjugate product does not extend the target map");
    }
    cert.g = g.materialize();
    std::string why;
    if (!cert.verify(b, &why)) return R::fail(DynStatus::VerificationFailed, 6, why);
    return R::of(std::move(cert));
}

DynResult<PartialIso> lemma_colourrange_build(Backend& b, IsoRef g,
                                              const std::vector<TypeSchedule>& schedule,
                                              const std::vector<int>& solutions,
                                              ColourRangeReport& report, Budget& budget) {
    using R = DynResult<PartialIso>;
    PartialIso h;
    IsoRef href{&h, false};
    auto budget_out = [&](const std::string& m) {
        ++report.budget_failures;
        return R::fail(DynStatus::BudgetExhausted, 0, m);
    };
    size_t idx = 0;
    for (const TypeSchedule& p : schedule) {
        VTuple Xt = as_tuple(p.base);
        if (!apply_ext(b, href, Xt, budget)) return budget_out("realization budget exhausted");

        // A fresh realization a of the type, its forward transport b under
        // the accumulated map, and the image pair (a -> b).
        auto ar = transport(b, p.rep, Xt, Xt, {}, Side::Left, budget);
        if (ar.budget) return budget_out(ar.err);
        if (!ar.t) return R::fail(DynStatus::NotFound, 1, ar.err);
        auto br = transport(b, *ar.t, h.domain_tuple(), h.range_tuple(), {}, Side::Left,
                            budget);
        if (br.budget) return budget_out(br.err);
        if (!br.t) return R::fail(DynStatus::NotFound, 1, br.err);
        if (!add_pairs(h, *ar.t, *br.t))
            return R::fail(DynStatus::VerificationFailed, 1, "extension pairs conflict");

        auto ga = apply_ext(b, g, *ar.t, budget);
        if (!ga) return budget_out("realization budget exhausted");
        auto gb = apply_ext(b, g, *br.t, budget);
        if (!gb) return budget_out("realization budget exhausted");

        // c realizing the pulled-back type of g(b), semi-freely amalgamated
        // with g(a) over the accumulated domain; its cross colours land in
        // the solution set.
        auto cr = transport(b, *gb, h.range_tuple(), h.domain_tuple(), to_set(*ga),
                            Side::Left, budget);
        if (cr.budget) return budget_out(cr.err);
        if (!cr.t) return R::fail(DynStatus::NotFound, 2, cr.err);
        if (!add_pairs(h, *cr.t, *gb))
            return R::fail(DynStatus::VerificationFailed, 2, "extension pairs conflict");

        Chain comm;
        comm.fs = {g, href, g.rev(), href.rev()};
        auto zr = chain_apply(b, comm, *ar.t, budget);
        if (zr.budget) return budget_out(zr.err);
        if (!zr.t) return R::fail(DynStatus::NotFound, 3, zr.err);

        ColourRangeEntry entry;
        entry.type = p;
        entry.a = *ar.t;
        entry.c = *cr.t;
        entry.ga = *ga;
        entry.z = *zr.t;
        entry.colours_ok = true;
        for (int ai : entry.a)
            for (int zj : entry.z) {
                if (ai == zj) {
                    entry.colours_ok = false;
                    continue;
                }
                auto col = b.edge_color(ai, zj);
                if (!col || std::find(solutions.begin(), solutions.end(), *col) ==
                                solutions.end())
                    entry.colours_ok = false;
            }
        report.entries.push_back(std::move(entry));

        // Every other step, pull the base into the range so the union of the
        // stages is defined and surjective everywhere.
        if (idx % 2 == 1) {
            if (!apply_ext(b, href.rev(), Xt, budget))
                return budget_out("realization budget exhausted");
        }
        ++idx;
    }
    return R::of(std::move(h));
}

DynResult<PartialIso> commutator_mover_build(Backend& b, IsoRef g,
                                             const std::vector<TypeSchedule>& schedule,
                                             CommutatorVariant variant,
                                             MoverReport& report, Budget& budget) {
    using R = DynResult<PartialIso>;
    PartialIso k;
    IsoRef kref{&k, false};
    Chain chain_kg, chain_gk; // [k,g] = k^{-1}g^{-1}kg and [g,k] = g^{-1}k^{-1}gk
    chain_kg.fs = {g, kref, g.rev(), kref.rev()};
    chain_gk.fs = {kref, g, kref.rev(), g.rev()};

    bool budget_hit = false;
    std::string budget_note;

    // One proof step of the back-and-forth construction. Kinds 1-4 are the
    // two-sided steps I-IV; kinds 5 and 6 are the L-side steps that only use
    // the mixed hypothesis (g almost R-maximal, g^{-1} almost L-maximal).
    auto run_step = [&](const TypeSchedule& p, int kind) {
        MoverEntry entry;
        entry.type = p;
        entry.side = (kind == 1 || kind == 3) ? MoveSide::R : MoveSide::L;
        entry.commutator_kg = (kind == 1 || kind == 2 || kind == 5);
        entry.step = kind == 1   ? "I"
                     : kind == 2 ? "II"
                     : kind == 3 ? "III"
                     : kind == 4 ? "IV"
                     : kind == 5 ? "L-kg"
                                 : "L-gk";
        auto give_up = [&]() { report.entries.push_back(entry); };
        auto out_of_budget = [&](const std::string& m) {
            budget_hit = true;
            budget_note = m;
            ++report.budget_failures;
            report.entries.push_back(entry);
        };

        VTuple Xt = as_tuple(p.base);
        // Arrange X u gX inside the domain and kgX inside the range.
        auto gX = apply_ext(b, g, Xt, budget);
        if (!gX) return out_of_budget("realization budget exhausted");
        if (!apply_ext(b, kref, tuple_concat(Xt, *gX), budget))
            return out_of_budget("realization budget exhausted");
        auto kX = k.apply(Xt);
        auto gkX = apply_ext(b, g, *kX, budget);
        if (!gkX) return out_of_budget("realization budget exhausted");
        if (!apply_ext(b, kref.rev(), *gkX, budget))
            return out_of_budget("realization budget exhausted");

        VSet A = to_set(k.domain_tuple()), B = to_set(k.range_tuple());
        bool right = entry.side == MoveSide::R;
        Side near = right ? Side::Left : Side::Right;

        VTuple at, bt; // the realization a and its k-image b
        if (kind == 1 || kind == 2) {
            // a' ind_X A (resp. swapped), moved by g over A; b ind_B g^{-1}B.
            auto ap = transport(b, p.rep, Xt, Xt, A, near, budget);
            if (ap.budget) return out_of_budget(ap.err);
            if (!ap.t) return give_up();
            auto mw = moving_witness_core(b, Chain(g), A, *ap.t,
                                          right ? MoveSide::R : MoveSide::L, budget);
            if (mw.status == DynStatus::BudgetExhausted) return out_of_budget(mw.note);
            if (!mw.ok()) return give_up();
            at = mw.value->a;
            auto ginvB = apply_ext(b, g.rev(), k.range_tuple(), budget);
            if (!ginvB) return out_of_budget("realization budget exhausted");
            auto br = transport(b, at, k.domain_tuple(), k.range_tuple(), to_set(*ginvB),
                                near, budget);
            if (br.budget) return out_of_budget(br.err);
            if (!br.t) return give_up();
            bt = *br.t;
        } else if (kind == 3 || kind == 4) {
            // a ind_X g^{-1}A (resp. swapped); b realizes the transported
            // type over B and is moved by g over B.
            auto ginvA = apply_ext(b, g.rev(), k.domain_tuple(), budget);
            if (!ginvA) return out_of_budget("realization budget exhausted");
            auto ar = transport(b, p.rep, Xt, Xt, to_set(*ginvA), near, budget);
            if (ar.budget) return out_of_budget(ar.err);
            if (!ar.t) return give_up();
            at = *ar.t;
            auto b0 = transport(b, at, k.domain_tuple(), k.range_tuple(), {}, Side::Left,
                                budget);
            if (b0.budget) return out_of_budget(b0.err);
            if (!b0.t) return give_up();
            auto mw = moving_witness_core(b, Chain(g), B, *b0.t,
                                          right ? MoveSide::R : MoveSide::L, budget);
            if (mw.status == DynStatus::BudgetExhausted) return out_of_budget(mw.note);
            if (!mw.ok()) return give_up();
            bt = mw.value->a;
        } else if (kind == 5) {
            // A ind_X a; b' with g^{-1}B ind_B b', moved by g^{-1} on the left.
            auto ar = transport(b, p.rep, Xt, Xt, A, Side::Right, budget);
            if (ar.budget) return out_of_budget(ar.err);
            if (!ar.t) return give_up();
            at = *ar.t;
            auto ginvB = apply_ext(b, g.rev(), k.range_tuple(), budget);
            if (!ginvB) return out_of_budget("realization budget exhausted");
            auto bp = transport(b, at, k.domain_tuple(), k.range_tuple(), to_set(*ginvB),
                                Side::Right, budget);
            if (bp.budget) return out_of_budget(bp.err);
            if (!bp.t) return give_up();
            auto mw = moving_witness_core(b, Chain(g.rev()),
                                          set_union(B, to_set(*ginvB)), *bp.t, MoveSide::L,
                                          budget);
            if (mw.status == DynStatus::BudgetExhausted) return out_of_budget(mw.note);
            if (!mw.ok()) return give_up();
            bt = mw.value->a;
        } else {
            // g^{-1}A ind_X a', a moved by g^{-1} on the left; b transported.
            auto ginvA = apply_ext(b, g.rev(), k.domain_tuple(), budget);
            if (!ginvA) return out_of_budget("realization budget exhausted");
            auto ap = transport(b, p.rep, Xt, Xt, to_set(*ginvA), Side::Right, budget);
            if (ap.budget) return out_of_budget(ap.err);
            if (!ap.t) return give_up();
            auto mw = moving_witness_core(b, Chain(g.rev()),
                                          set_union(to_set(*ginvA), p.base), *ap.t,
                                          MoveSide::L, budget);
            if (mw.status == DynStatus::BudgetExhausted) return out_of_budget(mw.note);
            if (!mw.ok()) return give_up();
            at = mw.value->a;
            auto br = transport(b, at, k.domain_tuple(), k.range_tuple(), {}, Side::Left,
                                budget);
            if (br.budget) return out_of_budget(br.err);
            if (!br.t) return give_up();
            bt = *br.t;
        }

        if (!add_pairs(k, at, bt)) return give_up();

        // The second extension pair: c -> gb for the [k,g] steps and for the
        // mixed-hypothesis [g,k] step, ga -> c for the two-sided [g,k]
        // steps, with the independence constraint the proof step asks for.
        auto ga = apply_ext(b, g, at, budget);
        if (!ga) return out_of_budget("realization budget exhausted");
        auto gb = apply_ext(b, g, bt, budget);
        if (!gb) return out_of_budget("realization budget exhausted");
        bool kg_shape = entry.commutator_kg || kind == 6;
        Side cside = (kind == 2 || kind == 4 || kind == 5) ? Side::Right : Side::Left;
        if (kg_shape) {
            auto cr = transport(b, *gb, k.range_tuple(), k.domain_tuple(), to_set(*ga),
                                cside, budget);
            if (cr.budget) return out_of_budget(cr.err);
            if (!cr.t) return give_up();
            if (!add_pairs(k, *cr.t, *gb)) return give_up();
        } else {
            auto cr = transport(b, *ga, k.domain_tuple(), k.range_tuple(), to_set(*gb),
                                cside, budget);
            if (cr.budget) return out_of_budget(cr.err);
            if (!cr.t) return give_up();
            if (!add_pairs(k, *ga, *cr.t)) return give_up();
        }

        auto zr = chain_apply(b, entry.commutator_kg ? chain_kg : chain_gk, at, budget);
        if (zr.budget) return out_of_budget(zr.err);
        if (!zr.t) return give_up();
        entry.witness = MovingMaxWitness{p.rep, p.base, entry.side, at, *zr.t};
        entry.verified = entry.witness.verify(b);
        report.entries.push_back(std::move(entry));
    };

    std::vector<int> kinds = variant == CommutatorVariant::BothSides
                                 ? std::vector<int>{1, 2, 3, 4}
                                 : std::vector<int>{1, 3, 5, 6};
    for (const TypeSchedule& p : schedule) {
        for (int kind : kinds) {
            run_step(p, kind);
            if (budget_hit) return R::fail(DynStatus::BudgetExhausted, kind, budget_note);
        }
    }
    return R::of(std::move(k));
}

} // namespace wb
