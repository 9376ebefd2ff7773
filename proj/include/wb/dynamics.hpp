#ifndef WB_DYNAMICS_HPP
#define WB_DYNAMICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "wb/backend.hpp"
#include "wb/partial_map.hpp"
#include "wb/sets.hpp"

namespace wb {

/// Which side of the independence relation a moving witness certifies:
/// R asks a ind_X g(a), L asks g(a) ind_X a.
enum class MoveSide { R, L };

enum class DynStatus {
    Ok,
    BudgetExhausted,
    HypothesisFailed,
    NotFound,
    VerificationFailed,
};

std::string to_string(DynStatus s);

/// Outcome of a construction: a value on success, otherwise a status tagged
/// with the proof step that failed. Budget exhaustion never asserts that no
/// witness exists; existence is only guaranteed in the limit.
template <class T>
struct DynResult {
    std::optional<T> value;
    DynStatus status = DynStatus::Ok;
    int step = 0;
    std::string note;

    bool ok() const { return status == DynStatus::Ok; }
    static DynResult fail(DynStatus s, int step, std::string note) {
        DynResult r;
        r.status = s;
        r.step = step;
        r.note = std::move(note);
        return r;
    }
    static DynResult of(T v) {
        DynResult r;
        r.value = std::move(v);
        return r;
    }
};

/// A realization a of the type of `rep` over X that the (extended) map moves
/// independently: side R certifies a ind_X ga, side L certifies ga ind_X a.
struct MovingMaxWitness {
    VTuple rep;
    VSet X;
    MoveSide side = MoveSide::R;
    VTuple a, ga;

    bool verify(const Backend& b) const;
};

/// One scheduled type: the quantifier-free type of `rep` over `base`.
struct TypeSchedule {
    VTuple rep;
    VSet base;
};

/// All 1-point types over bases of at most max_base points drawn from the
/// first window_size universe points, deduplicated up to type equality.
std::vector<TypeSchedule> default_schedule(const Backend& b, int max_base,
                                           int window_size, size_t max_types = 16);

/// Searches for a realization the extended map moves on the given side.
/// Candidate images keep g a structure-preserving map; every witness is
/// re-verified before it is returned and the successful extension is the only
/// one committed into g. A map that is the identity on its domain extends
/// canonically to the identity, which moves nothing.
DynResult<MovingMaxWitness> moving_witness(Backend& b, IsoRef g, const VSet& X,
                                           const VTuple& rep, MoveSide side,
                                           Budget& budget);

/// Independence-preserving relocation of D: given A ind_B C, side 1 returns
/// D2 with tp(D2/BC) = tp(D/BC) and A ind_B (C u D2); side 2 mirrors,
/// returning D2 with tp(D2/AB) = tp(D/AB) and (A u D2) ind_B C.
DynResult<VTuple> lemma_addset_witness(Backend& b, const VSet& A, const VSet& B,
                                       const VSet& C, const VTuple& D, int side,
                                       Budget& budget);

/// Side 1: e fixing B u C pointwise with A ind_B (C g1^e(C) ... gn^e(C)).
/// Side 2: f fixing A u B pointwise with (A g1^f(A) ... gn^f(A)) ind_B C.
DynResult<PartialIso> lemma_tz31_witness(Backend& b, const VSet& A, const VSet& B,
                                         const VSet& C, const std::vector<IsoRef>& gs,
                                         int side, Budget& budget);

/// Conjugators a_i fixing X_{i-1} u X_i and extensions X_i within Y_i with
/// g_i^{a_i}(Y_{i-1}) = Y_i, Y_0 ind_{Y_1} Y_2 and Y_4 ind_{Y_3} Y_2.
/// Maps are materialized finitely; verify() replays every claim from the
/// stored data alone.
struct RelocationCertificate {
    std::vector<PartialIso> g; // the four maps, as extended by the run
    std::vector<PartialIso> a; // conjugators a_1..a_4
    std::vector<VSet> X;       // X_0..X_4 as given
    std::vector<VSet> Y;       // Y_0..Y_4

    bool verify(const Backend& b, std::string* why = nullptr) const;
};

DynResult<RelocationCertificate> prop_tz32_pipeline(Backend& b,
                                                    const std::vector<IsoRef>& g,
                                                    const std::vector<VSet>& X,
                                                    Budget& budget);

/// Witness for the relocation lemma: a fixes X u Y and g^a(x) = gax with
/// gax ind_Y C.
struct SlideWitness {
    PartialIso a;
    VTuple gax;
};

DynResult<SlideWitness> lemma_tz35_witness(Backend& b, IsoRef g, const VSet& X,
                                           const VSet& Y, const VSet& C, const VTuple& x,
                                           Budget& budget);

/// a fixing X u Y with g^a(x) = y, given g(X) = Y, the transported type of x
/// equals tp(y/Y), x ind_X (y u Y) and y ind_Y X.
DynResult<PartialIso> lemma_tz36_witness(Backend& b, IsoRef g, const VSet& X,
                                         const VSet& Y, const VTuple& x, const VTuple& y,
                                         Budget& budget);

/// Conjugators a_i fixing Y_{i-1} u Y_i with g_4^{a_4}...g_1^{a_1}(x_0) = x_4,
/// together with the intermediate images so the product equation replays by
/// plain map lookups.
struct ConjugateProductCertificate {
    std::vector<PartialIso> g; // g_1..g_4 as extended by the run
    std::vector<PartialIso> a; // a_1..a_4
    std::vector<VSet> Y;       // Y_0..Y_4
    std::vector<VTuple> x;     // x_0..x_4

    bool verify(const Backend& b, std::string* why = nullptr) const;
};

DynResult<ConjugateProductCertificate> prop_tz34_solve(Backend& b,
                                                       const std::vector<IsoRef>& g,
                                                       const std::vector<VSet>& Y,
                                                       const VTuple& x0, const VTuple& x4,
                                                       Budget& budget);

/// Finite core of the density argument: conjugators h_i = c_i b_i a_i, each
/// extending u_i, such that g^{h_4}...g^{h_1} extends the target map wp
/// (the base map w on Y_0 plus the requested extra pairs).
struct DensityCertificate {
    PartialIso g;
    std::vector<PartialIso> u; // the four given partial maps
    std::vector<PartialIso> h; // h_1..h_4 = c_i b_i a_i
    std::vector<VSet> Y;       // Y_0..Y_4
    PartialIso w;              // base map on Y_0
    PartialIso wp;             // verified target extension of w

    bool verify(const Backend& b, std::string* why = nullptr) const;
};

DynResult<DensityCertificate> density_witness(Backend& b, IsoRef g,
                                              const std::vector<PartialIso>& u,
                                              const VSet& seed, const VTuple& extra,
                                              Budget& budget);

/// Per-type record of the colour-range construction: a realizes the scheduled
/// type, z = [h,g]a computed through the accumulated maps, and every cross
/// pair (a_i, z_j) carries a solution colour.
struct ColourRangeEntry {
    TypeSchedule type;
    VTuple a, c, ga, z;
    bool colours_ok = false;
};

struct ColourRangeReport {
    std::vector<ColourRangeEntry> entries;
    int budget_failures = 0;
    bool all_ok() const {
        if (budget_failures > 0) return false;
        for (auto& e : entries)
            if (!e.colours_ok) return false;
        return !entries.empty();
    }
};

/// Back-and-forth construction of h such that each scheduled type has a
/// realization a with every colour between a and [h,g]a in `solutions`.
/// Requires a backend with edge colours.
DynResult<PartialIso> lemma_colourrange_build(Backend& b, IsoRef g,
                                              const std::vector<TypeSchedule>& schedule,
                                              const std::vector<int>& solutions,
                                              ColourRangeReport& report, Budget& budget);

enum class CommutatorVariant {
    BothSides, // g moves almost R- and L-maximally
    Mixed,     // g moves almost R-maximally and g^{-1} almost L-maximally
};

struct MoverEntry {
    TypeSchedule type;
    MoveSide side = MoveSide::R;
    std::string step;       // which proof step produced it
    bool commutator_kg;     // witness for [k,g] (true) or [g,k] (false)
    MovingMaxWitness witness;
    bool verified = false;
};

struct MoverReport {
    std::vector<MoverEntry> entries;
    int budget_failures = 0;
    bool all_ok() const {
        if (budget_failures > 0) return false;
        for (auto& e : entries)
            if (!e.verified) return false;
        return !entries.empty();
    }
};

/// Builds k so that [k,g] (and [g,k]) move every scheduled type almost
/// R-maximally and almost L-maximally, one verified witness per type and
/// side. The BothSides variant runs proof steps I-IV; Mixed runs steps I and
/// III for the R sides and the mixed-hypothesis constructions for the L sides.
DynResult<PartialIso> commutator_mover_build(Backend& b, IsoRef g,
                                             const std::vector<TypeSchedule>& schedule,
                                             CommutatorVariant variant,
                                             MoverReport& report, Budget& budget);

} // namespace wb

#endif
