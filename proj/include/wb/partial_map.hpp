#ifndef WB_PARTIAL_MAP_HPP
#define WB_PARTIAL_MAP_HPP

#include <map>
#include <optional>
#include <string>

#include "wb/backend.hpp"
#include "wb/sets.hpp"

namespace wb {

/// A finite injective vertex map, the finite proxy for an automorphism of the
/// limit structure. Structure preservation is not an invariant of the type
/// itself; it is checked against a backend with valid_on().
class PartialIso {
public:
    PartialIso() = default;

    static PartialIso identity_on(const VSet& s) {
        PartialIso g;
        for (int v : s) g.add(v, v);
        return g;
    }
    static PartialIso from_pairs(const PairMap& pairs) {
        PartialIso g;
        for (auto [x, y] : pairs) g.add(x, y);
        return g;
    }

    bool defined(int x) const { return fwd_.count(x) > 0; }
    bool defined_inv(int y) const { return bwd_.count(y) > 0; }
    int image(int x) const;
    int preimage(int y) const;
    std::optional<int> try_image(int x) const;
    std::optional<int> try_preimage(int y) const;

    /// Adds x -> y; throws if it conflicts with injectivity or an existing pair.
    void add(int x, int y);

    size_t size() const { return fwd_.size(); }
    bool empty() const { return fwd_.empty(); }
    VSet domain() const;
    VSet range() const;
    VTuple domain_tuple() const;
    VTuple range_tuple() const;
    PairMap pairs() const;

    /// Does every pair of g appear in this map?
    bool extends(const PartialIso& g) const;
    /// Is the map the identity on every point of its domain?
    bool is_identity() const;
    /// Does the map fix every point of s that it is defined on, and is it
    /// defined on all of s?
    bool fixes(const VSet& s) const;

    PartialIso inverse() const;
    /// g.after(h) = g∘h, defined where h lands inside dom(g).
    PartialIso after(const PartialIso& h) const;
    /// this^a = a ∘ this ∘ a^{-1}, on the domain where all three compose.
    PartialIso conjugate_by(const PartialIso& a) const;
    /// [g, h] = g^{-1} h^{-1} g h, on the domain where the chain composes.
    static PartialIso commutator(const PartialIso& g, const PartialIso& h);

    /// Image of a tuple; nullopt if any point is missing.
    std::optional<VTuple> apply(const VTuple& xs) const;
    std::optional<VSet> apply_set(const VSet& xs) const;

    /// Structure preservation on the full domain.
    bool valid_on(const Backend& b) const {
        return b.valid_map(domain_tuple(), range_tuple());
    }

    bool operator==(const PartialIso& o) const { return fwd_ == o.fwd_; }

private:
    std::map<int, int> fwd_, bwd_;
};

/// A partial iso viewed in a chosen direction, so pipelines can work with
/// g^{-1} while extensions accumulate on the shared underlying map.
struct IsoRef {
    PartialIso* iso = nullptr;
    bool inverted = false;

    IsoRef rev() const { return {iso, !inverted}; }
    bool defined(int x) const { return inverted ? iso->defined_inv(x) : iso->defined(x); }
    std::optional<int> try_image(int x) const {
        return inverted ? iso->try_preimage(x) : iso->try_image(x);
    }
    void add(int x, int y) const { inverted ? iso->add(y, x) : iso->add(x, y); }
    VTuple domain_tuple() const {
        return inverted ? iso->range_tuple() : iso->domain_tuple();
    }
    VTuple range_tuple() const {
        return inverted ? iso->domain_tuple() : iso->range_tuple();
    }
    PartialIso materialize() const { return inverted ? iso->inverse() : *iso; }
};

/// Extends g so it is defined on every point of xs and returns g(xs).
/// Existing points whose assignment is forced stay forced; fresh images are
/// found by transporting the type of the missing subtuple along g and
/// realizing it (optionally independent from C over rng(g) on `side`).
/// Returns nullopt on budget exhaustion.
std::optional<VTuple> apply_ext(Backend& b, IsoRef g, const VTuple& xs, Budget& budget,
                                const VSet& C = {}, Side side = Side::Left);

inline std::optional<VTuple> apply_ext(Backend& b, PartialIso& g, const VTuple& xs,
                                       Budget& budget, const VSet& C = {},
                                       Side side = Side::Left) {
    return apply_ext(b, IsoRef{&g, false}, xs, budget, C, side);
}
/// Extends g backwards: returns g^{-1}(ys), realizing fresh preimages.
inline std::optional<VTuple> apply_inv_ext(Backend& b, PartialIso& g, const VTuple& ys,
                                           Budget& budget, const VSet& C = {},
                                           Side side = Side::Left) {
    return apply_ext(b, IsoRef{&g, true}, ys, budget, C, side);
}

} // namespace wb

#endif
