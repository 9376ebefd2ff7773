#ifndef WB_BACKEND_HPP
#define WB_BACKEND_HPP

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "wb/sets.hpp"

namespace wb {

enum class Side { Left, Right };

/// Resource limits for realization searches. Budget exhaustion is a distinct
/// outcome from logical failure: existence is only guaranteed in the limit.
struct Budget {
    int max_vertices = 256;
    long max_nodes = 2'000'000;

    bool spend_node() { return max_nodes-- > 0; }
};

/// A partial map given as (source, image) pairs.
using PairMap = std::vector<std::pair<int, int>>;

/// A growable finite approximation of a homogeneous structure, exposing just
/// what the independence-relation audits and the automorphism pipelines need:
/// the independence test, type comparison via partial isomorphisms, and
/// constrained realization of transported types.
class Backend {
public:
    virtual ~Backend() = default;

    /// Independent copy; realizations on the copy leave the original alone.
    virtual std::unique_ptr<Backend> clone() const = 0;

    virtual VSet universe() const = 0;
    virtual bool has_point(int v) const = 0;

    /// The independence relation A over B from C (left argument first).
    virtual bool ind(const VSet& A, const VSet& B, const VSet& C) const = 0;

    /// Fills `bits` (sized m^3 with m = 2^|pts|, index (A*m + B)*m + C) with
    /// ind over all triples of subsets of `pts`, subsets as bitmasks in the
    /// order given. Backends with a pairwise characterisation of ind may
    /// override this with something faster than m^3 generic calls.
    virtual void tabulate_ind(const VSet& pts, std::vector<char>& bits) const;

    /// Would a map sending x1,x2 to y1,y2 preserve the structure on the pair?
    virtual bool pair_compatible(int x1, int x2, int y1, int y2) const = 0;

    /// Oriented color of (x, y) where the universe carries edge colors;
    /// nullopt for backends without them (e.g. dense orders).
    virtual std::optional<int> edge_color(int, int) const { return std::nullopt; }

    /// Is {xs_i -> ys_i} extended by the identity on `fixed` a well-defined
    /// partial isomorphism?
    bool valid_map(const VTuple& xs, const VTuple& ys, const VSet& fixed = {}) const;

    /// tp(a / base) = tp(b / base): the determined map a -> b over base is a
    /// partial isomorphism.
    bool same_type(const VTuple& a, const VTuple& b, const VSet& base) const {
        return valid_map(a, b, base);
    }

    /// Adds a fresh tuple x with tp(x / to) the transport of tp(rep / from)
    /// along the partial isomorphism from -> to, independent from C over the
    /// image of `from`: Side::Left asks x ind_{to} C, Side::Right asks
    /// C ind_{to} x. Requires valid_map(from, to). Returns the fresh vertex
    /// ids or nullopt on budget exhaustion.
    virtual std::optional<VTuple> realize_mapped(const VTuple& rep, const VTuple& from,
                                                 const VTuple& to, const VSet& C,
                                                 Side side, Budget& budget) = 0;

    /// Realize tp(rep / base) afresh, independent from C on the given side.
    std::optional<VTuple> realize(const VTuple& rep, const VTuple& base, const VSet& C,
                                  Side side, Budget& budget) {
        return realize_mapped(rep, base, base, C, side, budget);
    }
};

} // namespace wb

#endif
