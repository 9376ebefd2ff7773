#include "wb/forb_backend.hpp"

#include <stdexcept>

namespace wb {

bool ForbLimitBackend::ind(const VSet& A, const VSet& B, const VSet& C) const {
    const CompleteStructure& M = stage();
    for (int v : set_union(A, B, C))
        if (!M.has_vertex(v)) throw std::invalid_argument("ind: vertex outside universe");
    if (!is_subset(set_intersect(A, C), B)) return false;
    VSet ab = set_union(A, B), bc = set_union(B, C);
    AmalgamProblem p(M.induced(ab), M.induced(bc), set_intersect(ab, bc));
    // Both sides are induced substructures of the T-free stage.
    AmalgamOutcome out =
        prioritised_amalgam(p, tower_.constraint(), tower_.priority(), true);
    if (!out.ok()) return false;
    return *out.completed == M.induced(set_union(ab, bc));
}

std::optional<VTuple> ForbLimitBackend::realize_mapped(const VTuple& rep,
                                                       const VTuple& from,
                                                       const VTuple& to, const VSet&,
                                                       Side side, Budget& budget) {
    if (!valid_map(from, to)) throw std::invalid_argument("realize_mapped: from->to not a partial isomorphism");
    if (!budget.spend_node()) return std::nullopt;

    // Compress repeats in rep; the realized tuple repeats accordingly.
    VTuple uniq;
    std::vector<size_t> pos(rep.size());
    for (size_t i = 0; i < rep.size(); ++i) {
        size_t j = 0;
        while (j < uniq.size() && uniq[j] != rep[i]) ++j;
        if (j == uniq.size()) uniq.push_back(rep[i]);
        pos[i] = j;
    }
    for (int v : uniq)
        for (int u : from)
            if (v == u) throw std::invalid_argument("realize_mapped: algebraic type");

    if (stage().size() + static_cast<int>(uniq.size()) > budget.max_vertices)
        return std::nullopt;

    // Transport tp(rep/from) along from -> to: placeholders stand for the
    // tuple in the pattern; realize_dir relabels them to fresh stage ids.
    VSet base = to_set(to);
    const CompleteStructure& M = stage();
    CompleteStructure pat = M.induced(base);
    VTuple ph;
    for (size_t i = 0; i < uniq.size(); ++i) {
        int p = tower_.fresh_id() + static_cast<int>(i);
        ph.push_back(p);
        pat.add_vertex(p);
    }
    for (size_t i = 0; i < uniq.size(); ++i) {
        for (size_t j = 0; j < to.size(); ++j)
            if (!pat.has_color(ph[i], to[j]))
                pat.set_color(ph[i], to[j], M.color(uniq[i], from[j]));
        for (size_t j = i + 1; j < uniq.size(); ++j)
            pat.set_color(ph[i], ph[j], M.color(uniq[i], uniq[j]));
    }
    TypeDescriptor td{pat, base, ph};
    VTuple fresh = side == Side::Left ? tower_.realize_left(td) : tower_.realize_right(td);
    VTuple out;
    for (size_t i = 0; i < rep.size(); ++i) out.push_back(fresh[pos[i]]);
    return out;
}

} // namespace wb
