#ifndef WB_ISO_HPP
#define WB_ISO_HPP

#include <map>
#include <optional>
#include <vector>

#include "wb/structure.hpp"
#include "wb/triangle.hpp"

namespace wb {

/// Bijective color-preserving map A -> B extending `fixed`, or nullopt.
/// Deterministic: candidates are tried in vertex-id order.
std::optional<StructureEmbedding> find_isomorphism(const CompleteStructure& A,
                                                   const CompleteStructure& B,
                                                   const std::map<int, int>& fixed = {});

/// Canonical relabeling to vertex ids 0..n-1: isomorphic structures yield
/// identical output. `fixed_prefix` pins an initial segment of the image
/// order, giving canonical forms up to isomorphisms fixing those vertices
/// pointwise (in the listed order). Throws on size > max_size.
CompleteStructure canonical_form(const CompleteStructure& S,
                                 const std::vector<int>& fixed_prefix = {},
                                 int max_size = 10);

/// One representative per isomorphism class of size-n members of Forb_c(T),
/// canonically sorted. n is capped (default 7).
std::vector<CompleteStructure> enumerate_forb(LanguagePtr lang, const TriangleSet& T,
                                              int n, int max_n = 7);

/// All extensions of `base` by `extra` fresh vertices staying in Forb_c(T),
/// deduplicated up to isomorphism fixing `base` pointwise. Fresh vertices get
/// ids starting at `first_id`.
std::vector<CompleteStructure> enumerate_extensions(const CompleteStructure& base,
                                                    const TriangleSet& T, int extra,
                                                    int first_id);

} // namespace wb

#endif
