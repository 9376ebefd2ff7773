#ifndef WB_SETS_HPP
#define WB_SETS_HPP

#include <algorithm>
#include <initializer_list>
#include <vector>

namespace wb {

using Vertex = int;
/// Sorted, duplicate-free vertex set.
using VSet = std::vector<int>;
/// Ordered tuple of vertices (repeats allowed).
using VTuple = std::vector<int>;

inline VSet make_set(std::initializer_list<int> xs) {
    VSet s(xs);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline VSet to_set(const VTuple& t) {
    VSet s(t);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline bool set_contains(const VSet& s, int v) {
    return std::binary_search(s.begin(), s.end(), v);
}

inline VSet set_union(const VSet& a, const VSet& b) {
    VSet r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

inline VSet set_union(const VSet& a, const VSet& b, const VSet& c) {
    return set_union(set_union(a, b), c);
}

inline VSet set_minus(const VSet& a, const VSet& b) {
    VSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

inline VSet set_intersect(const VSet& a, const VSet& b) {
    VSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

inline bool is_subset(const VSet& a, const VSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline VSet set_insert(VSet s, int v) {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) s.insert(it, v);
    return s;
}

inline VTuple tuple_concat(const VTuple& a, const VTuple& b) {
    VTuple r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

} // namespace wb

#endif
