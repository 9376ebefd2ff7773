#ifndef WB_TRIANGLE_HPP
#define WB_TRIANGLE_HPP

#include <array>
#include <optional>
#include <set>
#include <string>

#include "wb/structure.hpp"

namespace wb {

/// A complete structure on three points a,b,c, written as the ordered triple
/// (r(a,b), r(a,c), r(b,c)) and stored as the lexicographically least triple
/// over all six vertex reorderings (duals applied where an edge is reversed).
class TrianglePattern {
public:
    static TrianglePattern canonical(const Language& lang, int s_ab, int s_ac, int s_bc);
    /// Parses "R+ G- G+" style text.
    static TrianglePattern parse(const Language& lang, const std::string& text);

    const std::array<int, 3>& edges() const { return edges_; }
    std::string to_string(const Language& lang) const;

    auto operator<=>(const TrianglePattern&) const = default;

private:
    explicit TrianglePattern(std::array<int, 3> e) : edges_(e) {}
    std::array<int, 3> edges_;
};

/// Pattern of the induced triangle on three distinct vertices of S.
TrianglePattern triangle_of(const CompleteStructure& S, int a, int b, int c);

/// An isomorphism-closed set of forbidden triangles (canonical forms only).
class TriangleSet {
public:
    explicit TriangleSet(LanguagePtr lang) : lang_(std::move(lang)) {}

    static TriangleSet parse(LanguagePtr lang, const std::string& text);
    /// Cherlin's asymmetric examples of general type, n in 8..12.
    static TriangleSet cherlin(int n);

    void insert(const TrianglePattern& p) { patterns_.insert(p); }
    bool contains(const TrianglePattern& p) const { return patterns_.count(p) > 0; }
    bool empty() const { return patterns_.empty(); }
    size_t size() const { return patterns_.size(); }
    const std::set<TrianglePattern>& patterns() const { return patterns_; }
    const Language& language() const { return *lang_; }
    LanguagePtr language_ptr() const { return lang_; }

    std::string to_string() const;

private:
    LanguagePtr lang_;
    std::set<TrianglePattern> patterns_;
};

struct TriangleWitness {
    std::array<int, 3> vertices;
    TrianglePattern pattern;
};

/// Returns a witness triple iff some 3-subset of S induces a pattern in T.
std::optional<TriangleWitness> embeds_forbidden(const CompleteStructure& S,
                                                const TriangleSet& T);

/// Same check restricted to triples meeting both `left` and `right`.
/// Equivalent to embeds_forbidden when every triangle of S avoiding one of
/// the two sets is already known T-free.
std::optional<TriangleWitness> embeds_forbidden_cross(const CompleteStructure& S,
                                                      const TriangleSet& T,
                                                      const VSet& left,
                                                      const VSet& right);

} // namespace wb

#endif
