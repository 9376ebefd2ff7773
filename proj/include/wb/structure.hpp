#ifndef WB_STRUCTURE_HPP
#define WB_STRUCTURE_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "wb/language.hpp"
#include "wb/sets.hpp"

namespace wb {

/// A finite complete edge-coloured directed graph: every ordered pair of
/// distinct vertices carries exactly one oriented symbol, coherently with its
/// dual in the opposite direction. Vertex ids are arbitrary small integers so
/// substructures of a common ambient structure can share ids.
class CompleteStructure {
public:
    explicit CompleteStructure(LanguagePtr lang) : lang_(std::move(lang)) {}

    const Language& language() const { return *lang_; }
    LanguagePtr language_ptr() const { return lang_; }

    int size() const { return static_cast<int>(verts_.size()); }
    const VSet& vertices() const { return verts_; }
    bool has_vertex(int v) const { return set_contains(verts_, v); }

    void add_vertex(int v);
    /// Sets colors(a,b) = sym and colors(b,a) = dual(sym).
    void set_color(int a, int b, int sym);

    int color(int a, int b) const;
    bool has_color(int a, int b) const;

    CompleteStructure induced(const VSet& vs) const;

    /// Completeness + coherence + irreflexivity; throws on violation.
    void validate() const;
    bool is_complete() const;

    bool operator==(const CompleteStructure& o) const {
        return verts_ == o.verts_ && col_ == o.col_;
    }
    bool operator<(const CompleteStructure& o) const {
        return std::tie(verts_, col_) < std::tie(o.verts_, o.col_);
    }

    /// One line per unordered pair, forward direction only: "a b SYMBOL".
    std::string to_literal() const;
    static CompleteStructure from_literal(LanguagePtr lang, const std::string& text);

private:
    LanguagePtr lang_;
    VSet verts_;
    std::map<std::pair<int, int>, int> col_;
};

/// An injective color-preserving map between complete structures.
struct StructureEmbedding {
    std::map<int, int> map;

    bool preserves(const CompleteStructure& src, const CompleteStructure& dst) const;
};

} // namespace wb

#endif
