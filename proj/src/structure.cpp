#include "wb/structure.hpp"

#include <sstream>
#include <stdexcept>

namespace wb {

void CompleteStructure::add_vertex(int v) {
    auto it = std::lower_bound(verts_.begin(), verts_.end(), v);
    if (it != verts_.end() && *it == v)
        throw std::invalid_argument("vertex already present: " + std::to_string(v));
    verts_.insert(it, v);
}

void CompleteStructure::set_color(int a, int b, int sym) {
    if (a == b) throw std::invalid_argument("irreflexive: cannot color (v,v)");
    if (!has_vertex(a) || !has_vertex(b))
        throw std::invalid_argument("set_color on missing vertex");
    col_[{a, b}] = sym;
    col_[{b, a}] = lang_->dual(sym);
}

int CompleteStructure::color(int a, int b) const {
    auto it = col_.find({a, b});
    if (it == col_.end())
        throw std::invalid_argument("uncolored pair (" + std::to_string(a) + "," +
                                    std::to_string(b) + ")");
    return it->second;
}

bool CompleteStructure::has_color(int a, int b) const { return col_.count({a, b}) > 0; }

CompleteStructure CompleteStructure::induced(const VSet& vs) const {
    CompleteStructure r(lang_);
    for (int v : vs) {
        if (!has_vertex(v))
            throw std::invalid_argument("induced: missing vertex " + std::to_string(v));
        r.add_vertex(v);
    }
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j)
            r.set_color(vs[i], vs[j], color(vs[i], vs[j]));
    return r;
}

void CompleteStructure::validate() const {
    for (size_t i = 0; i < verts_.size(); ++i) {
        for (size_t j = 0; j < verts_.size(); ++j) {
            if (i == j) {
                if (col_.count({verts_[i], verts_[i]}))
                    throw std::logic_error("reflexive edge stored");
                continue;
            }
            int a = verts_[i], b = verts_[j];
            if (!has_color(a, b)) throw std::logic_error("incomplete structure");
            if (color(b, a) != lang_->dual(color(a, b)))
                throw std::logic_error("coherence violated");
        }
    }
}

bool CompleteStructure::is_complete() const {
    for (size_t i = 0; i < verts_.size(); ++i)
        for (size_t j = i + 1; j < verts_.size(); ++j)
            if (!has_color(verts_[i], verts_[j])) return false;
    return true;
}

std::string CompleteStructure::to_literal() const {
    std::ostringstream out;
    for (size_t i = 0; i < verts_.size(); ++i)
        for (size_t j = i + 1; j < verts_.size(); ++j)
            out << verts_[i] << ' ' << verts_[j] << ' '
                << lang_->name(color(verts_[i], verts_[j])) << '\n';
    return out.str();
}

CompleteStructure CompleteStructure::from_literal(LanguagePtr lang, const std::string& text) {
    CompleteStructure s(std::move(lang));
    std::istringstream in(text);
    std::string line;
    struct Edge {
        int a, b, sym;
    };
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int a, b;
        std::string sym;
        if (!(ls >> a >> b >> sym)) continue;
        edges.push_back({a, b, s.language().id_of(sym)});
        if (!s.has_vertex(a)) s.add_vertex(a);
        if (!s.has_vertex(b)) s.add_vertex(b);
    }
    for (const auto& e : edges) s.set_color(e.a, e.b, e.sym);
    return s;
}

bool StructureEmbedding::preserves(const CompleteStructure& src,
                                   const CompleteStructure& dst) const {
    for (const auto& [x, fx] : map) {
        if (!src.has_vertex(x) || !dst.has_vertex(fx)) return false;
        for (const auto& [y, fy] : map) {
            if (x == y) continue;
            if (fx == fy) return false;
            if (dst.color(fx, fy) != src.color(x, y)) return false;
        }
    }
    return true;
}

} // namespace wb
