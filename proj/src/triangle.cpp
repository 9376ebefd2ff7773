#include "wb/triangle.hpp"

#include <sstream>
#include <stdexcept>

namespace wb {

TrianglePattern TrianglePattern::canonical(const Language& lang, int x, int y, int z) {
    auto d = [&](int s) { return lang.dual(s); };
    // All six reorderings of (r(ab), r(ac), r(bc)).
    std::array<std::array<int, 3>, 6> forms = {{
        {x, y, z},                // abc
        {y, x, d(z)},             // acb
        {d(x), z, y},             // bac
        {z, d(x), d(y)},          // bca
        {d(y), d(z), x},          // cab
        {d(z), d(y), d(x)},       // cba
    }};
    std::array<int, 3> best = forms[0];
    for (const auto& f : forms)
        if (f < best) best = f;
    return TrianglePattern(best);
}

TrianglePattern TrianglePattern::parse(const Language& lang, const std::string& text) {
    std::istringstream in(text);
    std::string a, b, c;
    if (!(in >> a >> b >> c))
        throw std::invalid_argument("triangle pattern needs three symbols: " + text);
    return canonical(lang, lang.id_of(a), lang.id_of(b), lang.id_of(c));
}

std::string TrianglePattern::to_string(const Language& lang) const {
    return lang.name(edges_[0]) + " " + lang.name(edges_[1]) + " " + lang.name(edges_[2]);
}

TrianglePattern triangle_of(const CompleteStructure& S, int a, int b, int c) {
    if (a == b || a == c || b == c)
        throw std::invalid_argument("triangle_of: vertices must be distinct");
    if (!S.has_vertex(a) || !S.has_vertex(b) || !S.has_vertex(c))
        throw std::invalid_argument("triangle_of: missing vertex");
    return TrianglePattern::canonical(S.language(), S.color(a, b), S.color(a, c),
                                      S.color(b, c));
}

TriangleSet TriangleSet::parse(LanguagePtr lang, const std::string& text) {
    TriangleSet T(lang);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream probe(line);
        std::string tok;
        if (!(probe >> tok)) continue;
        T.insert(TrianglePattern::parse(*lang, line));
    }
    return T;
}

TriangleSet TriangleSet::cherlin(int n) {
    auto lang = Language::two_asymmetric_rg();
    const char* spec = nullptr;
    switch (n) {
        case 8: spec = "G+ G- G+\nR+ G- G+\n"; break;
        case 9: spec = "G+ G+ G+\nR+ G- G+\n"; break;
        case 10: spec = "G+ G+ G+\nG+ G- G+\nR+ G- G+\n"; break;
        case 11: spec = "R+ R- R+\nG+ G+ G+\nG+ G- G+\nG+ R+ R+\nG+ R- R-\n"; break;
        case 12:
            spec = "R+ R- R+\nG+ G+ G+\nR+ G- G+\nG+ R+ R+\nG+ R- R-\nG+ R+ R-\n";
            break;
        default: throw std::invalid_argument("cherlin preset must be 8..12");
    }
    return parse(lang, spec);
}

std::string TriangleSet::to_string() const {
    std::string out;
    for (const auto& p : patterns_) out += p.to_string(*lang_) + "\n";
    return out;
}

std::optional<TriangleWitness> embeds_forbidden(const CompleteStructure& S,
                                                const TriangleSet& T) {
    if (T.empty()) return std::nullopt;
    const VSet& vs = S.vertices();
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j)
            for (size_t k = j + 1; k < vs.size(); ++k) {
                auto p = triangle_of(S, vs[i], vs[j], vs[k]);
                if (T.contains(p)) return TriangleWitness{{vs[i], vs[j], vs[k]}, p};
            }
    return std::nullopt;
}

std::optional<TriangleWitness> embeds_forbidden_cross(const CompleteStructure& S,
                                                      const TriangleSet& T,
                                                      const VSet& left,
                                                      const VSet& right) {
    if (T.empty()) return std::nullopt;
    for (int a : left)
        for (int c : right) {
            if (a == c) continue;
            for (int x : S.vertices()) {
                if (x == a || x == c) continue;
                auto p = triangle_of(S, a, c, x);
                if (T.contains(p)) return TriangleWitness{{a, c, x}, p};
            }
        }
    return std::nullopt;
}

} // namespace wb
