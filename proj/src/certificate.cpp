#include "wb/certificate.hpp"

#include <json.hpp>

#include <memory>
#include <utility>

#include "wb/dlo_backend.hpp"
#include "wb/forb_backend.hpp"

namespace wb {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "swir-workbench-certificate";
constexpr int kVersion = 1;

json pairs_json(const PartialIso& g) {
    json arr = json::array();
    for (auto [x, y] : g.pairs()) arr.push_back(json::array({x, y}));
    return arr;
}

PartialIso pairs_parse(const json& arr) {
    PartialIso g;
    for (const auto& p : arr) g.add(p.at(0).get<int>(), p.at(1).get<int>());
    return g;
}

json vlist_json(const std::vector<int>& xs) {
    json arr = json::array();
    for (int v : xs) arr.push_back(v);
    return arr;
}

std::vector<int> vlist_parse(const json& arr) {
    std::vector<int> r;
    for (const auto& v : arr) r.push_back(v.get<int>());
    return r;
}

json language_json(const Language& lang) {
    json arr = json::array();
    for (const auto& s : lang.base_symbols())
        arr.push_back(json{{"name", s.name}, {"asymmetric", s.asymmetric}});
    return arr;
}

LanguagePtr language_parse(const json& arr) {
    std::vector<Language::Symbol> symbols;
    for (const auto& s : arr)
        symbols.push_back({s.at("name").get<std::string>(), s.at("asymmetric").get<bool>()});
    return std::make_shared<const Language>(std::move(symbols));
}

json backend_json(const Backend& b) {
    if (auto* forb = dynamic_cast<const ForbLimitBackend*>(&b))
        return json{{"type", "forb-limit"}, {"tower", forb->tower().dump()}};
    if (auto* dlo = dynamic_cast<const DLOBackend*>(&b)) {
        json pts = json::array();
        for (int v : dlo->universe())
            pts.push_back(json::array({v, dlo->value(v).str()}));
        return json{{"type", "dlo"}, {"points", pts}};
    }
    throw std::invalid_argument("certificate: backend kind not serializable");
}

std::unique_ptr<Backend> backend_parse(const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "forb-limit") {
        return std::make_unique<ForbLimitBackend>(
            ApproximationTower::parse(j.at("tower").get<std::string>()));
    }
    if (type == "dlo") {
        auto b = std::make_unique<DLOBackend>();
        for (const auto& p : j.at("points")) {
            int want = p.at(0).get<int>();
            int got = b->add_point(Rational(p.at(1).get<std::string>()));
            if (got != want)
                throw std::invalid_argument("dlo points must be listed in id order");
        }
        return b;
    }
    throw std::invalid_argument("unknown backend type: " + type);
}

json envelope(const std::string& kind) {
    return json{{"format", kFormat}, {"version", kVersion}, {"kind", kind}};
}

ReplayReport replay_conjugate_product(const json& j) {
    ReplayReport rep;
    rep.kind = "conjugate-product";
    std::unique_ptr<Backend> b = backend_parse(j.at("backend"));
    const json& pl = j.at("payload");
    ConjugateProductCertificate cert;
    for (const auto& g : pl.at("g")) cert.g.push_back(pairs_parse(g));
    for (const auto& a : pl.at("a")) cert.a.push_back(pairs_parse(a));
    for (const auto& Y : pl.at("Y")) cert.Y.push_back(vlist_parse(Y));
    for (const auto& x : pl.at("x")) cert.x.push_back(vlist_parse(x));
    rep.parsed = true;
    std::string why;
    rep.verdict = cert.verify(*b, &why);
    rep.detail = why;
    return rep;
}

ReplayReport replay_classification(const json& j) {
    ReplayReport rep;
    rep.kind = "classification-counterexample";
    const json& pl = j.at("payload");
    LanguagePtr lang = language_parse(pl.at("language"));
    TriangleSet T = TriangleSet::parse(lang, pl.at("triangles").get<std::string>());
    std::vector<std::string> names;
    for (const auto& n : pl.at("priority")) names.push_back(n.get<std::string>());
    PriorityOrder pr = PriorityOrder::parse(*lang, names);
    // The literal lists colored pairs only; vertices without any pair (sides
    // of size one) are restored from the recorded vertex lists.
    auto structure = [&](const char* lit_key, const char* verts_key) {
        CompleteStructure S =
            CompleteStructure::from_literal(lang, pl.at(lit_key).get<std::string>());
        for (int v : vlist_parse(pl.at(verts_key)))
            if (!S.has_vertex(v)) S.add_vertex(v);
        return S;
    };
    CompleteStructure A = structure("A", "A_vertices");
    CompleteStructure C = structure("C", "C_vertices");
    VSet B = vlist_parse(pl.at("B"));
    std::string claimed = pl.at("outcome").get<std::string>();
    rep.parsed = true;

    AmalgamProblem p(std::move(A), std::move(C), std::move(B));
    AmalgamOutcome out = prioritised_amalgam(p, T, pr);
    if (out.ok()) {
        rep.detail = "prioritised completion succeeds; not a counterexample";
        return rep;
    }
    std::string observed = out.no_color ? "no-admissible-colour" : "forbidden-triangle";
    if (observed != claimed) {
        rep.detail = "failure category changed: recorded " + claimed + ", replay gives " +
                     observed;
        return rep;
    }
    rep.verdict = true;
    return rep;
}

} // namespace

std::string conjugate_product_to_json(const ConjugateProductCertificate& cert,
                                      const Backend& backend) {
    json j = envelope("conjugate-product");
    j["backend"] = backend_json(backend);
    json g = json::array(), a = json::array(), Y = json::array(), x = json::array();
    for (const auto& m : cert.g) g.push_back(pairs_json(m));
    for (const auto& m : cert.a) a.push_back(pairs_json(m));
    for (const auto& s : cert.Y) Y.push_back(vlist_json(s));
    for (const auto& t : cert.x) x.push_back(vlist_json(t));
    j["payload"] = json{{"g", g}, {"a", a}, {"Y", Y}, {"x", x}};
    return j.dump(2) + "\n";
}

std::string classification_to_json(const TriangleSet& T, const PriorityOrder& pr,
                                   const ClassCounterexample& cex) {
    const Language& lang = T.language();
    json j = envelope("classification-counterexample");
    json names = json::array();
    for (int s : pr.solutions()) names.push_back(lang.name(s));
    std::string outcome =
        cex.outcome.no_color ? "no-admissible-colour" : "forbidden-triangle";
    j["payload"] = json{{"language", language_json(lang)},
                        {"triangles", T.to_string()},
                        {"priority", names},
                        {"A", cex.problem.A.to_literal()},
                        {"A_vertices", vlist_json(cex.problem.A.vertices())},
                        {"C", cex.problem.C.to_literal()},
                        {"C_vertices", vlist_json(cex.problem.C.vertices())},
                        {"B", vlist_json(cex.problem.B)},
                        {"outcome", outcome}};
    return j.dump(2) + "\n";
}

ReplayReport replay_certificate(const std::string& json_text) {
    ReplayReport rep;
    try {
        json j = json::parse(json_text);
        if (j.at("format").get<std::string>() != kFormat ||
            j.at("version").get<int>() != kVersion) {
            rep.detail = "unrecognized certificate format or version";
            return rep;
        }
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "conjugate-product") return replay_conjugate_product(j);
        if (kind == "classification-counterexample") return replay_classification(j);
        rep.kind = kind;
        rep.detail = "unknown certificate kind: " + kind;
        return rep;
    } catch (const std::exception& e) {
        rep.detail = e.what();
        return rep;
    }
}

} // namespace wb
