#include "wb/tower.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

#include "wb/iso.hpp"

namespace wb {

bool TypeDescriptor::algebraic() const {
    for (int v : tuple)
        if (set_contains(base, v)) return true;
    return false;
}

bool TypeDescriptor::equals(const TypeDescriptor& o) const {
    if (base != o.base || tuple.size() != o.tuple.size()) return false;
    std::map<int, int> m, inv;
    auto put = [&](int x, int y) {
        auto it = m.find(x);
        if (it != m.end()) return it->second == y;
        auto jt = inv.find(y);
        if (jt != inv.end()) return jt->second == x;
        m[x] = y;
        inv[y] = x;
        return true;
    };
    for (int v : base)
        if (!put(v, v)) return false;
    for (size_t i = 0; i < tuple.size(); ++i)
        if (!put(tuple[i], o.tuple[i])) return false;
    for (const auto& [x1, y1] : m)
        for (const auto& [x2, y2] : m) {
            if (x1 == x2) continue;
            if (pattern.color(x1, x2) != o.pattern.color(y1, y2)) return false;
        }
    return true;
}

TypeDescriptor tp(const CompleteStructure& M, const VTuple& a, const VSet& B) {
    for (int v : a)
        if (!M.has_vertex(v)) throw std::invalid_argument("tp: tuple vertex missing");
    for (int v : B)
        if (!M.has_vertex(v)) throw std::invalid_argument("tp: base vertex missing");
    return {M.induced(set_union(B, to_set(a))), B, a};
}

std::vector<TypeDescriptor> one_point_extensions(const CompleteStructure& M,
                                                 const VSet& B, const TriangleSet& T,
                                                 int fresh_id) {
    if (M.has_vertex(fresh_id) || set_contains(B, fresh_id))
        throw std::invalid_argument("one_point_extensions: fresh_id not fresh");
    const Language& lang = M.language();
    std::vector<TypeDescriptor> out;
    int n = static_cast<int>(B.size());
    std::vector<int> sym(static_cast<size_t>(n), 0);
    for (;;) {
        CompleteStructure S = M.induced(B);
        S.add_vertex(fresh_id);
        for (int i = 0; i < n; ++i) S.set_color(fresh_id, B[static_cast<size_t>(i)], sym[static_cast<size_t>(i)]);
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = i + 1; j < n && ok; ++j)
                if (T.contains(triangle_of(S, B[static_cast<size_t>(i)], fresh_id, B[static_cast<size_t>(j)])))
                    ok = false;
        if (ok) out.push_back({S, B, {fresh_id}});
        // Odometer over color assignments.
        int k = n - 1;
        while (k >= 0 && sym[static_cast<size_t>(k)] == lang.symbol_count() - 1) {
            sym[static_cast<size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
        ++sym[static_cast<size_t>(k)];
    }
    return out;
}

ApproximationTower::ApproximationTower(TriangleSet T, PriorityOrder pr, std::string name)
    : T_(std::move(T)), pr_(std::move(pr)), name_(std::move(name)),
      stage_(T_.language_ptr()) {}

CompleteStructure ApproximationTower::stage_at(size_t i) const {
    if (i >= sizes_.size()) throw std::out_of_range("stage_at");
    VSet vs(stage_.vertices().begin(),
            stage_.vertices().begin() + sizes_[i]);
    return stage_.induced(vs);
}

VTuple ApproximationTower::realize_left(const TypeDescriptor& p) {
    return realize_dir(p, Side::Left);
}

VTuple ApproximationTower::realize_right(const TypeDescriptor& p) {
    return realize_dir(p, Side::Right);
}

VTuple ApproximationTower::realize_dir(const TypeDescriptor& p, Side side) {
    if (p.algebraic())
        throw std::invalid_argument("realize: algebraic type");
    if (to_set(p.tuple).size() != p.tuple.size())
        throw std::invalid_argument("realize: repeated tuple entries");
    if (!is_subset(p.base, stage_.vertices()))
        throw std::invalid_argument("realize: base not in stage");
    if (!(p.pattern.induced(p.base) == stage_.induced(p.base)))
        throw std::invalid_argument("realize: pattern disagrees with stage on base");
    if (embeds_forbidden(p.pattern, T_))
        throw std::invalid_argument("realize: pattern embeds a forbidden triangle");

    // Relabel the tuple to fresh ids above the stage.
    VTuple fresh;
    for (int i = 0; i < p.arity(); ++i) fresh.push_back(next_id_ + i);
    CompleteStructure A(stage_.language_ptr());
    for (int v : p.base) A.add_vertex(v);
    for (int v : fresh) A.add_vertex(v);
    for (size_t i = 0; i < p.base.size(); ++i)
        for (size_t j = i + 1; j < p.base.size(); ++j)
            A.set_color(p.base[i], p.base[j], stage_.color(p.base[i], p.base[j]));
    for (size_t i = 0; i < fresh.size(); ++i) {
        for (int b : p.base) A.set_color(fresh[i], b, p.pattern.color(p.tuple[i], b));
        for (size_t j = i + 1; j < fresh.size(); ++j)
            A.set_color(fresh[i], fresh[j], p.pattern.color(p.tuple[i], p.tuple[j]));
    }

    AmalgamOutcome out = side == Side::Left
        // The pattern was just checked T-free and the stage is T-free by
        // construction, so the global check only needs the cross triangles.
        ? prioritised_amalgam(AmalgamProblem(A, stage_, p.base), T_, pr_, true)
        : prioritised_amalgam(AmalgamProblem(stage_, A, p.base), T_, pr_, true);
    if (!out.ok()) throw CompletionFailure{out};
    stage_ = *out.completed;
    sizes_.push_back(stage_.size());
    next_id_ += p.arity();
    return fresh;
}

SaturateStatus ApproximationTower::saturate(const SaturationBudget& budget) {
    if (stage_.size() == 0) {
        // Seed with the unique singleton type.
        CompleteStructure one(stage_.language_ptr());
        one.add_vertex(next_id_);
        stage_ = one;
        sizes_.push_back(1);
        ++next_id_;
    }
    for (;;) {
        bool changed = false;
        VSet verts = stage_.vertices();
        for (int k = 0; k <= budget.max_base; ++k) {
            // All k-subsets of the pass snapshot, lexicographic.
            std::vector<size_t> idx(static_cast<size_t>(k));
            for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = static_cast<size_t>(i);
            bool more = verts.size() >= static_cast<size_t>(k);
            while (more) {
                VSet B;
                for (size_t i : idx) B.push_back(verts[i]);
                for (const TypeDescriptor& ext :
                     one_point_extensions(stage_, B, T_, next_id_)) {
                    bool found = false;
                    for (int v : stage_.vertices()) {
                        if (set_contains(B, v)) continue;
                        if (tp(stage_, {v}, B).equals(ext)) {
                            found = true;
                            break;
                        }
                    }
                    if (found) continue;
                    if (stage_.size() + 1 > budget.max_vertices)
                        return SaturateStatus::BudgetExhausted;
                    realize_left(ext);
                    changed = true;
                }
                // Next combination.
                if (k == 0) break;
                int i = k - 1;
                while (i >= 0 &&
                       idx[static_cast<size_t>(i)] == verts.size() - static_cast<size_t>(k - i))
                    --i;
                if (i < 0) {
                    more = false;
                } else {
                    ++idx[static_cast<size_t>(i)];
                    for (int j = i + 1; j < k; ++j)
                        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
                }
            }
        }
        if (!changed) return SaturateStatus::Fixpoint;
    }
}

std::string ApproximationTower::dump() const {
    std::ostringstream out;
    out << "language";
    for (const auto& s : stage_.language().base_symbols())
        out << ' ' << s.name << (s.asymmetric ? "" : "~");
    out << '\n';
    out << "priority";
    for (int sym : pr_.solutions()) out << ' ' << stage_.language().name(sym);
    out << '\n';
    out << "triangles " << name_ << '\n';
    for (const TrianglePattern& p : T_.patterns())
        out << "pattern " << p.to_string(stage_.language()) << '\n';
    out << "stages";
    for (int n : sizes_) out << ' ' << n;
    out << '\n';
    out << "vertices";
    for (int v : stage_.vertices()) out << ' ' << v;
    out << '\n';
    out << stage_.to_literal();
    return out.str();
}

ApproximationTower ApproximationTower::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line, word;

    auto expect = [&](const std::string& key) {
        if (!std::getline(in, line)) throw std::invalid_argument("tower: truncated dump");
        std::istringstream ls(line);
        ls >> word;
        if (word != key) throw std::invalid_argument("tower: expected '" + key + "' line");
        return std::istringstream(line.substr(key.size()));
    };

    auto ls = expect("language");
    std::vector<Language::Symbol> syms;
    while (ls >> word) {
        bool sym_flag = !word.empty() && word.back() == '~';
        if (sym_flag) word.pop_back();
        syms.push_back({word, !sym_flag});
    }
    auto lang = std::make_shared<const Language>(syms);

    ls = expect("priority");
    std::vector<std::string> prio;
    while (ls >> word) prio.push_back(word);
    PriorityOrder pr = PriorityOrder::parse(*lang, prio);

    ls = expect("triangles");
    std::string name;
    ls >> name;

    TriangleSet T(lang);
    std::vector<int> sizes;
    std::string rest;
    for (;;) {
        if (!std::getline(in, line)) throw std::invalid_argument("tower: truncated dump");
        std::istringstream ps(line);
        ps >> word;
        if (word == "pattern") {
            T.insert(TrianglePattern::parse(*lang, line.substr(8)));
        } else if (word == "stages") {
            int n;
            while (ps >> n) sizes.push_back(n);
            break;
        } else {
            throw std::invalid_argument("tower: expected pattern/stages line");
        }
    }
    ls = expect("vertices");
    VSet verts;
    int v;
    while (ls >> v) verts.push_back(v);
    std::ostringstream body;
    while (std::getline(in, line)) body << line << '\n';

    ApproximationTower t(T, pr, name);
    CompleteStructure S = CompleteStructure::from_literal(lang, body.str());
    for (int u : verts)
        if (!S.has_vertex(u)) S.add_vertex(u);
    S.validate();
    t.stage_ = S;
    t.sizes_ = sizes;
    if (!sizes.empty() && sizes.back() != S.size())
        throw std::invalid_argument("tower: stage sizes disagree with structure");
    t.next_id_ = S.size() == 0 ? 0 : S.vertices().back() + 1;
    return t;
}

HomogeneityReport homogeneity_audit(const CompleteStructure& M, int s, long max_maps) {
    HomogeneityReport rep;
    const VSet& verts = M.vertices();

    // Can the partial iso `m` send the fresh domain point w anywhere?
    auto extendable = [&](const PairMap& m, int w) {
        for (int z : verts) {
            bool ok = true;
            for (auto [x, y] : m) {
                if (y == z || M.color(w, x) != M.color(z, y)) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
        }
        return false;
    };

    std::function<void(PairMap&, size_t)> visit = [&](PairMap& m, size_t from) {
        if (rep.budget_exhausted) return;
        if (!m.empty()) {
            if (++rep.maps_checked > max_maps) {
                rep.budget_exhausted = true;
                return;
            }
            for (int w : verts) {
                bool in_dom = false;
                for (auto [x, y] : m) in_dom = in_dom || x == w;
                if (in_dom) continue;
                if (!extendable(m, w)) rep.failures.push_back({m, w});
            }
        }
        if (static_cast<int>(m.size()) >= s) return;
        for (size_t i = from; i < verts.size(); ++i) {
            for (int y : verts) {
                bool ok = true;
                for (auto [px, py] : m) {
                    if (py == y || M.color(verts[i], px) != M.color(y, py)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                m.push_back({verts[i], y});
                visit(m, i + 1);
                m.pop_back();
            }
        }
    };
    PairMap m;
    visit(m, 0);
    return rep;
}

} // namespace wb
