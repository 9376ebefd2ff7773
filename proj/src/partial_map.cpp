#include "wb/partial_map.hpp"

#include <stdexcept>

namespace wb {

int PartialIso::image(int x) const {
    auto it = fwd_.find(x);
    if (it == fwd_.end()) throw std::out_of_range("PartialIso::image: undefined");
    return it->second;
}

int PartialIso::preimage(int y) const {
    auto it = bwd_.find(y);
    if (it == bwd_.end()) throw std::out_of_range("PartialIso::preimage: undefined");
    return it->second;
}

std::optional<int> PartialIso::try_image(int x) const {
    auto it = fwd_.find(x);
    if (it == fwd_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> PartialIso::try_preimage(int y) const {
    auto it = bwd_.find(y);
    if (it == bwd_.end()) return std::nullopt;
    return it->second;
}

void PartialIso::add(int x, int y) {
    auto f = fwd_.find(x);
    if (f != fwd_.end()) {
        if (f->second != y) throw std::invalid_argument("PartialIso::add: conflicting image");
        return;
    }
    if (bwd_.count(y)) throw std::invalid_argument("PartialIso::add: image already taken");
    fwd_[x] = y;
    bwd_[y] = x;
}

VSet PartialIso::domain() const {
    VSet s;
    for (auto& [x, y] : fwd_) s.push_back(x);
    return s;
}

VSet PartialIso::range() const {
    VSet s;
    for (auto& [y, x] : bwd_) s.push_back(y);
    return s;
}

VTuple PartialIso::domain_tuple() const { return domain(); }

VTuple PartialIso::range_tuple() const {
    VTuple t;
    for (auto& [x, y] : fwd_) t.push_back(y);
    return t;
}

PairMap PartialIso::pairs() const {
    PairMap p;
    for (auto& [x, y] : fwd_) p.emplace_back(x, y);
    return p;
}

bool PartialIso::extends(const PartialIso& g) const {
    for (auto& [x, y] : g.fwd_) {
        auto it = fwd_.find(x);
        if (it == fwd_.end() || it->second != y) return false;
    }
    return true;
}

bool PartialIso::is_identity() const {
    for (auto& [x, y] : fwd_)
        if (x != y) return false;
    return true;
}

bool PartialIso::fixes(const VSet& s) const {
    for (int v : s) {
        auto it = fwd_.find(v);
        if (it == fwd_.end() || it->second != v) return false;
    }
    return true;
}

PartialIso PartialIso::inverse() const {
    PartialIso g;
    g.fwd_ = bwd_;
    g.bwd_ = fwd_;
    return g;
}

PartialIso PartialIso::after(const PartialIso& h) const {
    PartialIso g;
    for (auto& [x, y] : h.fwd_) {
        auto it = fwd_.find(y);
        if (it != fwd_.end()) g.add(x, it->second);
    }
    return g;
}

PartialIso PartialIso::conjugate_by(const PartialIso& a) const {
    return a.after(this->after(a.inverse()));
}

PartialIso PartialIso::commutator(const PartialIso& g, const PartialIso& h) {
    return g.inverse().after(h.inverse().after(g.after(h)));
}

std::optional<VTuple> PartialIso::apply(const VTuple& xs) const {
    VTuple out;
    out.reserve(xs.size());
    for (int x : xs) {
        auto it = fwd_.find(x);
        if (it == fwd_.end()) return std::nullopt;
        out.push_back(it->second);
    }
    return out;
}

std::optional<VSet> PartialIso::apply_set(const VSet& xs) const {
    auto t = apply(xs);
    if (!t) return std::nullopt;
    return to_set(*t);
}

std::optional<VTuple> apply_ext(Backend& b, IsoRef g, const VTuple& xs, Budget& budget,
                                const VSet& C, Side side) {
    VTuple missing;
    for (int x : xs)
        if (!g.defined(x) && !set_contains(to_set(missing), x)) missing.push_back(x);
    if (!missing.empty()) {
        auto fresh = b.realize_mapped(missing, g.domain_tuple(), g.range_tuple(), C, side,
                                      budget);
        if (!fresh) return std::nullopt;
        for (size_t i = 0; i < missing.size(); ++i) g.add(missing[i], (*fresh)[i]);
    }
    VTuple out;
    out.reserve(xs.size());
    for (int x : xs) out.push_back(*g.try_image(x));
    return out;
}

} // namespace wb
