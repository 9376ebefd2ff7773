#include "wb/dlo_backend.hpp"

#include <algorithm>
#include <stdexcept>

namespace wb {

DLOBackend DLOBackend::grid(int n) {
    DLOBackend b;
    for (int i = 0; i < n; ++i) b.add_point(i);
    return b;
}

int DLOBackend::add_point(const Rational& value) {
    if (has_value(value)) throw std::invalid_argument("add_point: value already used");
    points_[next_id_] = value;
    return next_id_++;
}

const Rational& DLOBackend::value(int v) const {
    auto it = points_.find(v);
    if (it == points_.end()) throw std::invalid_argument("value: no such point");
    return it->second;
}

bool DLOBackend::has_value(const Rational& value) const {
    for (const auto& [v, x] : points_)
        if (x == value) return true;
    return false;
}

VSet DLOBackend::universe() const {
    VSet u;
    for (const auto& [v, x] : points_) u.push_back(v);
    return u;
}

bool DLOBackend::ind(const VSet& A, const VSet& B, const VSet& C) const {
    for (int v : set_union(A, B, C))
        if (!has_point(v)) throw std::invalid_argument("ind: point outside universe");
    if (!is_subset(set_intersect(A, C), B)) return false;
    for (int a : set_minus(A, B))
        for (int c : set_minus(C, B)) {
            if (!(value(a) <= value(c))) continue;
            bool separated = false;
            for (int b : B)
                if (value(a) <= value(b) && value(b) <= value(c)) {
                    separated = true;
                    break;
                }
            if (!separated) return false;
        }
    return true;
}

void DLOBackend::tabulate_ind(const VSet& pts, std::vector<char>& bits) const {
    size_t n = pts.size();
    if (n > 16) throw std::invalid_argument("tabulate_ind: universe too large");
    size_t m = size_t{1} << n;
    bits.assign(m * m * m, 0);
    // between[i][j]: the points weakly between pts[i] and pts[j]; a pair
    // (a, c) with value(a) <= value(c) needs a separator from this mask in B.
    std::vector<std::vector<unsigned>> between(n, std::vector<unsigned>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (value(pts[j]) < value(pts[i])) continue;
            for (size_t k = 0; k < n; ++k)
                if (value(pts[i]) <= value(pts[k]) && value(pts[k]) <= value(pts[j]))
                    between[i][j] |= 1u << k;
        }
    for (unsigned B = 0; B < m; ++B) {
        // bad_a[c]: the a-points left unseparated from c by this B.
        std::vector<unsigned> bad_a(n, 0);
        for (size_t a = 0; a < n; ++a) {
            if (B & (1u << a)) continue;
            for (size_t c = 0; c < n; ++c)
                if (!(B & (1u << c)) && between[a][c] && !(B & between[a][c]))
                    bad_a[c] |= 1u << a;
        }
        // bad[C']: all a unseparated from some c in C' (subset DP over C').
        std::vector<unsigned> bad(m, 0);
        for (unsigned Cp = 1; Cp < m; ++Cp) {
            unsigned low = Cp & (~Cp + 1);
            bad[Cp] = bad[Cp ^ low] | bad_a[static_cast<size_t>(__builtin_ctz(low))];
        }
        for (unsigned C = 0; C < m; ++C) {
            unsigned Cp = C & ~B;
            // A ind_B C iff A avoids C outside B and no a in A is bad for C'.
            unsigned forb = Cp | bad[Cp];
            size_t base = (size_t{0} * m + B) * m + C;
            for (unsigned A = 0; A < m; ++A)
                if (!(A & forb)) bits[base + (size_t)A * m * m] = 1;
        }
    }
}

bool DLOBackend::pair_compatible(int x1, int x2, int y1, int y2) const {
    return (value(x1) < value(x2)) == (value(y1) < value(y2));
}

Rational DLOBackend::pick_between(const std::optional<Rational>& lo,
                                  const std::optional<Rational>& hi) const {
    if (lo && hi && !(*lo < *hi)) throw std::logic_error("pick_between: empty interval");
    Rational x;
    if (lo && hi)
        x = (*lo + *hi) / 2;
    else if (lo)
        x = *lo + 1;
    else if (hi)
        x = *hi - 1;
    else
        x = 0;
    // Nudge past collisions with existing values, staying in the interval.
    while (has_value(x)) {
        if (hi)
            x = (x + *hi) / 2;
        else
            x = x + 1;
    }
    return x;
}

std::optional<VTuple> DLOBackend::realize_mapped(const VTuple& rep, const VTuple& from,
                                                 const VTuple& to, const VSet& C,
                                                 Side side, Budget& budget) {
    if (!valid_map(from, to))
        throw std::invalid_argument("realize_mapped: from->to not order-preserving");
    if (!budget.spend_node()) return std::nullopt;

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
    if (static_cast<int>(points_.size() + uniq.size()) > budget.max_vertices)
        return std::nullopt;

    // Place the unique points in increasing order of their template values.
    std::vector<size_t> order(uniq.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return value(uniq[i]) < value(uniq[j]); });

    VSet base = to_set(to);
    std::map<size_t, Rational> placed;
    std::optional<Rational> prev; // value of the previously placed point
    for (size_t k : order) {
        // Cut of uniq[k] relative to `from`, transported to `to` values.
        std::optional<Rational> lo, hi;
        for (size_t j = 0; j < from.size(); ++j) {
            const Rational& fv = value(from[j]);
            const Rational& tv = value(to[j]);
            if (fv < value(uniq[k])) {
                if (!lo || *lo < tv) lo = tv;
            } else {
                if (!hi || tv < *hi) hi = tv;
            }
        }
        // Earlier fresh points sit below this one; if the previous one landed
        // in the same cut it tightens the lower bound.
        if (prev && (!lo || *lo < *prev) && (!hi || *prev < *hi)) lo = prev;
        // Independence from C over `to` on the requested side: C-points
        // strictly inside the cut must all fall below (Left) or above (Right).
        for (int c : set_minus(C, base)) {
            const Rational& cv = value(c);
            if ((lo && !(*lo < cv)) || (hi && !(cv < *hi))) continue;
            if (side == Side::Left) {
                if (!lo || *lo < cv) lo = cv;
            } else {
                if (!hi || cv < *hi) hi = cv;
            }
        }
        if (lo && hi && !(*lo < *hi)) return std::nullopt; // contradictory constraints
        Rational x = pick_between(lo, hi);
        placed[k] = x;
        prev = x;
    }
    VTuple fresh_uniq(uniq.size());
    for (size_t k = 0; k < uniq.size(); ++k) fresh_uniq[k] = add_point(placed[k]);
    VTuple out;
    for (size_t i = 0; i < rep.size(); ++i) out.push_back(fresh_uniq[pos[i]]);
    return out;
}

} // namespace wb
