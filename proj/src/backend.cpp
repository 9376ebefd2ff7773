#include "wb/backend.hpp"

#include <stdexcept>

namespace wb {

bool Backend::valid_map(const VTuple& xs, const VTuple& ys, const VSet& fixed) const {
    if (xs.size() != ys.size()) return false;
    VTuple sx = xs, sy = ys;
    for (int v : fixed) {
        sx.push_back(v);
        sy.push_back(v);
    }
    for (size_t i = 0; i < sx.size(); ++i) {
        if (!has_point(sx[i]) || !has_point(sy[i])) return false;
        for (size_t j = i + 1; j < sx.size(); ++j) {
            // Well-definedness and injectivity on coincident points.
            if (sx[i] == sx[j] || sy[i] == sy[j]) {
                if ((sx[i] == sx[j]) != (sy[i] == sy[j])) return false;
                continue;
            }
            if (!pair_compatible(sx[i], sx[j], sy[i], sy[j])) return false;
        }
    }
    return true;
}

void Backend::tabulate_ind(const VSet& pts, std::vector<char>& bits) const {
    size_t n = pts.size();
    if (n > 16) throw std::invalid_argument("tabulate_ind: universe too large");
    size_t m = size_t{1} << n;
    bits.assign(m * m * m, 0);
    std::vector<VSet> sets(m);
    for (size_t s = 0; s < m; ++s)
        for (size_t i = 0; i < n; ++i)
            if (s & (size_t{1} << i)) sets[s].push_back(pts[i]);
    for (size_t A = 0; A < m; ++A)
        for (size_t B = 0; B < m; ++B)
            for (size_t C = 0; C < m; ++C)
                bits[(A * m + B) * m + C] = ind(sets[A], sets[B], sets[C]) ? 1 : 0;
}

} // namespace wb
