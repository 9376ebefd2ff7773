#ifndef WB_FORB_BACKEND_HPP
#define WB_FORB_BACKEND_HPP

#include "wb/backend.hpp"
#include "wb/tower.hpp"

namespace wb {

/// Finite approximation of the limit of Forb_c(T), wrapping a tower.
/// Independence: A ind_B C iff A and C share nothing outside B and the
/// structure on A+B+C equals the prioritised completion of (AB, B, BC).
class ForbLimitBackend : public Backend {
public:
    explicit ForbLimitBackend(ApproximationTower tower) : tower_(std::move(tower)) {}

    ApproximationTower& tower() { return tower_; }
    const ApproximationTower& tower() const { return tower_; }
    const CompleteStructure& stage() const { return tower_.stage(); }

    std::unique_ptr<Backend> clone() const override {
        return std::make_unique<ForbLimitBackend>(*this);
    }
    VSet universe() const override { return tower_.stage().vertices(); }
    bool has_point(int v) const override { return tower_.stage().has_vertex(v); }
    bool ind(const VSet& A, const VSet& B, const VSet& C) const override;
    bool pair_compatible(int x1, int x2, int y1, int y2) const override {
        return stage().color(x1, x2) == stage().color(y1, y2);
    }
    std::optional<int> edge_color(int x, int y) const override {
        return stage().color(x, y);
    }
    std::optional<VTuple> realize_mapped(const VTuple& rep, const VTuple& from,
                                         const VTuple& to, const VSet& C,
                                         Side side, Budget& budget) override;

private:
    ApproximationTower tower_;
};

} // namespace wb

#endif
