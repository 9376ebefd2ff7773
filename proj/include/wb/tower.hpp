#ifndef WB_TOWER_HPP
#define WB_TOWER_HPP

#include <string>
#include <vector>

#include "wb/amalgam.hpp"
#include "wb/backend.hpp"

namespace wb {

/// Quantifier-free type of a designated tuple over a base, carried as the
/// induced pattern on base + tuple.
struct TypeDescriptor {
    CompleteStructure pattern;
    VSet base;
    VTuple tuple;

    int arity() const { return static_cast<int>(tuple.size()); }
    /// Realized only by tuple members already in the base.
    bool algebraic() const;
    /// Same base pointwise and the determined map tuple -> o.tuple over the
    /// base is an isomorphism of patterns respecting tuple order.
    bool equals(const TypeDescriptor& o) const;
};

TypeDescriptor tp(const CompleteStructure& M, const VTuple& a, const VSet& B);

/// All one-point extension types over B avoiding T inside B + {fresh_id},
/// in lexicographic color order.
std::vector<TypeDescriptor> one_point_extensions(const CompleteStructure& M,
                                                 const VSet& B, const TriangleSet& T,
                                                 int fresh_id);

struct SaturationBudget {
    int max_vertices = 40;
    int max_base = 1;
};

enum class SaturateStatus { Fixpoint, BudgetExhausted };

/// Thrown when the prioritised completion fails during a realization: the
/// class was not prioritised semi-free after all.
struct CompletionFailure {
    AmalgamOutcome outcome;
};

/// A chain of nested finite stages approximating the limit of Forb_c(T),
/// grown by prioritised completions. Fresh vertices always take ids above
/// all existing ones, so earlier stages are initial segments of later ones.
class ApproximationTower {
public:
    ApproximationTower(TriangleSet T, PriorityOrder pr, std::string name = "custom");

    const CompleteStructure& stage() const { return stage_; }
    CompleteStructure stage_at(size_t i) const;
    const std::vector<int>& stage_sizes() const { return sizes_; }
    const TriangleSet& constraint() const { return T_; }
    const PriorityOrder& priority() const { return pr_; }
    const std::string& set_name() const { return name_; }
    int fresh_id() const { return next_id_; }

    /// Adds a fresh tuple realizing p; colors to the rest of the stage come
    /// from the prioritised completion with the fresh points on the left
    /// (resp. right) side. Throws CompletionFailure if the completion fails.
    VTuple realize_left(const TypeDescriptor& p);
    VTuple realize_right(const TypeDescriptor& p);

    /// Realizes every unrealized one-point extension over every base of size
    /// <= budget.max_base, breadth-first over base size, until fixpoint or
    /// the vertex cap.
    SaturateStatus saturate(const SaturationBudget& budget);

    std::string dump() const;
    static ApproximationTower parse(const std::string& text);

private:
    VTuple realize_dir(const TypeDescriptor& p, Side side);

    TriangleSet T_;
    PriorityOrder pr_;
    std::string name_;
    CompleteStructure stage_;
    std::vector<int> sizes_;
    int next_id_ = 0;
};

struct HomogeneityReport {
    struct Failure {
        PairMap map;
        int unextendable_point;
    };
    long maps_checked = 0;
    std::vector<Failure> failures;
    bool budget_exhausted = false;
};

/// For every partial isomorphism between substructures of size <= s, checks
/// each one-point domain extension has an image inside M.
HomogeneityReport homogeneity_audit(const CompleteStructure& M, int s,
                                    long max_maps = 1'000'000);

} // namespace wb

#endif
