#ifndef WB_AMALGAM_HPP
#define WB_AMALGAM_HPP

#include <optional>
#include <variant>
#include <vector>

#include "wb/structure.hpp"
#include "wb/triangle.hpp"

namespace wb {

/// The ordered solution set L' = R_1 > ... > R_m driving the completion.
class PriorityOrder {
public:
    PriorityOrder(const Language& lang, std::vector<int> solutions);
    static PriorityOrder parse(const Language& lang,
                               const std::vector<std::string>& names);

    const std::vector<int>& solutions() const { return solutions_; }
    bool is_solution(int sym) const;
    /// Does {sym, dual(sym)} meet the solution set?
    bool orientation_class_in(const Language& lang, int sym) const;

private:
    std::vector<int> solutions_;
};

/// A and C sharing exactly the induced substructure B (common vertex ids).
struct AmalgamProblem {
    CompleteStructure A, C;
    VSet B;

    AmalgamProblem(CompleteStructure a, CompleteStructure c, VSet b);
    VSet a_side() const { return set_minus(A.vertices(), B); }
    VSet c_side() const { return set_minus(C.vertices(), B); }
};

struct NoAdmissibleColor {
    int a, c;
    /// For each priority color tried (in order), one blocking base vertex.
    std::vector<std::pair<int, int>> blocked_by;  // (symbol, b)
};

struct ForbiddenTriangleInResult {
    TriangleWitness witness;
};

struct AmalgamOutcome {
    std::optional<CompleteStructure> completed;
    std::optional<NoAdmissibleColor> no_color;
    std::optional<ForbiddenTriangleInResult> bad_triangle;

    bool ok() const { return completed.has_value(); }
};

/// The prioritised completion A (x)_B C: each cross pair (a, c) gets the first
/// solution color not blocked by any base point, then the result is checked
/// globally against T. Per-pair choices depend only on B, so the outcome is
/// independent of processing order. When both sides are already known T-free
/// (stages, their induced substructures), sides_free restricts the global
/// check to triangles meeting both sides; the verdict is unchanged but the
/// scan drops from cubic in the result to quadratic per cross vertex.
AmalgamOutcome prioritised_amalgam(const AmalgamProblem& p, const TriangleSet& T,
                                   const PriorityOrder& pr, bool sides_free = false);

/// Free amalgam: every cross pair colored with the single solution symbol.
CompleteStructure free_amalgam(const AmalgamProblem& p, int solution);

/// Backtracking search for any T-free completion whose cross colors all lie in
/// the solution set; distinguishes "semi-free" from "prioritised semi-free".
std::optional<CompleteStructure> semifree_complete(const AmalgamProblem& p,
                                                   const TriangleSet& T,
                                                   const std::vector<int>& solutions);

} // namespace wb

#endif
