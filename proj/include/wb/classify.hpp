#ifndef WB_CLASSIFY_HPP
#define WB_CLASSIFY_HPP

#include <optional>
#include <vector>

#include "wb/amalgam.hpp"
#include "wb/backend.hpp"

namespace wb {

struct ClassCounterexample {
    AmalgamProblem problem;
    AmalgamOutcome outcome;
};

struct ClassVerdict {
    bool pass = true;
    /// Failures in enumeration order (smallest problems first); capped.
    std::vector<ClassCounterexample> counterexamples;
    long problems_checked = 0;

    const ClassCounterexample& least() const { return counterexamples.front(); }
};

/// Exhaustively tests the prioritised completion on all amalgam problems of
/// total size <= max_size built from isomorphism-class representatives.
/// By default each side adds at most 2 points over the base (with triangle
/// constraints a violation in the completion involves at most two new points
/// per side); full_sweep lifts that restriction.
ClassVerdict check_prioritised_class(LanguagePtr lang, const TriangleSet& T,
                                     const PriorityOrder& pr, int max_size,
                                     bool full_sweep = false,
                                     size_t max_counterexamples = 64);

struct SyntacticVerdict {
    bool pass = true;
    std::optional<TrianglePattern> offending;
};

/// No forbidden triangle carries two edges whose orientation class meets the
/// solution set. Sufficient for the prioritised completion to exist.
SyntacticVerdict condition1_check(const TriangleSet& T, const PriorityOrder& pr);

struct IndConfigCounterexample {
    int a, b, c;
    VSet B;
};

struct MainCondVerdict {
    bool part1_pass = true;
    std::optional<TrianglePattern> part1_offending;
    bool part2_pass = true;
    std::optional<IndConfigCounterexample> part2_counterexample;
    long configurations_checked = 0;

    bool pass() const { return part1_pass && part2_pass; }
};

/// Two-part check used by the small-index / fixed-point arguments:
/// (i) no forbidden triangle contains a two-edge path colored R1,R1 or R1,R2
///     for the top two priorities (syntactic);
/// (ii) within the backend's universe, whenever a ind_{bB} c and r(a,b) is a
///     solution color, a ind_B c follows (exhaustive over |B| <= max_base,
///     restricted to vertices in `window` if non-empty).
MainCondVerdict maincond_check(const TriangleSet& T, const PriorityOrder& pr,
                               const Backend& backend, int max_base,
                               const VSet& window = {});

/// Orientation pairs (r(a,b) with r(a,b) in the solution set, by id) used by
/// maincond part (ii); exposed for the audit loop.
bool solution_edge(const Language& lang, const PriorityOrder& pr, int sym);

} // namespace wb

#endif
