#ifndef WB_AUDIT_HPP
#define WB_AUDIT_HPP

#include <string>
#include <vector>

#include "wb/backend.hpp"

namespace wb {

enum class Axiom { Invariance, Monotonicity, Transitivity, Existence, Stationarity, Symmetry };
enum class Variant { Left, Right };

std::string to_string(Axiom a);
std::string to_string(Variant v);

struct AuditBounds {
    int max_A = 2;
    int max_B = 2;
    int max_C = 2;
    int max_D = 2;
    int max_arity = 2;       // tuple arity for existence/stationarity
    VSet window;             // configuration pool; empty = whole universe
    long max_configs = 500'000'000;
    int max_iso_pool = 300;  // partial automorphisms tried for invariance
    int realize_vertices = 512; // stage growth allowance for existence
};

struct AxiomCounterexample {
    /// The sets/tuples of the violated instance, in axiom-specific order.
    std::vector<VSet> sets;
    std::string note;
};

struct AxiomReport {
    Axiom axiom;
    Variant variant;
    long configurations = 0;
    long violation_count = 0;
    std::vector<AxiomCounterexample> counterexamples; // capped sample
    bool budget_exhausted = false;
    /// Existence only: realizations that failed on resources, not logic.
    long budget_failures = 0;
    /// Monotonicity-right only: failures of the second conclusion as
    /// literally displayed ("D ind_AB D"), tracked apart from the corrected
    /// reading ("D ind_AB C") so neither interpretation is silently chosen.
    long displayed_reading_failures = 0;
    std::vector<AxiomCounterexample> displayed_reading_examples;

    bool clean() const { return violation_count == 0 && !budget_exhausted; }
};

/// Exhaustive sweep of one axiom over all configurations within bounds.
/// Existence mutates the backend (it realizes types); the others are
/// read-only. Symmetry is expected to fail on genuinely weak backends.
AxiomReport audit_axiom(Backend& backend, Axiom axiom, Variant variant,
                        const AuditBounds& bounds);

std::vector<AxiomReport> audit_all(Backend& backend, const AuditBounds& bounds);

/// Dense sweep for small universes (at most 9 points): monotonicity,
/// transitivity and symmetry range over ALL subsets of the universe via a
/// precomputed bitmask table of ind; the tuple/realization axioms use the
/// same bounded loops as audit_axiom with the window forced to the universe.
std::vector<AxiomReport> audit_all_dense(Backend& backend, const AuditBounds& bounds);

struct MonotonicityInstance {
    bool premise;        // A ind_B CD (left) / AD ind_B C (right)
    bool conclusion1;    // A ind_B C
    bool conclusion2;    // A ind_BC D (left) / D ind_AB C (right, corrected reading)
    bool conclusion2_displayed; // right variant as displayed: D ind_AB D
};

/// Evaluates the monotonicity premise and every displayed conclusion for one
/// configuration. The right variant's second conclusion is displayed as
/// "D ind_AB D", which looks like a typo for "D ind_AB C"; both readings are
/// evaluated and reported separately, neither is silently chosen.
MonotonicityInstance monotonicity_decompose(const Backend& backend, Variant variant,
                                            const VSet& A, const VSet& B,
                                            const VSet& C, const VSet& D);

} // namespace wb

#endif
