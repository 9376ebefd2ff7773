#ifndef WB_CERTIFICATE_HPP
#define WB_CERTIFICATE_HPP

#include <string>

#include "wb/classify.hpp"
#include "wb/dynamics.hpp"

namespace wb {

/// Self-contained replayable records: the claim plus the backend it was made
/// on, serialized as UTF-8 JSON. Loading reconstructs the backend from the
/// embedded data and recomputes every claimed fact; nothing is trusted from
/// construction-time bookkeeping.

/// Kind "conjugate-product": conjugators a_i, relocation sets Y_i and the
/// product equation g_4^{a_4}...g_1^{a_1}(x_0) = x_4.
std::string conjugate_product_to_json(const ConjugateProductCertificate& cert,
                                      const Backend& backend);

/// Kind "classification-counterexample": an amalgamation problem on which the
/// prioritised completion fails for the recorded triangle set and priority.
std::string classification_to_json(const TriangleSet& T, const PriorityOrder& pr,
                                   const ClassCounterexample& cex);

struct ReplayReport {
    bool parsed = false;  ///< false: not a well-formed certificate at all
    bool verdict = false; ///< the recorded claim replays successfully
    std::string kind;
    std::string detail;   ///< first failing fact, or empty
};

/// Parses a certificate of either kind and replays its claims from the
/// embedded data alone. Same input text always yields the same report.
ReplayReport replay_certificate(const std::string& json_text);

} // namespace wb

#endif
