#ifndef WB_DLO_BACKEND_HPP
#define WB_DLO_BACKEND_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <map>

#include "wb/backend.hpp"

namespace wb {

using Rational = boost::multiprecision::cpp_rational;

/// Finite set of exact rational points in the dense linear order.
/// Independence: A ind_B C iff A and C share nothing outside B and every
/// increasing pair a in A-B, c in C-B, a <= c, is separated by some b in B.
class DLOBackend : public Backend {
public:
    DLOBackend() = default;

    /// Points 0..n-1 at values 0..n-1.
    static DLOBackend grid(int n);

    /// Adds a point with the given (unused) value; returns its id.
    int add_point(const Rational& value);
    const Rational& value(int v) const;
    bool has_value(const Rational& value) const;

    std::unique_ptr<Backend> clone() const override {
        return std::make_unique<DLOBackend>(*this);
    }
    VSet universe() const override;
    bool has_point(int v) const override { return points_.count(v) > 0; }
    bool ind(const VSet& A, const VSet& B, const VSet& C) const override;
    void tabulate_ind(const VSet& pts, std::vector<char>& bits) const override;
    bool pair_compatible(int x1, int x2, int y1, int y2) const override;
    std::optional<VTuple> realize_mapped(const VTuple& rep, const VTuple& from,
                                         const VTuple& to, const VSet& C,
                                         Side side, Budget& budget) override;

private:
    /// An unused value strictly between the bounds (absent bound = unbounded).
    Rational pick_between(const std::optional<Rational>& lo,
                          const std::optional<Rational>& hi) const;

    std::map<int, Rational> points_;
    int next_id_ = 0;
};

} // namespace wb

#endif
