#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace selfadj {

struct Interval {
    double a;
    double b;
    [[nodiscard]] double length() const noexcept { return b - a; }
};

/// Disjoint union of compact intervals carrying a piecewise-constant metric
/// eta. On each interval the Laplace-Beltrami operator is the Sturm-Liouville
/// operator -(1/W) d/dx p d/dx with W = 1/(2 sqrt(eta)) and p = 1/sqrt(eta).
///
/// Boundary points are indexed l = 0..2n-1 in the order a_0, b_0, a_1, b_1, ...
class IntervalManifold {
public:
    IntervalManifold(std::vector<Interval> intervals, std::vector<double> metric);

    [[nodiscard]] std::size_t interval_count() const noexcept { return intervals_.size(); }
    [[nodiscard]] std::size_t boundary_dim() const noexcept { return 2 * intervals_.size(); }
    [[nodiscard]] const Interval& interval(std::size_t alpha) const { return intervals_.at(alpha); }
    [[nodiscard]] std::span<const Interval> intervals() const noexcept { return intervals_; }

    [[nodiscard]] double metric(std::size_t alpha) const { return metric_.at(alpha); }
    [[nodiscard]] double length(std::size_t alpha) const { return intervals_.at(alpha).length(); }
    [[nodiscard]] double total_length() const noexcept { return total_length_; }
    [[nodiscard]] double weight(std::size_t alpha) const;     // W_alpha
    [[nodiscard]] double stiffness(std::size_t alpha) const;  // p_alpha

    /// Coordinate of boundary point l.
    [[nodiscard]] double boundary_point(std::size_t l) const;

private:
    std::vector<Interval> intervals_;
    std::vector<double> metric_;
    double total_length_ = 0.0;
};

/// Validating factory. Throws Error{EmptyManifold | DegenerateInterval | NonPositiveMetric}.
IntervalManifold build_manifold(std::span<const std::pair<double, double>> intervals,
                                std::span<const double> metric);

/// Uniform per-interval subdivision: interval alpha gets r_alpha interior nodes,
/// r_alpha = floor(L_alpha N / L) + 1, and step h_alpha = L_alpha / (r_alpha + 1).
class Mesh {
public:
    Mesh(const IntervalManifold& manifold, std::size_t resolution);

    [[nodiscard]] const IntervalManifold& manifold() const noexcept { return manifold_; }
    [[nodiscard]] std::size_t resolution() const noexcept { return resolution_; }
    [[nodiscard]] std::size_t interval_count() const noexcept { return r_.size(); }
    [[nodiscard]] std::size_t interior_nodes(std::size_t alpha) const { return r_.at(alpha); }
    [[nodiscard]] std::span<const std::size_t> interior_node_counts() const noexcept { return r_; }
    [[nodiscard]] double step(std::size_t alpha) const { return h_.at(alpha); }
    [[nodiscard]] std::span<const double> steps() const noexcept { return h_; }

    /// x_k of interval alpha, k = 0..r_alpha+1, computed as a + k h.
    [[nodiscard]] double node(std::size_t alpha, std::size_t k) const;
    [[nodiscard]] std::vector<double> nodes(std::size_t alpha) const;

    /// |r| = sum of r_alpha, the dimension of the finite-element space.
    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }

    /// Arc-length step sqrt(eta_alpha) h_alpha of the interval owning boundary
    /// point l. Equals h_alpha for the Euclidean metric.
    [[nodiscard]] double endpoint_step(std::size_t l) const;
    [[nodiscard]] std::vector<double> endpoint_steps() const;

private:
    IntervalManifold manifold_;
    std::size_t resolution_;
    std::vector<std::size_t> r_;
    std::vector<double> h_;
    std::size_t dimension_ = 0;
};

/// Throws Error{ResolutionTooSmall} when N < 2n or some r_alpha < 2.
Mesh subdivide(const IntervalManifold& manifold, std::size_t resolution);

}  // namespace selfadj
