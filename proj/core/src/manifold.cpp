#include "selfadj/manifold.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "selfadj/error.hpp"

namespace selfadj {

IntervalManifold::IntervalManifold(std::vector<Interval> intervals, std::vector<double> metric)
    : intervals_(std::move(intervals)), metric_(std::move(metric)) {
    if (intervals_.empty()) {
        throw Error(ErrorKind::EmptyManifold, "at least one interval is required");
    }
    if (metric_.size() != intervals_.size()) {
        throw Error(ErrorKind::EmptyManifold,
                    "metric has " + std::to_string(metric_.size()) + " entries for " +
                        std::to_string(intervals_.size()) + " intervals");
    }
    for (std::size_t alpha = 0; alpha < intervals_.size(); ++alpha) {
        const auto& iv = intervals_[alpha];
        if (!(std::isfinite(iv.a) && std::isfinite(iv.b)) || !(iv.a < iv.b)) {
            throw Error(ErrorKind::DegenerateInterval,
                        "interval " + std::to_string(alpha) + " needs a < b");
        }
        if (!std::isfinite(metric_[alpha]) || !(metric_[alpha] > 0.0)) {
            throw Error(ErrorKind::NonPositiveMetric,
                        "metric coefficient of interval " + std::to_string(alpha) + " must be > 0");
        }
        total_length_ += iv.length();
    }
}

double IntervalManifold::weight(std::size_t alpha) const {
    return 1.0 / (2.0 * std::sqrt(metric(alpha)));
}

double IntervalManifold::stiffness(std::size_t alpha) const {
    return 1.0 / std::sqrt(metric(alpha));
}

double IntervalManifold::boundary_point(std::size_t l) const {
    const auto& iv = intervals_.at(l / 2);
    return (l % 2 == 0) ? iv.a : iv.b;
}

IntervalManifold build_manifold(std::span<const std::pair<double, double>> intervals,
                                std::span<const double> metric) {
    if (intervals.empty() || metric.empty()) {
        throw Error(ErrorKind::EmptyManifold, "intervals and metric must be non-empty");
    }
    std::vector<Interval> ivs;
    ivs.reserve(intervals.size());
    for (const auto& [a, b] : intervals) ivs.push_back({a, b});
    return IntervalManifold(std::move(ivs), std::vector<double>(metric.begin(), metric.end()));
}

Mesh::Mesh(const IntervalManifold& manifold, std::size_t resolution)
    : manifold_(manifold), resolution_(resolution) {
    const std::size_t n = manifold_.interval_count();
    if (resolution_ < 2 * n) {
        throw Error(ErrorKind::ResolutionTooSmall,
                    "N = " + std::to_string(resolution_) + " is below 2n = " + std::to_string(2 * n));
    }
    const double total = manifold_.total_length();
    r_.reserve(n);
    h_.reserve(n);
    for (std::size_t alpha = 0; alpha < n; ++alpha) {
        const double len = manifold_.length(alpha);
        // The quotient is an integer in exact arithmetic whenever L_alpha N / L
        // is; a few ulps of slack stop rounding from dropping a node.
        const double q = len * static_cast<double>(resolution_) / total;
        const auto r = static_cast<std::size_t>(std::floor(q + 8.0 * std::numeric_limits<double>::epsilon() * q)) + 1;
        if (r < 2) {
            throw Error(ErrorKind::ResolutionTooSmall,
                        "interval " + std::to_string(alpha) + " receives r = " + std::to_string(r) +
                            " < 2 interior nodes");
        }
        r_.push_back(r);
        h_.push_back(len / static_cast<double>(r + 1));
        dimension_ += r;
    }
}

double Mesh::node(std::size_t alpha, std::size_t k) const {
    const std::size_t r = r_.at(alpha);
    const auto& iv = manifold_.interval(alpha);
    if (k == 0) return iv.a;
    if (k == r + 1) return iv.b;
    return iv.a + static_cast<double>(k) * h_[alpha];
}

std::vector<double> Mesh::nodes(std::size_t alpha) const {
    std::vector<double> x(r_.at(alpha) + 2);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = node(alpha, k);
    return x;
}

double Mesh::endpoint_step(std::size_t l) const {
    const std::size_t alpha = l / 2;
    return std::sqrt(manifold_.metric(alpha)) * h_.at(alpha);
}

std::vector<double> Mesh::endpoint_steps() const {
    std::vector<double> out(2 * r_.size());
    for (std::size_t l = 0; l < out.size(); ++l) out[l] = endpoint_step(l);
    return out;
}

Mesh subdivide(const IntervalManifold& manifold, std::size_t resolution) {
    return Mesh(manifold, resolution);
}

}  // namespace selfadj
