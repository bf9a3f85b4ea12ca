#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace gamechanger {

// Piecewise-linear function given by breakpoints (t, value); linear
// interpolation between breakpoints, constant extrapolation outside.
class PiecewiseLinear {
public:
    PiecewiseLinear() = default;

    explicit PiecewiseLinear(std::vector<std::pair<double, double>> points)
        : pts_(std::move(points)) {
        if (pts_.empty())
            throw std::invalid_argument("piecewise: need at least one breakpoint");
        for (std::size_t i = 1; i < pts_.size(); ++i)
            if (!(pts_[i - 1].first < pts_[i].first))
                throw std::invalid_argument("piecewise: breakpoints must be strictly increasing in t");
    }

    static PiecewiseLinear constant(double v) {
        return PiecewiseLinear({{0.0, v}});
    }

    double operator()(double t) const {
        if (t <= pts_.front().first) return pts_.front().second;
        if (t >= pts_.back().first) return pts_.back().second;
        std::size_t hi = 1;
        while (pts_[hi].first < t) ++hi;
        const auto& [t0, v0] = pts_[hi - 1];
        const auto& [t1, v1] = pts_[hi];
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }

    const std::vector<std::pair<double, double>>& points() const { return pts_; }

    double min_value() const {
        double m = pts_.front().second;
        for (const auto& [t, v] : pts_) m = v < m ? v : m;
        return m;
    }

    double max_value() const {
        double m = pts_.front().second;
        for (const auto& [t, v] : pts_) m = v > m ? v : m;
        return m;
    }

private:
    std::vector<std::pair<double, double>> pts_;
};

} // namespace gamechanger
