#ifndef PAIRTIME_AXIS_HPP
#define PAIRTIME_AXIS_HPP

#include <cmath>
#include <stdexcept>

namespace pairtime {

// Uniform sample axis. Unit depends on context (rad/s for spectral grids,
// seconds for temporal grids).
struct Axis {
    double start = 0.0;
    double step = 0.0;
    int n = 0;

    double value(int i) const { return start + step * i; }
    double stop() const { return start + step * (n - 1); }
    double span() const { return step * (n - 1); }
    double center() const { return start + 0.5 * span(); }

    // index of the bin containing x under [start + i*step, start + (i+1)*step)
    int bin_of(double x) const {
        return static_cast<int>(std::floor((x - start) / step));
    }

    bool contains(double x) const { return x >= start && x <= stop(); }

    void validate() const {
        if (n < 2 || step <= 0.0 || !std::isfinite(start) || !std::isfinite(step))
            throw std::domain_error("Axis: need n >= 2 and step > 0");
    }
};

inline bool same_axis(const Axis& a, const Axis& b, double rel = 1e-12) {
    auto close = [rel](double x, double y) {
        double s = std::fmax(std::fabs(x), std::fabs(y));
        return std::fabs(x - y) <= rel * std::fmax(s, 1.0);
    };
    return a.n == b.n && close(a.start, b.start) && close(a.step, b.step);
}

}  // namespace pairtime

#endif
