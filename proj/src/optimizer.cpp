#include "defisim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace defisim {

namespace {

constexpr double kInfeasible = -1e300;

double score(const Eval& e) { return e.feasible ? e.value : kInfeasible; }

std::vector<double> axis_points(const Axis& a, int resolution) {
    std::vector<double> pts;
    if (a.hi < a.lo) throw std::invalid_argument("axis " + a.name + " has hi < lo");
    if (a.integer) {
        long long lo = static_cast<long long>(std::ceil(a.lo));
        long long hi = static_cast<long long>(std::floor(a.hi));
        for (long long v = lo; v <= hi; ++v) pts.push_back(static_cast<double>(v));
        if (pts.empty()) pts.push_back(std::round(a.lo));
        return pts;
    }
    int n = std::max(2, resolution);
    for (int i = 0; i < n; ++i) pts.push_back(a.lo + (a.hi - a.lo) * i / (n - 1));
    return pts;
}

}  // namespace

GridResult grid_oracle(const std::vector<Axis>& axes, const Objective& f, int resolution) {
    if (axes.empty()) throw std::invalid_argument("grid needs at least one axis");
    std::vector<std::vector<double>> grids;
    std::size_t total = 1;
    for (const Axis& a : axes) {
        grids.push_back(axis_points(a, resolution));
        total *= grids.back().size();
        if (total > 1000000) throw std::invalid_argument("grid larger than 1e6 points");
    }
    GridResult res;
    res.surface.reserve(total);
    double best_score = kInfeasible;
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::vector<double> x(axes.size());
        for (std::size_t d = 0; d < axes.size(); ++d) x[d] = grids[d][idx[d]];
        Eval e = f(x);
        res.surface.push_back({x, e.value, e.feasible});
        if (e.feasible && score(e) > best_score) {
            best_score = score(e);
            res.best = res.surface.back();
            res.any_feasible = true;
        }
        for (std::size_t d = axes.size(); d-- > 0;) {
            if (++idx[d] < grids[d].size()) break;
            idx[d] = 0;
        }
    }
    if (!res.any_feasible) res.best = Sample{std::vector<double>(axes.size(), 0.0), 0.0, false};
    return res;
}

Refined refine_1d(const std::function<Eval(double)>& f, double lo, double hi, double x_tol) {
    if (hi < lo) std::swap(lo, hi);
    auto g = [&](double x) { return score(f(x)); };

    // Bracket the peak with a scan; widen the scan if the shape is not
    // single-peaked at the coarse resolution.
    int n = 17;
    double a = lo, b = hi;
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<double> xs(n), ys(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = lo + (hi - lo) * i / (n - 1);
            ys[i] = g(xs[i]);
        }
        std::size_t peak = static_cast<std::size_t>(
            std::max_element(ys.begin(), ys.end()) - ys.begin());
        bool unimodal = true;
        for (std::size_t i = 1; i < peak; ++i)
            if (ys[i] < ys[i - 1] - 1e-12 * std::max(1.0, std::fabs(ys[i - 1])))
                unimodal = false;
        for (std::size_t i = peak + 1; i < ys.size(); ++i)
            if (ys[i] > ys[i - 1] + 1e-12 * std::max(1.0, std::fabs(ys[i - 1])))
                unimodal = false;
        a = xs[peak == 0 ? 0 : peak - 1];
        b = xs[std::min(ys.size() - 1, peak + 1)];
        if (unimodal) break;
        n = 129;
    }

    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    while (b - a > x_tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = g(x1);
        }
    }
    double x = 0.5 * (a + b);
    Eval e = f(x);
    return {x, e.value, e.feasible};
}

IntSweep integer_sweep(long long lo, long long hi, const std::function<Eval(long long)>& f) {
    IntSweep res;
    double best_score = kInfeasible;
    for (long long v = lo; v <= hi; ++v) {
        Eval e = f(v);
        res.profile.emplace_back(v, e.value);
        double s = score(e);
        if (e.feasible && s > best_score + 1e-9 * std::max(1.0, std::fabs(best_score))) {
            best_score = s;
            res.best = v;
            res.value = e.value;
            res.any_feasible = true;
        }
    }
    return res;
}

}  // namespace defisim
