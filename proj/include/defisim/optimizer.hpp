// Deterministic parameter search used to corroborate the closed forms: an
// exhaustive grid oracle, golden-section refinement for one continuous axis,
// and an ascending integer sweep. No randomness anywhere, so repeated runs
// produce identical surfaces.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace defisim {

struct Axis {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    bool integer = false;
};

struct Eval {
    double value = 0.0;
    bool feasible = false;
};

using Objective = std::function<Eval(const std::vector<double>&)>;

struct Sample {
    std::vector<double> x;
    double value = 0.0;
    bool feasible = false;
};

struct GridResult {
    bool any_feasible = false;
    Sample best;                  // value 0 when nothing was feasible
    std::vector<Sample> surface;  // row-major over the axis grids
};

// Evaluates the full cartesian grid, resolution points per continuous axis
// (integer axes enumerate every integer in range). Ties keep the first point
// in grid order.
GridResult grid_oracle(const std::vector<Axis>& axes, const Objective& f, int resolution);

struct Refined {
    double x = 0.0;
    double value = 0.0;
    bool feasible = false;
};

// Coarse scan to bracket the maximum, golden-section inside the bracket. A
// scan that is not single-peaked falls back to a finer scan before
// bracketing, so mild non-unimodality costs accuracy, not correctness.
Refined refine_1d(const std::function<Eval(double)>& f, double lo, double hi,
                  double x_tol = 1e-9);

struct IntSweep {
    long long best = 0;
    double value = 0.0;
    bool any_feasible = false;
    std::vector<std::pair<long long, double>> profile;
};

// Ascending sweep; a later candidate must beat the incumbent beyond fp noise,
// so plateaus resolve to the smallest argument.
IntSweep integer_sweep(long long lo, long long hi, const std::function<Eval(long long)>& f);

}  // namespace defisim
