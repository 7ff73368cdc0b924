#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "minface/surface.hpp"

namespace minface {

/// Step of the intrinsic curvature stencil used by the battery.
inline constexpr double kIntrinsicStep = 1e-3;

/// Regular and non-flat with margins: at least 100 intrinsic stencil steps
/// from the singular set, and <gamma'', gamma''> at least 5% of its scale on
/// both curves.
bool is_interior_sample(const Minface& m, double u, double v);

/// Regular (jets defined) and classified non-flat.
bool is_regular_nonflat(const Minface& m, double u, double v);

/// `count` uniform domain points accepted by `keep`. Throws Error{InvalidData}
/// after 1000 rejections per requested point.
std::vector<Vec2> sample_points(const Minface& m, std::mt19937_64& rng, int count,
                                const std::function<bool(const Minface&, double, double)>& keep);

struct CheckResult {
    std::string name;
    double value = 0.0;      // max error, or a mismatch count
    double tolerance = 0.0;  // passes when value <= tolerance
    int samples = 0;
    bool passed = false;
};

struct BatteryOptions {
    std::uint64_t seed = 1;
    int samples = 1000;
    int trace_grid = 256;
};

/// The oracle and property checks that apply to the surface's mode.
std::vector<CheckResult> run_battery(const Minface& m, const BatteryOptions& options = {});

}  // namespace minface
