#pragma once

#include <functional>

#include "complex_structure.hpp"

namespace dbar {

// Value and Cartesian derivatives of a vector-valued function on the disk at
// one point. Second derivatives are meaningful only when `has_second`.
struct Jet {
    Vec value;
    Vec dx;
    Vec dy;
    Vec dxx;
    Vec dxy;
    Vec dyy;
    bool has_second = false;

    static Jet zero(int dim, bool second = true) {
        Jet j;
        j.value = j.dx = j.dy = Vec::Zero(dim);
        j.dxx = j.dxy = j.dyy = Vec::Zero(dim);
        j.has_second = second;
        return j;
    }
};

using JetEvaluator = std::function<Jet(double x, double y)>;

}  // namespace dbar
