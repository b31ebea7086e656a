// SPDX-License-Identifier: Apache-2.0
// Curvature profiles of sampled closed curves.
#include <cstdio>

#include "prox/geometry/curvature.hpp"

int main()
{
    namespace g = prox::geometry;
    const struct {
        const char* name;
        g::ClosedCurve curve;
    } shapes[] = {{"circle R=2", g::circle(2.0, 256)},
                  {"ellipse 2x1", g::ellipse(2.0, 1.0, 256)},
                  {"rounded square b=0.1", g::rounded_square(0.1, 512)}};
    std::printf("%-22s %12s %12s %12s\n", "curve", "max kappa", "length", "turning");
    for (const auto& s : shapes) {
        const auto p = g::curvature_profile(s.curve);
        std::printf("%-22s %12.8f %12.8f %12.8f\n", s.name, p.kappa_r_max, p.total_length, p.total_turning);
    }
    return 0;
}
