// SPDX-License-Identifier: Apache-2.0
// Scans mu_1(a, m, alpha; xi), finds alpha(a, m) and the leading H_C3 for a few m.
#include <cstdio>

#include "prox/fields/fields.hpp"
#include "prox/transmission/transmission.hpp"

int main()
{
    namespace tr = prox::transmission;
    namespace fd = prox::fields;
    std::printf("mu_1(1, 4, 0.8; xi)\n%8s %14s %14s\n", "xi", "mu1", "dmu/dxi");
    for (double xi = -2.0; xi <= 3.0; xi += 0.5) {
        const auto g = tr::mu1({1.0, 4.0, 0.8, xi});
        std::printf("%8.2f %14.10f %14.10f\n", xi, g.mu1, tr::dmu_dxi(g));
    }
    std::printf("\n%8s %14s %14s %14s\n", "m", "alpha(1, m)", "xi*", "HC3/kappa");
    for (double m : {0.5, 1.5, 4.0, 10.0}) {
        const auto r = fd::alpha_of(1.0, m);
        const double xs = r.minimizers.minima.empty() ? 0.0 : fd::detail::global_minimizer(r.minimizers).xi_star;
        std::printf("%8.2f %14.10f %14.10f %14.10f  %s\n", m, r.alpha, xs, fd::hc3_leading(r, 1.0).hc3_leading,
                    fd::to_string(r.branch));
    }
    return 0;
}
