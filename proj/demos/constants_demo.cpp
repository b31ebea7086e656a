// SPDX-License-Identifier: Apache-2.0
// Prints the universal half-line constants and the de Gennes curve Theta(gamma).
#include <cstdio>

#include "prox/halfline/halfline.hpp"

int main()
{
    namespace hl = prox::halfline;
    const auto u = hl::universal_constants(1e-8);
    std::printf("Theta0 = %.12f\nxi0    = %.12f\nC1     = %.12f\n3 C1   = %.12f\n", u.theta0, u.xi0, u.c1, 3.0 * u.c1);
    hl::ThetaMemo memo;
    std::printf("\n%8s %14s %14s %14s\n", "gamma", "Theta", "xi*", "|phi(0)|^2");
    for (double g : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0}) {
        const auto d = hl::theta_of(g, {}, &memo);
        std::printf("%8.3f %14.10f %14.10f %14.10f\n", g, d.theta, d.xi_star, d.trace_sq);
    }
    std::printf("\neta0 (Theta(eta0) = 0) = %.10f\n", hl::eta0({}, &memo));
    return 0;
}
