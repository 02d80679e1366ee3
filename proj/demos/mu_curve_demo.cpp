// Minimal library walkthrough: sweep the chemical potential over the well
// radius at fixed interaction and density, then locate the optimal lake and
// its emission enhancement.

#include <cstdio>

#include "bglass/bglass.hpp"

int main() {
    const double u = 1.0;
    const double n_c = 0.06;

    std::printf("# mu0(L) at u=%.1f, n_c=%.3f\n", u, n_c);
    bglass::GpSolution warm;
    bool have_warm = false;
    for (double L = 2.0; L <= 6.0; L += 0.5) {
        bglass::GpProblem problem;
        problem.u = u;
        problem.n_c = n_c;
        problem.L = L;
        const bglass::GpSolution s =
            have_warm ? bglass::solve_gp(problem, warm) : bglass::solve_gp(problem);
        std::printf("L=%4.1f  mu0=%+.6f  L_c=%7.3f  localized=%d\n", L, s.mu0,
                    s.coherence_length, static_cast<int>(bglass::is_localized(s)));
        if (bglass::is_localized(s)) {
            warm = s;
            have_warm = true;
        }
    }

    bglass::ScanOptions scan;
    scan.l_min = 1.0;
    scan.l_max = 10.0;
    scan.coarse_count = 19;
    const bglass::OptimalLake lake = bglass::minimize_mu_over_L(u, n_c, scan);
    std::printf("\noptimal lake: L*=%.4f  mu0*=%+.6f  L_c=%.4f\n", lake.L_star, lake.mu0_star,
                lake.L_c);

    bglass::EmissionModel model;
    model.a0 = 1e-8;
    const double L0 = 1e-8; // 10 nm disorder scale
    const double L_c_m = lake.L_c * L0;
    std::printf("emission: a_c=%.3e m  N_e=%.1f  gamma/gamma0=%.2f\n",
                bglass::condensate_radius(L_c_m),
                bglass::mode_count(bglass::condensate_radius(L_c_m), model.a0),
                bglass::enhancement_factor(model, L_c_m));
    return 0;
}
