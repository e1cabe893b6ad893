#pragma once

namespace pwave::oracle {

/// Scattering length of the soft sphere V = V0 on r < R0 in d = 1, 2, 3, from
/// the modified-Bessel interior solution: (a/R0)^d = x I_{d/2+1}(x) / (d I_{d/2}(x) + x I_{d/2+1}(x)),
/// x = R0 sqrt(V0 / 2).
double soft_sphere_a_pow_d(int dim, double V0, double R0);
double soft_sphere_a(int dim, double V0, double R0);

/// d = 3 case written with hyperbolic functions only.
double soft_sphere_a3_elementary(double V0, double R0);

/// Interior profile psi(r) / psi(0) of the soft sphere for r <= R0.
double soft_sphere_psi(int dim, double V0, double r);

/// Fourier transform of V0 on the ball of radius R0 in R^d at momentum p.
double soft_sphere_fourier(int dim, double V0, double R0, double p);

}  // namespace pwave::oracle
