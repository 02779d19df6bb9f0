#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "causal/core/value.hpp"
#include "causal/engine/intrinsic.hpp"

namespace causal::quantum {

struct Particle1D {
  double m = 1.0;
  double x = 0.0;
  double v = 0.0;
};

// One velocity-Verlet step under F = -dV/dx for every particle.
// Errors: InvalidArgument for nonpositive masses or dt.
void classicalStep(std::vector<Particle1D>& particles, const RealFn& gradV, double dt);

// Solves the periodic (cyclic) tridiagonal system
//   sub[j] x[j-1] + diag[j] x[j] + super[j] x[j+1] = rhs[j]   (indices mod n).
// Errors: SolveError when a pivot vanishes.
std::vector<Complex> solveCyclicTridiagonal(std::span<const Complex> sub, std::span<const Complex> diag,
                                            std::span<const Complex> super, std::span<const Complex> rhs);

// One Crank-Nicolson step of i hbar dpsi/dt = -(hbar^2/2m) psi'' + V psi on a
// periodic grid. `V` holds one value per cell. Errors: SolveError,
// InvalidArgument for mismatched lengths or nonpositive m, hbar, dt.
ComplexGrid schrodingerStep(const ComplexGrid& psi, std::span<const double> V, double m, double hbar, double dt);

// Cell centre coordinates x_j = -n dx / 2 + j dx.
double gridX(std::size_t n, double dx, std::size_t j);

// exp(-(x-x0)^2 / (4 sigma^2) + i k0 x), normalized to sum |psi|^2 dx = 1.
ComplexGrid gaussianPacket(std::size_t n, double dx, double x0, double sigma, double k0);

double gridNorm(const ComplexGrid& psi);
double gridMean(const ComplexGrid& psi);
double gridVariance(const ComplexGrid& psi);

}  // namespace causal::quantum
