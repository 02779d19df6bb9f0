#include "causal/quantum/numerics.hpp"

#include <cmath>

#include "causal/error.hpp"

namespace causal::quantum {

void classicalStep(std::vector<Particle1D>& particles, const RealFn& gradV, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  for (auto& p : particles) {
    if (!(p.m > 0.0)) throw Error(ErrorKind::InvalidArgument, "particle mass must be positive");
    const double a0 = -gradV(p.x) / p.m;
    const double x1 = p.x + p.v * dt + 0.5 * a0 * dt * dt;
    const double a1 = -gradV(x1) / p.m;
    p.v += 0.5 * (a0 + a1) * dt;
    p.x = x1;
  }
}

namespace {

// Thomas algorithm for a non-cyclic tridiagonal system.
std::vector<Complex> thomas(std::span<const Complex> sub, std::span<const Complex> diag,
                            std::span<const Complex> super, std::span<const Complex> rhs) {
  const std::size_t n = diag.size();
  std::vector<Complex> c(n), d(n);
  Complex pivot = diag[0];
  if (std::abs(pivot) < 1e-300) throw Error(ErrorKind::SolveError, "zero pivot in tridiagonal solve");
  c[0] = super[0] / pivot;
  d[0] = rhs[0] / pivot;
  for (std::size_t j = 1; j < n; ++j) {
    pivot = diag[j] - sub[j] * c[j - 1];
    if (std::abs(pivot) < 1e-300) throw Error(ErrorKind::SolveError, "zero pivot in tridiagonal solve");
    c[j] = j + 1 < n ? super[j] / pivot : Complex{};
    d[j] = (rhs[j] - sub[j] * d[j - 1]) / pivot;
  }
  std::vector<Complex> x(n);
  x[n - 1] = d[n - 1];
  for (std::size_t j = n - 1; j-- > 0;) x[j] = d[j] - c[j] * x[j + 1];
  return x;
}

std::vector<Complex> denseSolve(std::vector<std::vector<Complex>> a, std::vector<Complex> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[best][col])) best = r;
    }
    if (std::abs(a[best][col]) < 1e-300) throw Error(ErrorKind::SolveError, "singular system");
    std::swap(a[col], a[best]);
    std::swap(b[col], b[best]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<Complex> x(n);
  for (std::size_t r = n; r-- > 0;) {
    Complex s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

}  // namespace

std::vector<Complex> solveCyclicTridiagonal(std::span<const Complex> sub, std::span<const Complex> diag,
                                            std::span<const Complex> super, std::span<const Complex> rhs) {
  const std::size_t n = diag.size();
  if (sub.size() != n || super.size() != n || rhs.size() != n || n == 0) {
    throw Error(ErrorKind::InvalidArgument, "cyclic tridiagonal system has inconsistent sizes");
  }
  if (n < 3) {
    std::vector<std::vector<Complex>> a(n, std::vector<Complex>(n));
    for (std::size_t j = 0; j < n; ++j) {
      a[j][j] += diag[j];
      a[j][(j + n - 1) % n] += sub[j];
      a[j][(j + 1) % n] += super[j];
    }
    return denseSolve(std::move(a), std::vector<Complex>(rhs.begin(), rhs.end()));
  }
  // Sherman-Morrison: A = T + u v^T with T tridiagonal.
  const Complex topRight = sub[0];
  const Complex bottomLeft = super[n - 1];
  const Complex gamma = -diag[0];
  std::vector<Complex> d(diag.begin(), diag.end());
  d[0] -= gamma;
  d[n - 1] -= topRight * bottomLeft / gamma;
  std::vector<Complex> lower(sub.begin(), sub.end());
  lower[0] = 0.0;
  std::vector<Complex> upper(super.begin(), super.end());
  upper[n - 1] = 0.0;
  const auto x = thomas(lower, d, upper, rhs);
  std::vector<Complex> u(n);
  u[0] = gamma;
  u[n - 1] = bottomLeft;
  const auto z = thomas(lower, d, upper, u);
  const Complex denom = 1.0 + z[0] + topRight * z[n - 1] / gamma;
  if (std::abs(denom) < 1e-300) throw Error(ErrorKind::SolveError, "singular cyclic system");
  const Complex fact = (x[0] + topRight * x[n - 1] / gamma) / denom;
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = x[j] - fact * z[j];
  return out;
}

ComplexGrid schrodingerStep(const ComplexGrid& psi, std::span<const double> V, double m, double hbar, double dt) {
  const std::size_t n = psi.cells.size();
  if (V.size() != n) throw Error(ErrorKind::InvalidArgument, "potential length does not match the grid");
  if (!(m > 0.0) || !(hbar > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "m, hbar and dt must be positive");
  }
  const double kinetic = hbar * hbar / (2.0 * m * psi.dx * psi.dx);
  const Complex half(0.0, dt / (2.0 * hbar));
  std::vector<Complex> sub(n), diag(n), super(n), rhs(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double hDiag = 2.0 * kinetic + V[j];
    const double hOff = -kinetic;
    sub[j] = half * hOff;
    super[j] = half * hOff;
    diag[j] = 1.0 + half * hDiag;
    const Complex left = psi.cells[(j + n - 1) % n];
    const Complex right = psi.cells[(j + 1) % n];
    const Complex hPsi = hDiag * psi.cells[j] + hOff * (left + right);
    rhs[j] = psi.cells[j] - half * hPsi;
  }
  if (n == 1) {
    sub[0] = super[0] = 0.0;
    diag[0] = 1.0 + half * V[0];
    rhs[0] = psi.cells[0] - half * V[0] * psi.cells[0];
  }
  return ComplexGrid{solveCyclicTridiagonal(sub, diag, super, rhs), psi.dx};
}

double gridX(std::size_t n, double dx, std::size_t j) {
  return -static_cast<double>(n) * dx / 2.0 + static_cast<double>(j) * dx;
}

ComplexGrid gaussianPacket(std::size_t n, double dx, double x0, double sigma, double k0) {
  if (n == 0 || !(dx > 0.0) || !(sigma > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "gaussian packet needs n >= 1, dx > 0 and sigma > 0");
  }
  ComplexGrid g{std::vector<Complex>(n), dx};
  for (std::size_t j = 0; j < n; ++j) {
    const double x = gridX(n, dx, j);
    const double envelope = std::exp(-(x - x0) * (x - x0) / (4.0 * sigma * sigma));
    g.cells[j] = envelope * std::polar(1.0, k0 * x);
  }
  const double norm = gridNorm(g);
  if (!(norm > 0.0)) throw Error(ErrorKind::ZeroNorm, "gaussian packet vanishes on the grid");
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& c : g.cells) c *= scale;
  return g;
}

double gridNorm(const ComplexGrid& psi) {
  double s = 0.0;
  for (const auto& c : psi.cells) s += std::norm(c);
  return s * psi.dx;
}

double gridMean(const ComplexGrid& psi) {
  const std::size_t n = psi.cells.size();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += gridX(n, psi.dx, j) * std::norm(psi.cells[j]);
  const double norm = gridNorm(psi);
  if (!(norm > 0.0)) throw Error(ErrorKind::ZeroNorm, "grid has zero norm");
  return s * psi.dx / norm;
}

double gridVariance(const ComplexGrid& psi) {
  const std::size_t n = psi.cells.size();
  const double mean = gridMean(psi);
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = gridX(n, psi.dx, j) - mean;
    s += d * d * std::norm(psi.cells[j]);
  }
  return s * psi.dx / gridNorm(psi);
}

}  // namespace causal::quantum
