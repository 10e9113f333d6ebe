#include "survtest/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "survtest/error.hpp"

namespace survtest {

SymMatrix::SymMatrix(std::size_t dim, std::span<const double> row_major) : dim_(dim), data_(dim * dim) {
  if (row_major.size() != dim * dim) throw InputError("matrix size mismatch");
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const double v = row_major[i * dim + j];
      if (!std::isfinite(v)) throw InputError("non-finite matrix entry");
      set(i, j, v);
    }
  }
}

SymMatrix SymMatrix::leading(std::size_t k) const {
  SymMatrix out(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out.data_[i * k + j] = data_[i * dim_ + j];
  return out;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

std::vector<double> sym_eigenvalues(const SymMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0) throw InputError("eigenvalues of an empty matrix");
  for (double v : m.data())
    if (!std::isfinite(v)) throw InputError("non-finite matrix entry");

  std::vector<double> a(m.data().begin(), m.data().end());
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  const double norm = m.frobenius_norm();
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  if (norm == 0.0 || n == 1) {
    std::sort(eig.begin(), eig.end(), std::greater<>());
    return eig;
  }

  const double target = 1e-12 * norm;
  // Elements below this cannot keep the off-diagonal norm above target.
  const double skip = 1e-13 * norm / static_cast<double>(n);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (std::sqrt(2.0 * off) <= target) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) <= skip) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        double* rp = &a[p * n];
        double* rq = &a[q * n];
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double g = rp[r];
          const double h = rq[r];
          rp[r] = g - s * (h + g * tau);
          rq[r] = h + s * (g - h * tau);
        }
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          a[r * n + p] = rp[r];
          a[r * n + q] = rq[r];
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

SpdSolution spd_solve(const SymMatrix& m, std::span<const double> b) {
  const std::size_t n = m.dim();
  if (b.size() != n) throw InputError("right-hand side size mismatch");
  if (n == 0) throw InputError("empty system");

  const auto eig = sym_eigenvalues(m);
  SpdSolution sol;
  sol.rcond = eig.front() > 0.0 ? eig.back() / eig.front() : 0.0;
  if (!(sol.rcond >= 1e-12)) throw DegenerateError("singular");

  // Cholesky, lower factor stored row-major.
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > 0.0)) throw DegenerateError("singular");
    const double ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = m(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = v / ljj;
    }
  }

  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= l[i * n + k] * y[k];
    y[i] /= l[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) y[i] -= l[k * n + i] * y[k];
    y[i] /= l[i * n + i];
  }
  sol.x = std::move(y);
  return sol;
}

namespace {

// Regularized lower incomplete gamma P(a, x) by its power series, x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by Lentz's continued fraction, x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double chisq_sf(double x, int k) {
  if (k < 1) throw InputError("chi-square degrees of freedom must be >= 1");
  if (!(x >= 0.0)) throw InputError("chi-square argument must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double a = 0.5 * k;
  const double y = 0.5 * x;
  const double q = y < a + 1.0 ? 1.0 - gamma_p_series(a, y) : gamma_q_fraction(a, y);
  return std::clamp(q, 0.0, 1.0);
}

namespace {

constexpr std::size_t kGaussNodes = 10;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
const std::array<std::pair<double, double>, kGaussNodes>& gauss_legendre() {
  static const auto rule = [] {
    std::array<std::pair<double, double>, kGaussNodes> r{};
    constexpr int n = static_cast<int>(kGaussNodes);
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      r[static_cast<std::size_t>(i)] = {z, 2.0 / ((1.0 - z * z) * dp * dp)};
    }
    return r;
  }();
  return rule;
}

class ImhofIntegrand {
 public:
  ImhofIntegrand(std::vector<double> lambdas, double x) : lam_(std::move(lambdas)), x_(x) {
    sum_ = std::accumulate(lam_.begin(), lam_.end(), 0.0);
    for (double l : lam_) log_prod_ += std::log(l);
  }

  double operator()(double u) const {
    if (u == 0.0) return 0.5 * (sum_ - x_);
    double theta = -0.5 * x_ * u;
    double log_rho = 0.0;
    for (double l : lam_) {
      const double lu = l * u;
      theta += 0.5 * std::atan(lu);
      log_rho += 0.25 * std::log1p(lu * lu);
    }
    return std::sin(theta) * std::exp(-log_rho) / u;
  }

  // theta'(u); strictly decreasing in u.
  double theta_slope(double u) const {
    double s = -0.5 * x_;
    for (double l : lam_) s += 0.5 * l / (1.0 + l * l * u * u);
    return s;
  }

  // Upper bound on |theta'| over [u, inf).
  double max_frequency(double u) const {
    double s = 0.0;
    for (double l : lam_) s += 0.5 * l / (1.0 + l * l * u * u);
    return std::max(s, 0.5 * x_);
  }

  // Bound on |(1/pi) * integral_U^inf|, the smaller of the classical
  // Imhof bound and an oscillation bound (second mean value theorem).
  double truncation_bound(double u) const {
    const double k = 0.5 * static_cast<double>(lam_.size());
    double log_rho = 0.0;
    for (double l : lam_) log_rho += 0.25 * std::log1p(l * l * u * u);
    double bound = std::exp(-std::log(std::numbers::pi * k) - k * std::log(u) - 0.5 * log_prod_);
    const double slope = theta_slope(u);
    if (slope < 0.0) bound = std::min(bound, 2.0 / (std::numbers::pi * u * std::exp(log_rho) * -slope));
    return bound;
  }

 private:
  std::vector<double> lam_;
  double x_;
  double sum_ = 0.0;
  double log_prod_ = 0.0;
};

}  // namespace

double imhof_tail(std::span<const double> lambdas, double x) {
  if (lambdas.empty()) throw InputError("imhof_tail needs at least one weight");
  if (!std::isfinite(x)) throw InputError("imhof_tail argument must be finite");
  for (double l : lambdas)
    if (!(l > 0.0) || !std::isfinite(l)) throw InputError("imhof_tail weights must be positive and finite");
  if (x <= 0.0) return 1.0;

  // The tail probability is invariant under joint rescaling; work with max lambda = 1.
  const double top = *std::max_element(lambdas.begin(), lambdas.end());
  std::vector<double> lam(lambdas.size());
  std::transform(lambdas.begin(), lambdas.end(), lam.begin(), [top](double l) { return l / top; });
  const ImhofIntegrand f(std::move(lam), x / top);

  constexpr double kTol = 1e-7;
  double upper = 1.0;
  while (f.truncation_bound(upper) > kTol && upper < 1e15) upper *= 2.0;

  // Panels sized to the local oscillation and amplitude scales.
  std::vector<double> edges{0.0};
  while (edges.back() < upper) {
    const double a = edges.back();
    const double width = std::min(std::numbers::pi / (2.0 * f.max_frequency(a)), std::max(0.25, 0.25 * a));
    edges.push_back(std::min(upper, a + width));
  }

  const auto& rule = gauss_legendre();
  auto integrate = [&](int splits) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const double h = (edges[k + 1] - edges[k]) / splits;
      for (int s = 0; s < splits; ++s) {
        const double lo = edges[k] + s * h;
        const double mid = lo + 0.5 * h;
        double panel = 0.0;
        for (const auto& [node, weight] : rule) panel += weight * f(mid + 0.5 * h * node);
        total += 0.5 * h * panel;
      }
    }
    return total;
  };

  double previous = integrate(1);
  double current = previous;
  for (int splits = 2; splits <= 256; splits *= 2) {
    current = integrate(splits);
    if (std::abs(current - previous) / std::numbers::pi < kTol) break;
    previous = current;
  }
  return std::clamp(0.5 + current / std::numbers::pi, 0.0, 1.0);
}

}  // namespace survtest
