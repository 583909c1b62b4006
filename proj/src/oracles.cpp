#include "sng/oracles.hpp"

#include <cmath>
#include <numbers>

#include "sng/error.hpp"

namespace sng::oracle {

namespace {
constexpr double kPi = std::numbers::pi;
}

double gaussian_overlap_quadrature(double separation, double width) {
  const double amp2 = 1.0 / std::sqrt(2.0 * kPi * width * width);
  auto f = [&](double x) {
    const double a = x - 0.5 * separation;
    const double b = x + 0.5 * separation;
    return amp2 * std::exp(-(a * a + b * b) / (4.0 * width * width));
  };
  const double reach = 0.5 * separation + 40.0 * width;
  return simpson(f, -reach, reach, 40000);
}

double gaussian_potential_shell(double r, double width, double mass, double G) {
  const double norm = mass / (std::pow(2.0 * kPi, 1.5) * width * width * width);
  auto rho = [&](double s) { return norm * std::exp(-s * s / (2.0 * width * width)); };
  const int intervals = 20000;
  double inner = 0.0;
  if (r > 0.0) {
    inner = simpson([&](double s) { return 4.0 * kPi * s * s * rho(s); }, 0.0, r, intervals) / r;
  }
  const double outer =
      simpson([&](double s) { return 4.0 * kPi * s * rho(s); }, r, r + 40.0 * width, intervals);
  return -G * (inner + outer);
}

double gaussian_potential_closed_form(double r, double width, double mass, double G) {
  if (r == 0.0) return -G * mass * std::sqrt(2.0 / kPi) / width;
  return -G * mass / r * std::erf(r / (width * std::sqrt(2.0)));
}

double softened_gaussian_potential(double x, double center, double width, double mass, double G,
                                   double softening) {
  const double norm = mass / std::sqrt(2.0 * kPi * width * width);
  auto f = [&](double y) {
    const double dy = y - center;
    const double dx = x - y;
    return norm * std::exp(-dy * dy / (2.0 * width * width)) /
           std::sqrt(dx * dx + softening * softening);
  };
  return -G * simpson(f, center - 40.0 * width, center + 40.0 * width, 40000);
}

double free_gaussian_width(double width0, double t, double hbar, double mass) {
  const double tau = hbar * t / (2.0 * mass * width0 * width0);
  return width0 * std::sqrt(1.0 + tau * tau);
}

Eigen::Matrix2d lowdin_2x2(double s) {
  const double p = 1.0 / std::sqrt(1.0 + s);
  const double m = 1.0 / std::sqrt(1.0 - s);
  Eigen::Matrix2d t;
  t << 0.5 * (p + m), 0.5 * (p - m), 0.5 * (p - m), 0.5 * (p + m);
  return t;
}

DenseFock::DenseFock(int modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
  const int local = cutoff + 1;
  Eigen::MatrixXcd single = Eigen::MatrixXcd::Zero(local, local);
  for (int k = 0; k < cutoff; ++k) single(k + 1, k) = std::sqrt(double(k + 1));
  dimension_ = 1;
  for (int j = 0; j < modes; ++j) dimension_ *= local;
  // index = Σ n_j local^j, so mode j acts on the j-th base-`local` digit.
  for (int j = 0; j < modes; ++j) {
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dimension_, dimension_);
    int stride = 1;
    for (int q = 0; q < j; ++q) stride *= local;
    for (int col = 0; col < dimension_; ++col) {
      const int digit = (col / stride) % local;
      if (digit + 1 < local) op(col + stride, col) = single(digit + 1, digit);
    }
    creation_.push_back(std::move(op));
  }
}

Eigen::VectorXcd DenseFock::vacuum() const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dimension_);
  v[0] = 1.0;
  return v;
}

Eigen::VectorXcd DenseFock::fock_power(const Eigen::VectorXcd& c, int n) const {
  if (c.size() != modes_) throw UsageError("DenseFock: coefficient length mismatch");
  if (n > cutoff_) throw UsageError("DenseFock: boson number exceeds cutoff");
  Eigen::MatrixXcd raise = Eigen::MatrixXcd::Zero(dimension_, dimension_);
  for (int j = 0; j < modes_; ++j) raise += c[j] * creation_[j];
  Eigen::VectorXcd v = vacuum();
  double fact = 1.0;
  for (int k = 1; k <= n; ++k) {
    v = raise * v;
    fact *= k;
  }
  return v / std::sqrt(fact);
}

int DenseFock::index(const Occupation& occ) const {
  int idx = 0;
  int stride = 1;
  for (int j = 0; j < modes_; ++j) {
    idx += occ[j] * stride;
    stride *= cutoff_ + 1;
  }
  return idx;
}

Eigen::VectorXcd DenseFock::embed(const FockExpansion& state) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dimension_);
  for (const auto& [occ, c] : state.terms()) v[index(occ)] += c;
  return v;
}

namespace {

Eigen::VectorXd reduced_eigenvalues(const Eigen::MatrixXcd& c) {
  Eigen::MatrixXcd rho = c * c.adjoint();
  rho /= rho.trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
  return eig.eigenvalues().cwiseMax(0.0);
}

}  // namespace

double reduced_density_entropy(const Eigen::MatrixXcd& coefficients) {
  const Eigen::VectorXd lambda = reduced_eigenvalues(coefficients);
  double s = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda[k] > 0.0) s -= lambda[k] * std::log2(lambda[k]);
  }
  return s;
}

double reduced_density_log_negativity(const Eigen::MatrixXcd& coefficients) {
  const Eigen::VectorXd lambda = reduced_eigenvalues(coefficients);
  return 2.0 * std::log2(lambda.cwiseSqrt().sum());
}

Eigen::MatrixXcd dense_branch_state(const std::vector<Eigen::VectorXcd>& modes1,
                                    const std::vector<Eigen::VectorXcd>& modes2, int n,
                                    const Eigen::Vector4cd& amplitudes) {
  if (modes1.size() != 4 || modes2.size() != 4) {
    throw UsageError("dense_branch_state: four branch modes per subsystem");
  }
  DenseFock f1(static_cast<int>(modes1[0].size()), n);
  DenseFock f2(static_cast<int>(modes2[0].size()), n);
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(f1.dimension(), f2.dimension());
  for (int b = 0; b < 4; ++b) {
    psi += amplitudes[b] * f1.fock_power(modes1[b], n) * f2.fock_power(modes2[b], n).transpose();
  }
  return psi;
}

Eigen::Vector4cd point_mass_branch_amplitudes(const std::array<double, 2>& x1,
                                              const std::array<double, 2>& x2, double t,
                                              double hbar, double mass, int n, double G) {
  const double big_m = n * mass;
  Eigen::Vector4cd a;
  for (int b = 0; b < 4; ++b) {
    const double d = std::abs(x1[b / 2] - x2[b % 2]);
    const double theta = -(t / hbar) * G * big_m * big_m / d;
    a[b] = std::polar(0.5, theta);
  }
  return a;
}

double branch_phase_negativity(const Eigen::Vector4cd& amplitudes) {
  Eigen::Matrix2cd c;
  c << amplitudes[0], amplitudes[1], amplitudes[2], amplitudes[3];
  c /= c.norm();
  return std::log2(1.0 + 2.0 * std::abs(c.determinant()));
}

}  // namespace sng::oracle
