#include "sng/fock.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "sng/error.hpp"

namespace sng {

FockBasis FockBasis::named(const std::string& prefix, std::size_t count, int subsystem) {
  FockBasis b;
  for (std::size_t j = 0; j < count; ++j) {
    b.labels.push_back(fmt::format("{}{}", prefix, j));
    b.subsystem.push_back(subsystem);
  }
  return b;
}

FockExpansion::FockExpansion(FockBasis basis) : basis_(std::move(basis)) {
  if (basis_.subsystem.empty()) basis_.subsystem.assign(basis_.labels.size(), 0);
  if (basis_.subsystem.size() != basis_.labels.size()) {
    throw UsageError("FockBasis: one subsystem tag per mode label required");
  }
}

FockExpansion FockExpansion::vacuum(FockBasis basis) {
  FockExpansion e(std::move(basis));
  e.add(Occupation(e.num_modes(), 0), 1.0);
  return e;
}

std::complex<double> FockExpansion::coefficient(const Occupation& occ) const {
  const auto it = terms_.find(occ);
  return it == terms_.end() ? std::complex<double>{} : it->second;
}

void FockExpansion::add(const Occupation& occ, std::complex<double> value) {
  if (occ.size() != num_modes()) {
    throw UsageError(fmt::format("occupation has {} entries, basis has {} modes", occ.size(),
                                 num_modes()));
  }
  const int total = std::accumulate(occ.begin(), occ.end(), 0);
  if (boson_number_ >= 0 && total != boson_number_) {
    throw UsageError(fmt::format("occupation with {} bosons added to a {}-boson expansion",
                                 total, boson_number_));
  }
  boson_number_ = total;
  terms_[occ] += value;
}

double FockExpansion::norm() const {
  double s = 0.0;
  for (const auto& [occ, c] : terms_) s += std::norm(c);
  return std::sqrt(s);
}

FockExpansion FockExpansion::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw DegenerateInputError("cannot normalize a zero Fock expansion");
  FockExpansion out = *this;
  out *= 1.0 / n;
  return out;
}

FockExpansion& FockExpansion::operator+=(const FockExpansion& other) {
  if (!(basis_.labels == other.basis_.labels)) {
    throw UsageError("cannot add Fock expansions over different bases");
  }
  for (const auto& [occ, c] : other.terms_) add(occ, c);
  return *this;
}

FockExpansion& FockExpansion::operator*=(std::complex<double> s) {
  for (auto& [occ, c] : terms_) c *= s;
  return *this;
}

FockExpansion operator+(FockExpansion a, const FockExpansion& b) {
  a += b;
  return a;
}

FockExpansion operator*(std::complex<double> s, FockExpansion e) {
  e *= s;
  return e;
}

std::complex<double> inner_product(const FockExpansion& a, const FockExpansion& b) {
  if (!(a.basis().labels == b.basis().labels)) {
    throw UsageError("inner product of Fock expansions over different bases");
  }
  std::complex<double> s{};
  for (const auto& [occ, c] : a.terms()) s += std::conj(c) * b.coefficient(occ);
  return s;
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> checked_eigen(const Eigen::MatrixXcd& gram) {
  if (gram.rows() != gram.cols() || gram.rows() == 0) {
    throw UsageError("Löwdin orthonormalization needs a non-empty square Gram matrix");
  }
  const Eigen::MatrixXcd herm = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm);
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(smallest > 1e-10)) {
    throw DegeneracyError(
        fmt::format("Gram matrix is (nearly) singular: smallest eigenvalue {:.3e} <= 1e-10",
                    smallest),
        smallest);
  }
  return eig;
}

}  // namespace

Eigen::MatrixXcd lowdin_orthonormalize(const Eigen::MatrixXcd& gram) {
  const auto eig = checked_eigen(gram);
  const Eigen::VectorXd inv_sqrt = eig.eigenvalues().array().rsqrt();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().adjoint();
}

Eigen::MatrixXcd lowdin_mode_coefficients(const Eigen::MatrixXcd& gram) {
  const auto eig = checked_eigen(gram);
  const Eigen::VectorXd root = eig.eigenvalues().array().sqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
}

FockExpansion apply_creation(const FockExpansion& e, const ModeCoefficients& c) {
  if (static_cast<std::size_t>(c.size()) != e.num_modes()) {
    throw UsageError(fmt::format("mode coefficients of length {} on a {}-mode basis", c.size(),
                                 e.num_modes()));
  }
  FockExpansion out(e.basis());
  for (const auto& [occ, amp] : e.terms()) {
    Occupation next = occ;
    for (std::size_t j = 0; j < occ.size(); ++j) {
      if (c[j] == 0.0) continue;
      ++next[j];
      out.add(next, amp * c[j] * std::sqrt(double(occ[j] + 1)));
      --next[j];
    }
  }
  return out;
}

namespace {

// Calls f(occ) for every occupation of `modes` modes summing to `total`.
template <class F>
void for_each_composition(std::size_t modes, int total, F&& f) {
  Occupation occ(modes, 0);
  auto rec = [&](auto&& self, std::size_t j, int left) -> void {
    if (j + 1 == modes) {
      occ[j] = left;
      f(occ);
      return;
    }
    for (int k = left; k >= 0; --k) {
      occ[j] = k;
      self(self, j + 1, left - k);
    }
  };
  if (modes == 0) return;
  rec(rec, 0, total);
}

}  // namespace

FockExpansion fock_power(const ModeCoefficients& c, int n, const FockBasis& basis) {
  if (static_cast<std::size_t>(c.size()) != basis.size()) {
    throw UsageError(fmt::format("mode coefficients of length {} on a {}-mode basis", c.size(),
                                 basis.size()));
  }
  if (n < 0) throw UsageError("boson number must be non-negative");
  FockExpansion out(basis);
  const double log_nfact = std::lgamma(n + 1.0);
  for_each_composition(basis.size(), n, [&](const Occupation& occ) {
    std::complex<double> amp = 1.0;
    double log_denominator = 0.0;
    for (std::size_t j = 0; j < occ.size(); ++j) {
      for (int k = 0; k < occ[j]; ++k) amp *= c[j];
      log_denominator += std::lgamma(occ[j] + 1.0);
    }
    if (amp == 0.0) return;
    out.add(occ, amp * std::exp(0.5 * (log_nfact - log_denominator)));
  });
  if (out.terms().empty()) out.add(Occupation(basis.size(), 0), 0.0);
  return out;
}

std::complex<double> nboson_overlap(std::complex<double> s, int n) {
  std::complex<double> r = 1.0;
  for (int k = 0; k < n; ++k) r *= s;
  return r;
}

FockExpansion pair_block_state(const ModeCoefficients& c_left, const ModeCoefficients& c_right,
                               int n, const FockBasis& basis) {
  if (n < 1) throw UsageError(fmt::format("pair_block_state needs N >= 1, got {}", n));
  FockExpansion state = fock_power(c_left, n, basis) + fock_power(c_right, n, basis);
  // ||(a†[c])^N|0>/sqrt(N!)||^2 = ||c||^{2N}; the cross term is <c_L|c_R>^N.
  const double norm2 = std::pow(c_left.squaredNorm(), n) + std::pow(c_right.squaredNorm(), n) +
                       2.0 * nboson_overlap(c_left.dot(c_right), n).real();
  if (!(norm2 > 1e-300)) {
    throw DegenerateInputError("L and R block terms cancel; the block state vanishes");
  }
  state *= 1.0 / std::sqrt(norm2);
  return state;
}

FockExpansion tensor_blocks(const FockExpansion& e1, const FockExpansion& e2) {
  std::set<std::string> seen(e1.basis().labels.begin(), e1.basis().labels.end());
  for (const auto& l : e2.basis().labels) {
    if (seen.count(l)) {
      throw UsageError(fmt::format("tensor_blocks: mode label '{}' appears in both blocks", l));
    }
  }
  FockBasis basis;
  basis.labels = e1.basis().labels;
  basis.labels.insert(basis.labels.end(), e2.basis().labels.begin(), e2.basis().labels.end());
  basis.subsystem.assign(e1.num_modes(), 1);
  basis.subsystem.resize(basis.labels.size(), 2);

  FockExpansion out(basis);
  for (const auto& [o1, a1] : e1.terms()) {
    for (const auto& [o2, a2] : e2.terms()) {
      Occupation occ = o1;
      occ.insert(occ.end(), o2.begin(), o2.end());
      out.add(occ, a1 * a2);
    }
  }
  return out;
}

}  // namespace sng
