#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sng {

/// Expansion c_j of one physical mode, a†[φ] = Σ_j c_j b†_j, over an orthonormal basis.
using ModeCoefficients = Eigen::VectorXcd;

/// Occupation numbers (n_1, ..., n_k) of the orthonormal basis modes.
using Occupation = std::vector<int>;

/// Labels of the orthonormal basis modes and, optionally, their subsystem (1 or 2; 0 = unassigned).
struct FockBasis {
  std::vector<std::string> labels;
  std::vector<int> subsystem;

  std::size_t size() const noexcept { return labels.size(); }
  /// Modes named <prefix>0, <prefix>1, ... all in `subsystem`.
  static FockBasis named(const std::string& prefix, std::size_t count, int subsystem = 0);
  bool operator==(const FockBasis&) const = default;
};

/// Sparse many-boson state: occupation vector -> amplitude.  All stored
/// occupations share one total boson number.
class FockExpansion {
 public:
  explicit FockExpansion(FockBasis basis);

  static FockExpansion vacuum(FockBasis basis);

  const FockBasis& basis() const noexcept { return basis_; }
  const std::map<Occupation, std::complex<double>>& terms() const noexcept { return terms_; }
  std::size_t num_modes() const noexcept { return basis_.size(); }
  /// -1 for the empty expansion.
  int boson_number() const noexcept { return boson_number_; }

  std::complex<double> coefficient(const Occupation& occ) const;
  /// Adds `value` to the amplitude of `occ`.
  void add(const Occupation& occ, std::complex<double> value);

  double norm() const;
  FockExpansion normalized() const;

  FockExpansion& operator+=(const FockExpansion& other);
  FockExpansion& operator*=(std::complex<double> s);

 private:
  FockBasis basis_;
  std::map<Occupation, std::complex<double>> terms_;
  int boson_number_ = -1;
};

FockExpansion operator+(FockExpansion a, const FockExpansion& b);
FockExpansion operator*(std::complex<double> s, FockExpansion e);

/// <a|b>; bases must match.
std::complex<double> inner_product(const FockExpansion& a, const FockExpansion& b);

/// Symmetric Löwdin transform T = G^{-1/2}, so that T·G·T† = 1.  Throws
/// DegeneracyError when the smallest eigenvalue of G is <= 1e-10.
Eigen::MatrixXcd lowdin_orthonormalize(const Eigen::MatrixXcd& gram);

/// G^{1/2}: column a holds the ModeCoefficients of physical mode a over the
/// Löwdin basis b = T φ.  Same degeneracy rule as lowdin_orthonormalize.
Eigen::MatrixXcd lowdin_mode_coefficients(const Eigen::MatrixXcd& gram);

/// Applies Σ_j c_j b†_j with ladder factors sqrt(n_j + 1).  Not renormalized.
FockExpansion apply_creation(const FockExpansion& e, const ModeCoefficients& c);

/// (a†[c])^N |0> / sqrt(N!) in closed multinomial form.
FockExpansion fock_power(const ModeCoefficients& c, int n, const FockBasis& basis);

/// Normalized ((a†_L)^N + (a†_R)^N)|0> over one subsystem block.  For unit
/// modes the norm squared before normalization is 2·N!·(1 + Re <φ_L|φ_R>^N).
FockExpansion pair_block_state(const ModeCoefficients& c_left, const ModeCoefficients& c_right,
                               int n, const FockBasis& basis);

/// Product state over the concatenated basis; modes of e1 are tagged
/// subsystem 1 and those of e2 subsystem 2.
FockExpansion tensor_blocks(const FockExpansion& e1, const FockExpansion& e2);

/// Normalized N-boson overlap <N;φ|N;ψ> = <φ|ψ>^N.
std::complex<double> nboson_overlap(std::complex<double> s, int n);

}  // namespace sng
