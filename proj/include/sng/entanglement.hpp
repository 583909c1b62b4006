#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sng/fock.hpp"

namespace sng {

enum class EntanglementMethod { kOccupationExact, kBranchGram };

std::string to_string(EntanglementMethod m);

/// Pure-state entanglement across the 1|2 partition.  Entropy and
/// log-negativity in bits.
struct EntanglementReport {
  double entropy_bits = 0.0;
  double log_negativity_bits = 0.0;
  double cross_block_overlap_norm = 0.0;
  EntanglementMethod method = EntanglementMethod::kOccupationExact;
  /// Schmidt coefficients of the normalized state, descending.
  std::vector<double> schmidt;
  /// False when the cross-block overlap exceeds the caller's threshold and the
  /// 1|2 mode partition can no longer be trusted.
  bool certified = true;
};

/// Entropy and log-negativity from the singular values of a (not necessarily
/// normalized) bipartite coefficient matrix.
EntanglementReport schmidt_report(const Eigen::MatrixXcd& coefficients,
                                  EntanglementMethod method);

/// Reshapes the amplitudes into (subsystem-1 occupations) x (subsystem-2
/// occupations) and decomposes.  Every basis mode must carry a subsystem tag.
EntanglementReport block_entropy(const FockExpansion& state);

/// Frobenius norm of the off-diagonal blocks of a 4x4 Gram over (1L, 1R, 2L, 2R).
double cross_block_diagnostic(const Eigen::MatrixXcd& gram);

/// L with L·L† = G: Cholesky when well conditioned, otherwise the clipped
/// eigendecomposition.  Throws NumericalInputError for eigenvalues < -1e-8.
Eigen::MatrixXcd gram_factor(const Eigen::MatrixXcd& gram);

/// Entanglement of Σ_b a_b |N;φ1^b>|N;φ2^b> from the single-packet branch
/// Grams (branch order LL, LR, RL, RR).
EntanglementReport branch_entanglement(const Eigen::MatrixXcd& gram1,
                                       const Eigen::MatrixXcd& gram2, int n,
                                       const Eigen::Vector4cd& amplitudes =
                                           Eigen::Vector4cd::Constant(0.5));

/// Branch Gram of undistorted packets: <φ_i^b|φ_i^b'> = 1 when subsystem i sits
/// at the same side in both branches, 0 otherwise.
Eigen::MatrixXcd ideal_branch_gram(int subsystem);

/// Exact state over the evolved modes: symmetric Löwdin within {1L,1R} and
/// within {2L,2R}, pair block states with N bosons, tensored.
FockExpansion reconstruct_state(const Eigen::MatrixXcd& mode_gram, int n);

/// reconstruct_state followed by block_entropy; uncertified above
/// `cross_block_threshold`.
EntanglementReport semiclassical_entanglement(const Eigen::MatrixXcd& mode_gram, int n,
                                              double cross_block_threshold);

}  // namespace sng
