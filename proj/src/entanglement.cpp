#include "sng/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "sng/error.hpp"

namespace sng {

std::string to_string(EntanglementMethod m) {
  return m == EntanglementMethod::kOccupationExact ? "occupation-exact" : "branch-gram";
}

EntanglementReport schmidt_report(const Eigen::MatrixXcd& coefficients,
                                  EntanglementMethod method) {
  EntanglementReport report;
  report.method = method;
  const double total = coefficients.norm();
  if (!(total > 0.0)) throw DegenerateInputError("entanglement of a zero state");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coefficients / total);
  const Eigen::VectorXd& sv = svd.singularValues();
  double entropy = 0.0;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    const double s = sv[k];
    report.schmidt.push_back(s);
    sum += s;
    const double p = s * s;
    if (p > 0.0) entropy -= p * std::log2(p);
  }
  report.entropy_bits = std::max(entropy, 0.0);
  report.log_negativity_bits = std::max(2.0 * std::log2(sum), 0.0);
  return report;
}

EntanglementReport block_entropy(const FockExpansion& state) {
  const auto& tags = state.basis().subsystem;
  std::vector<std::size_t> first, second;
  for (std::size_t j = 0; j < tags.size(); ++j) {
    if (tags[j] == 1) {
      first.push_back(j);
    } else if (tags[j] == 2) {
      second.push_back(j);
    } else {
      throw UsageError(fmt::format("block_entropy: basis mode '{}' has no subsystem label",
                                   state.basis().labels[j]));
    }
  }
  std::map<Occupation, Eigen::Index> rows, cols;
  auto split = [&](const Occupation& occ) {
    Occupation a, b;
    for (auto j : first) a.push_back(occ[j]);
    for (auto j : second) b.push_back(occ[j]);
    return std::pair{a, b};
  };
  for (const auto& [occ, c] : state.terms()) {
    auto [a, b] = split(occ);
    rows.emplace(a, static_cast<Eigen::Index>(rows.size()));
    cols.emplace(b, static_cast<Eigen::Index>(cols.size()));
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows.size(), cols.size());
  for (const auto& [occ, c] : state.terms()) {
    auto [a, b] = split(occ);
    m(rows.at(a), cols.at(b)) += c;
  }
  return schmidt_report(m, EntanglementMethod::kOccupationExact);
}

double cross_block_diagnostic(const Eigen::MatrixXcd& gram) {
  if (gram.rows() != 4 || gram.cols() != 4) {
    throw UsageError(fmt::format("cross_block_diagnostic expects a 4x4 Gram, got {}x{}",
                                 gram.rows(), gram.cols()));
  }
  const double upper = gram.block(0, 2, 2, 2).squaredNorm();
  const double lower = gram.block(2, 0, 2, 2).squaredNorm();
  return std::sqrt(upper + lower);
}

Eigen::MatrixXcd gram_factor(const Eigen::MatrixXcd& gram) {
  const Eigen::MatrixXcd herm = 0.5 * (gram + gram.adjoint());
  Eigen::LLT<Eigen::MatrixXcd> llt(herm);
  if (llt.info() == Eigen::Success) {
    const Eigen::MatrixXcd l = llt.matrixL();
    const double dmin = l.diagonal().cwiseAbs().minCoeff();
    const double dmax = l.diagonal().cwiseAbs().maxCoeff();
    if (dmin > 1e-6 * dmax) return l;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm);
  const double smallest = eig.eigenvalues().minCoeff();
  if (smallest < -1e-8) {
    throw NumericalInputError(
        fmt::format("branch Gram matrix is indefinite: eigenvalue {:.3e} < -1e-8", smallest));
  }
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

EntanglementReport branch_entanglement(const Eigen::MatrixXcd& gram1,
                                       const Eigen::MatrixXcd& gram2, int n,
                                       const Eigen::Vector4cd& amplitudes) {
  if (gram1.rows() != 4 || gram1.cols() != 4 || gram2.rows() != 4 || gram2.cols() != 4) {
    throw UsageError("branch_entanglement expects two 4x4 branch Gram matrices");
  }
  if (n < 1) throw UsageError("branch_entanglement needs N >= 1");
  auto power = [n](const Eigen::MatrixXcd& g) {
    return g.unaryExpr([n](std::complex<double> s) { return nboson_overlap(s, n); }).eval();
  };
  // |χ_i^b> = Σ_k conj(L_i(b,k)) e_k reproduces <χ_i^b|χ_i^b'> = (L_i L_i†)(b,b').
  const Eigen::MatrixXcd l1 = gram_factor(power(gram1));
  const Eigen::MatrixXcd l2 = gram_factor(power(gram2));
  const Eigen::MatrixXcd c = l1.adjoint() * amplitudes.asDiagonal() * l2.conjugate();
  return schmidt_report(c, EntanglementMethod::kBranchGram);
}

Eigen::MatrixXcd ideal_branch_gram(int subsystem) {
  if (subsystem != 1 && subsystem != 2) throw UsageError("subsystem must be 1 or 2");
  // Branch order LL, LR, RL, RR: subsystem 1 side = b / 2, subsystem 2 side = b % 2.
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(4, 4);
  for (int b = 0; b < 4; ++b) {
    for (int c = 0; c < 4; ++c) {
      const int sb = subsystem == 1 ? b / 2 : b % 2;
      const int sc = subsystem == 1 ? c / 2 : c % 2;
      if (sb == sc) g(b, c) = 1.0;
    }
  }
  return g;
}

FockExpansion reconstruct_state(const Eigen::MatrixXcd& mode_gram, int n) {
  if (mode_gram.rows() != 4 || mode_gram.cols() != 4) {
    throw UsageError("reconstruct_state expects the 4x4 Gram over 1L, 1R, 2L, 2R");
  }
  const Eigen::MatrixXcd c1 = lowdin_mode_coefficients(mode_gram.block(0, 0, 2, 2));
  const Eigen::MatrixXcd c2 = lowdin_mode_coefficients(mode_gram.block(2, 2, 2, 2));
  const auto block1 = pair_block_state(c1.col(0), c1.col(1), n, FockBasis::named("b1_", 2, 1));
  const auto block2 = pair_block_state(c2.col(0), c2.col(1), n, FockBasis::named("b2_", 2, 2));
  return tensor_blocks(block1, block2);
}

EntanglementReport semiclassical_entanglement(const Eigen::MatrixXcd& mode_gram, int n,
                                              double cross_block_threshold) {
  auto report = block_entropy(reconstruct_state(mode_gram, n));
  report.cross_block_overlap_norm = cross_block_diagnostic(mode_gram);
  report.certified = report.cross_block_overlap_norm <= cross_block_threshold;
  return report;
}

}  // namespace sng
