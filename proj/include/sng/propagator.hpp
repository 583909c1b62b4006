#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sng/fft.hpp"
#include "sng/field.hpp"
#include "sng/poisson.hpp"

namespace sng {

enum class SourcingMode {
  /// One shared Φ sourced by the expectation density, weight N/2 per packet.
  kMeanField,
  /// Each branch gravitates under its own configuration, weight N per occupied packet.
  kBranchResolved,
  kNoGravity,
};

std::string to_string(SourcingMode mode);
SourcingMode parse_sourcing(const std::string& text);

/// Joint location of subsystem 1 (first) and subsystem 2 (second).
struct BranchLabel {
  Side first = Side::kL;
  Side second = Side::kL;

  std::string str() const;
  bool operator==(const BranchLabel&) const = default;
};

/// Canonical branch order: LL, LR, RL, RR.
inline constexpr std::array<BranchLabel, 4> kBranchLabels = {
    BranchLabel{Side::kL, Side::kL}, BranchLabel{Side::kL, Side::kR},
    BranchLabel{Side::kR, Side::kL}, BranchLabel{Side::kR, Side::kR}};

struct Branch {
  BranchLabel label;
  /// [0]: subsystem-1 packet at label.first, [1]: subsystem-2 packet at label.second.
  std::array<WavePacket, 2> packets;
  /// ∫ W_b dt / ħ, the product-state phase that the per-packet mean-field
  /// phases double count (W_b = ½∫Φ_b ρ_b).  Adding it makes branch phases
  /// follow the two-body interaction energy.
  double interaction_phase = 0.0;
};

struct BranchSet {
  std::array<Branch, 4> branches;
};

/// Every branch starts from copies of the matching ModeSet packets.
BranchSet make_branches(const ModeSet& modes);

struct Schedule {
  double dt = 0.0;
  std::size_t n_steps = 0;
  std::size_t record_stride = 1;
};

void validate(const Schedule& schedule);

using GramMatrix = Eigen::MatrixXcd;

/// G_ab = <φ_a|φ_b>; upper triangle computed, lower mirrored.
GramMatrix gram_matrix(std::span<const WavePacket* const> packets);
GramMatrix gram_matrix(const ModeSet& modes);
/// 4x4 Gram of one subsystem's packets across the branches LL, LR, RL, RR.
GramMatrix branch_gram(const BranchSet& branches, int subsystem);

/// The packets standing in for 1L, 1R, 2L, 2R in branch-resolved runs:
/// subsystem packets at L are taken from branch LL, at R from branch RR.
ModeSet representative_modes(const BranchSet& branches);

struct PropagatorOptions {
  double phase_guard = 0.5;
  bool include_self_gravity = true;
  KernelScheme kernel_scheme = KernelScheme::kAuto;
};

/// Strang split-step integrator for the Schrödinger–Newton flow.  Holds the
/// FFT plans, the kinetic phase table and the Poisson solver for one grid.
class Propagator {
 public:
  Propagator(std::shared_ptr<const Grid> grid, PhysicalParams params, double dt,
             SourcingMode mode, PropagatorOptions options = {});

  const Grid& grid() const noexcept { return *grid_; }
  const PhysicalParams& params() const noexcept { return params_; }
  SourcingMode mode() const noexcept { return mode_; }
  double dt() const noexcept { return dt_; }
  std::size_t steps_taken() const noexcept { return steps_; }
  const PropagatorOptions& options() const noexcept { return options_; }

  /// Kinetic half step, potential kick with the midpoint Φ, kinetic half step.
  /// MeanField or NoGravity.
  void step(ModeSet& modes);
  /// BranchResolved or NoGravity.
  void step(BranchSet& branches);

  /// Minimum of the potential sourced by the current state (0 without gravity).
  double potential_min(const ModeSet& modes);
  double potential_min(const BranchSet& branches);

  /// Σ w_a ∫ ħ²/2m |∇φ_a|² + ½ Σ_a ∫ Φ_a ρ_a, Φ_a being the potential packet a feels.
  double energy(const ModeSet& modes);
  /// Mean of the per-branch energies (weight N per packet).
  double energy(const BranchSet& branches);

  /// Largest phase advance per step given the current potential bound.
  double kinetic_phase_per_step() const;

 private:
  void kinetic_half(WavePacket& p);
  double kinetic_energy(const WavePacket& p);
  void check_phase(double max_abs_potential) const;
  void check_finite(std::span<const WavePacket> packets) const;
  /// Potentials felt by each packet; returns ½ Σ ∫ Φ_a ρ_a.
  double felt_potentials(std::span<const WavePacket> packets, std::span<const double> weights,
                         std::vector<std::vector<double>>& felt);

  std::shared_ptr<const Grid> grid_;
  PhysicalParams params_;
  double dt_;
  SourcingMode mode_;
  PropagatorOptions options_;
  ComplexFft fft_;
  std::vector<cplx> half_kinetic_;
  std::optional<PoissonSolver> poisson_;
  std::size_t steps_ = 0;
  std::vector<std::vector<double>> felt_;
  std::vector<double> rho_scratch_;
  std::vector<double> phi_scratch_;
};

/// Convenience single step that builds a throwaway propagator.
void strang_step(ModeSet& modes, const PhysicalParams& params, double dt, SourcingMode mode);

struct StepRecord {
  std::size_t step = 0;
  double time = 0.0;
  std::array<PacketObservables, 4> observables{};
  /// 4x4 Gram over 1L, 1R, 2L, 2R (representative packets for branch runs).
  GramMatrix mode_gram;
  /// Branch runs only: subsystem-1 and subsystem-2 Grams across branches.
  std::optional<std::array<GramMatrix, 2>> branch_grams;
  double phi_min = 0.0;
  double energy = 0.0;
};

StepRecord snapshot(const ModeSet& modes, Propagator& propagator, std::size_t step);
StepRecord snapshot(const BranchSet& branches, Propagator& propagator, std::size_t step);

template <class State>
using Recorder = std::function<void(const StepRecord&, const State&)>;

/// Records step 0, every record_stride-th step and the final step.
void evolve(ModeSet& modes, Propagator& propagator, const Schedule& schedule,
            const Recorder<ModeSet>& recorder);
void evolve(BranchSet& branches, Propagator& propagator, const Schedule& schedule,
            const Recorder<BranchSet>& recorder);

}  // namespace sng
