#include "sng/propagator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sng/error.hpp"

namespace sng {

std::string to_string(SourcingMode mode) {
  switch (mode) {
    case SourcingMode::kMeanField: return "mean-field";
    case SourcingMode::kBranchResolved: return "branch-resolved";
    case SourcingMode::kNoGravity: return "none";
  }
  return "?";
}

SourcingMode parse_sourcing(const std::string& text) {
  if (text == "mean-field") return SourcingMode::kMeanField;
  if (text == "branch-resolved") return SourcingMode::kBranchResolved;
  if (text == "none") return SourcingMode::kNoGravity;
  throw ConfigError(fmt::format(
      "unknown sourcing mode '{}' (expected mean-field, branch-resolved or none)", text));
}

std::string BranchLabel::str() const {
  return fmt::format("{}{}", first == Side::kL ? 'L' : 'R', second == Side::kL ? 'L' : 'R');
}

BranchSet make_branches(const ModeSet& modes) {
  validate(modes);
  BranchSet set;
  for (int b = 0; b < 4; ++b) {
    const BranchLabel label = kBranchLabels[b];
    set.branches[b].label = label;
    set.branches[b].packets = {modes[PacketLabel{1, label.first}],
                               modes[PacketLabel{2, label.second}]};
  }
  return set;
}

void validate(const Schedule& schedule) {
  if (!(schedule.dt > 0.0) || !std::isfinite(schedule.dt)) {
    throw ConfigError(fmt::format("schedule dt must be positive, got {}", schedule.dt));
  }
  if (schedule.n_steps < 1) throw ConfigError("schedule needs at least one step");
  if (schedule.record_stride < 1) throw ConfigError("record stride must be >= 1");
}

GramMatrix gram_matrix(std::span<const WavePacket* const> packets) {
  const auto k = static_cast<Eigen::Index>(packets.size());
  GramMatrix g(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a; b < k; ++b) {
      g(a, b) = inner_product(*packets[a], *packets[b]);
      g(b, a) = std::conj(g(a, b));
    }
    g(a, a) = g(a, a).real();
  }
  return g;
}

GramMatrix gram_matrix(const ModeSet& modes) {
  const std::array<const WavePacket*, 4> ptrs{&modes.packets[0], &modes.packets[1],
                                              &modes.packets[2], &modes.packets[3]};
  return gram_matrix(ptrs);
}

GramMatrix branch_gram(const BranchSet& branches, int subsystem) {
  if (subsystem != 1 && subsystem != 2) throw UsageError("subsystem must be 1 or 2");
  std::array<const WavePacket*, 4> ptrs{};
  for (int b = 0; b < 4; ++b) ptrs[b] = &branches.branches[b].packets[subsystem - 1];
  return gram_matrix(ptrs);
}

ModeSet representative_modes(const BranchSet& branches) {
  const auto& ll = branches.branches[0];
  const auto& rr = branches.branches[3];
  return ModeSet{{ll.packets[0], rr.packets[0], ll.packets[1], rr.packets[1]}};
}

Propagator::Propagator(std::shared_ptr<const Grid> grid, PhysicalParams params, double dt,
                       SourcingMode mode, PropagatorOptions options)
    : grid_(std::move(grid)),
      params_(params),
      dt_(dt),
      mode_(mode),
      options_(options),
      fft_(grid_->dimension(), grid_->points_per_axis()) {
  validate(params_);
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw ConfigError(fmt::format("time step must be positive, got {}", dt_));
  }
  if (!(options_.phase_guard > 0.0)) throw ConfigError("phase guard must be positive");

  const double scale = 1.0 / static_cast<double>(grid_->size());
  const double rate = params_.hbar / (2.0 * params_.mass);
  half_kinetic_.resize(grid_->size());
  for (std::size_t i = 0; i < grid_->size(); ++i) {
    half_kinetic_[i] = std::polar(scale, -rate * grid_->wavenumber_squared(i) * 0.5 * dt_);
  }
  if (mode_ != SourcingMode::kNoGravity) {
    poisson_.emplace(build_kernel(grid_, params_, options_.kernel_scheme));
  }
  rho_scratch_.resize(grid_->size());
  phi_scratch_.resize(grid_->size());
}

double Propagator::kinetic_phase_per_step() const {
  return params_.hbar * grid_->max_wavenumber_squared() * dt_ / (2.0 * params_.mass);
}

void Propagator::check_phase(double max_abs_potential) const {
  const double kinetic = kinetic_phase_per_step();
  const double potential = params_.mass * max_abs_potential * dt_ / params_.hbar;
  const double worst = std::max(kinetic, potential);
  if (worst > options_.phase_guard) {
    const double suggested = 0.9 * dt_ * options_.phase_guard / worst;
    throw StepSizeError(
        fmt::format("step {}: per-step phase {:.4g} rad ({} term) exceeds guard {} rad; "
                    "suggested dt <= {:.6g}",
                    steps_ + 1, worst, kinetic >= potential ? "kinetic" : "potential",
                    options_.phase_guard, suggested),
        suggested);
  }
}

void Propagator::check_finite(std::span<const WavePacket> packets) const {
  for (const auto& p : packets) {
    double s = 0.0;
    for (const auto& a : p.amplitudes) s += std::norm(a);
    if (!std::isfinite(s)) {
      throw NumericalFailure(
          fmt::format("non-finite amplitudes in packet {} at step {}", p.label.str(), steps_ + 1),
          steps_ + 1);
    }
  }
}

void Propagator::kinetic_half(WavePacket& p) {
  fft_.forward(p.amplitudes);
  for (std::size_t i = 0; i < p.amplitudes.size(); ++i) p.amplitudes[i] *= half_kinetic_[i];
  fft_.backward(p.amplitudes);
}

double Propagator::kinetic_energy(const WavePacket& p) {
  std::vector<cplx> work = p.amplitudes;
  fft_.forward(work);
  double sum = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    sum += grid_->wavenumber_squared(i) * std::norm(work[i]);
  }
  const double parseval = grid_->cell_volume() / static_cast<double>(grid_->size());
  return params_.hbar * params_.hbar / (2.0 * params_.mass) * sum * parseval;
}

double Propagator::felt_potentials(std::span<const WavePacket> packets,
                                   std::span<const double> weights,
                                   std::vector<std::vector<double>>& felt) {
  const std::size_t n = grid_->size();
  felt.resize(packets.size());
  std::fill(rho_scratch_.begin(), rho_scratch_.end(), 0.0);
  for (std::size_t a = 0; a < packets.size(); ++a) {
    const double wm = weights[a] * params_.mass;
    for (std::size_t i = 0; i < n; ++i) rho_scratch_[i] += wm * std::norm(packets[a].amplitudes[i]);
  }
  poisson_->solve(rho_scratch_, phi_scratch_);

  for (std::size_t a = 0; a < packets.size(); ++a) {
    felt[a] = phi_scratch_;
    if (!options_.include_self_gravity) {
      const double wm = weights[a] * params_.mass;
      for (std::size_t i = 0; i < n; ++i) rho_scratch_[i] = wm * std::norm(packets[a].amplitudes[i]);
      std::vector<double> self(n);
      poisson_->solve(rho_scratch_, self);
      for (std::size_t i = 0; i < n; ++i) felt[a][i] -= self[i];
    }
  }

  double interaction = 0.0;
  for (std::size_t a = 0; a < packets.size(); ++a) {
    const double wm = weights[a] * params_.mass;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += felt[a][i] * std::norm(packets[a].amplitudes[i]);
    interaction += 0.5 * wm * s;
  }
  return interaction * grid_->cell_volume();
}

namespace {

double max_abs(const std::vector<std::vector<double>>& fields) {
  double m = 0.0;
  for (const auto& f : fields)
    for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

void kick(WavePacket& p, const std::vector<double>& phi, double factor) {
  for (std::size_t i = 0; i < p.amplitudes.size(); ++i) {
    p.amplitudes[i] *= std::polar(1.0, -factor * phi[i]);
  }
}

}  // namespace

void Propagator::step(ModeSet& modes) {
  if (mode_ == SourcingMode::kBranchResolved) {
    throw UsageError("branch-resolved sourcing steps a BranchSet, not a ModeSet");
  }
  check_phase(0.0);
  for (auto& p : modes.packets) kinetic_half(p);
  if (mode_ == SourcingMode::kMeanField) {
    const double w = 0.5 * params_.boson_number;
    const std::array<double, 4> weights{w, w, w, w};
    felt_potentials(modes.packets, weights, felt_);
    check_phase(max_abs(felt_));
    const double factor = params_.mass * dt_ / params_.hbar;
    for (std::size_t a = 0; a < 4; ++a) kick(modes.packets[a], felt_[a], factor);
  }
  for (auto& p : modes.packets) kinetic_half(p);
  check_finite(modes.packets);
  ++steps_;
}

void Propagator::step(BranchSet& branches) {
  if (mode_ == SourcingMode::kMeanField) {
    throw UsageError("mean-field sourcing steps a ModeSet, not a BranchSet");
  }
  check_phase(0.0);
  for (auto& b : branches.branches)
    for (auto& p : b.packets) kinetic_half(p);
  if (mode_ == SourcingMode::kBranchResolved) {
    const double w = params_.boson_number;
    const std::array<double, 2> weights{w, w};
    const double factor = params_.mass * dt_ / params_.hbar;
    for (auto& b : branches.branches) {
      const double interaction = felt_potentials(b.packets, weights, felt_);
      check_phase(max_abs(felt_));
      kick(b.packets[0], felt_[0], factor);
      kick(b.packets[1], felt_[1], factor);
      b.interaction_phase += interaction * dt_ / params_.hbar;
    }
  }
  for (auto& b : branches.branches) {
    for (auto& p : b.packets) kinetic_half(p);
    check_finite(b.packets);
  }
  ++steps_;
}

double Propagator::potential_min(const ModeSet& modes) {
  if (!poisson_) return 0.0;
  auto rho = mass_density(modes, params_);
  return poisson_->solve(rho).min();
}

double Propagator::potential_min(const BranchSet& branches) {
  if (!poisson_) return 0.0;
  double m = 0.0;
  const std::array<double, 2> weights{double(params_.boson_number),
                                      double(params_.boson_number)};
  for (const auto& b : branches.branches) {
    auto rho = mass_density(std::span<const WavePacket>(b.packets), params_, weights);
    m = std::min(m, poisson_->solve(rho).min());
  }
  return m;
}

double Propagator::energy(const ModeSet& modes) {
  if (mode_ == SourcingMode::kBranchResolved) {
    throw UsageError("energy of a ModeSet requires mean-field or no-gravity sourcing");
  }
  const double w = 0.5 * params_.boson_number;
  double e = 0.0;
  for (const auto& p : modes.packets) e += w * kinetic_energy(p);
  if (mode_ == SourcingMode::kMeanField) {
    const std::array<double, 4> weights{w, w, w, w};
    e += felt_potentials(modes.packets, weights, felt_);
  }
  return e;
}

double Propagator::energy(const BranchSet& branches) {
  const double w = params_.boson_number;
  const std::array<double, 2> weights{w, w};
  double total = 0.0;
  for (const auto& b : branches.branches) {
    double e = w * (kinetic_energy(b.packets[0]) + kinetic_energy(b.packets[1]));
    if (mode_ == SourcingMode::kBranchResolved) e += felt_potentials(b.packets, weights, felt_);
    total += e;
  }
  return 0.25 * total;
}

void strang_step(ModeSet& modes, const PhysicalParams& params, double dt, SourcingMode mode) {
  Propagator prop(modes.grid(), params, dt, mode);
  prop.step(modes);
}

namespace {

void fill_common(StepRecord& rec, const ModeSet& modes) {
  for (int a = 0; a < 4; ++a) rec.observables[a] = packet_observables(modes.packets[a]);
  rec.mode_gram = gram_matrix(modes);
}

}  // namespace

StepRecord snapshot(const ModeSet& modes, Propagator& propagator, std::size_t step) {
  StepRecord rec;
  rec.step = step;
  rec.time = static_cast<double>(step) * propagator.dt();
  fill_common(rec, modes);
  rec.phi_min = propagator.potential_min(modes);
  rec.energy = propagator.energy(modes);
  return rec;
}

StepRecord snapshot(const BranchSet& branches, Propagator& propagator, std::size_t step) {
  StepRecord rec;
  rec.step = step;
  rec.time = static_cast<double>(step) * propagator.dt();
  fill_common(rec, representative_modes(branches));
  rec.branch_grams = std::array<GramMatrix, 2>{branch_gram(branches, 1), branch_gram(branches, 2)};
  rec.phi_min = propagator.potential_min(branches);
  rec.energy = propagator.energy(branches);
  return rec;
}

namespace {

template <class State>
void evolve_impl(State& state, Propagator& propagator, const Schedule& schedule,
                 const Recorder<State>& recorder) {
  if (schedule.record_stride < 1) throw ConfigError("record stride must be >= 1");
  if (schedule.dt != propagator.dt()) {
    throw UsageError(fmt::format("schedule dt {} differs from propagator dt {}", schedule.dt,
                                 propagator.dt()));
  }
  if (recorder) recorder(snapshot(state, propagator, 0), state);
  for (std::size_t s = 1; s <= schedule.n_steps; ++s) {
    propagator.step(state);
    if (recorder && (s % schedule.record_stride == 0 || s == schedule.n_steps)) {
      recorder(snapshot(state, propagator, s), state);
    }
  }
}

}  // namespace

void evolve(ModeSet& modes, Propagator& propagator, const Schedule& schedule,
            const Recorder<ModeSet>& recorder) {
  validate(modes);
  evolve_impl(modes, propagator, schedule, recorder);
}

void evolve(BranchSet& branches, Propagator& propagator, const Schedule& schedule,
            const Recorder<BranchSet>& recorder) {
  evolve_impl(branches, propagator, schedule, recorder);
}

}  // namespace sng
