#include <doctest.h>

#include <cmath>
#include <limits>

#include "sng/error.hpp"
#include "sng/oracles.hpp"
#include "sng/propagator.hpp"
#include "support.hpp"

using namespace sng;

namespace {

PhysicalParams gravity(double G, int n = 2) {
  PhysicalParams p;
  p.newton_G = G;
  p.boson_number = n;
  p.softening = 1.0;
  return p;
}

ModeSet standard_modes(const std::shared_ptr<const Grid>& g) {
  return test::line_modes(g, {-12, -4, 4, 12}, 1.0);
}

double max_entry(const GramMatrix& m) { return m.cwiseAbs().maxCoeff(); }

double packet_distance(const WavePacket& a, const WavePacket& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) s += std::norm(a.amplitudes[i] - b.amplitudes[i]);
  return std::sqrt(s * a.grid->cell_volume());
}

ModeSet run(const PhysicalParams& params, double dt, std::size_t steps, SourcingMode mode) {
  auto g = build_grid({1, 256, 40.0});
  ModeSet m = standard_modes(g);
  Propagator prop(g, params, dt, mode);
  for (std::size_t s = 0; s < steps; ++s) prop.step(m);
  return m;
}

}  // namespace

TEST_CASE("sourcing names round-trip") {
  for (auto m : {SourcingMode::kMeanField, SourcingMode::kBranchResolved, SourcingMode::kNoGravity})
    CHECK(parse_sourcing(to_string(m)) == m);
  CHECK_THROWS_AS(parse_sourcing("semiclassical"), ConfigError);
}

TEST_CASE("make_branches: branches start as copies of the modes") {
  auto g = build_grid({1, 256, 40.0});
  ModeSet m = standard_modes(g);
  BranchSet b = make_branches(m);
  for (int k = 0; k < 4; ++k) {
    const auto& br = b.branches[k];
    CHECK(br.label == kBranchLabels[k]);
    CHECK(br.packets[0].amplitudes == m[PacketLabel{1, br.label.first}].amplitudes);
    CHECK(br.packets[1].amplitudes == m[PacketLabel{2, br.label.second}].amplitudes);
    CHECK(br.interaction_phase == 0.0);
  }
  CHECK(b.branches[2].label.str() == "RL");
  auto rep = representative_modes(b);
  for (int a = 0; a < 4; ++a) CHECK(rep.packets[a].amplitudes == m.packets[a].amplitudes);
}

TEST_CASE("gram_matrix: disjoint packets, 4σ overlap and PSD") {
  auto g = build_grid({1, 1024, 80.0});
  auto far = test::line_modes(g, {-24, -8, 8, 24}, 1.0);
  CHECK((gram_matrix(far) - GramMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

  auto near = test::line_modes(g, {-2, 2, 10, 20}, 1.0);
  const GramMatrix G = gram_matrix(near);
  CHECK(std::abs(G(0, 1) - std::exp(-2.0)) < 1e-12);
  CHECK(G.isApprox(G.adjoint(), 0.0));

  for (int trial = 0; trial < 20; ++trial) {
    ModeSet r;
    for (int a = 0; a < 4; ++a) r.packets[a] = test::random_packet(g, kModeLabels[a]);
    Eigen::SelfAdjointEigenSolver<GramMatrix> eig(gram_matrix(r));
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * eig.eigenvalues().maxCoeff());
  }

  const WavePacket other = test::random_packet(build_grid({1, 1024, 40.0}));
  const std::array<const WavePacket*, 2> mixed{&near.packets[0], &other};
  CHECK_THROWS_AS(gram_matrix(mixed), UsageError);
}

TEST_CASE("strang_step: free Gaussian spreads as the analytic solution") {
  auto g = build_grid({1, 256, 40.0});
  ModeSet m = standard_modes(g);
  PhysicalParams params;
  params.hbar = 0.8;
  params.mass = 1.3;
  const double dt = 2e-3;
  Propagator prop(g, params, dt, SourcingMode::kNoGravity);
  const int steps = 1000;
  for (int s = 0; s < steps; ++s) prop.step(m);
  const double expected = oracle::free_gaussian_width(1.0, steps * dt, params.hbar, params.mass);
  for (const auto& p : m.packets) {
    CHECK(std::abs(packet_observables(p).rms_width / expected - 1.0) < 1e-6);
  }
}

TEST_CASE("strang_step: norms preserved to 1e-12 per step in every sourcing mode") {
  auto g = build_grid({1, 256, 40.0});
  for (auto mode : {SourcingMode::kNoGravity, SourcingMode::kMeanField}) {
    ModeSet m = standard_modes(g);
    Propagator prop(g, gravity(1.0), 2e-3, mode);
    for (int s = 0; s < 50; ++s) {
      std::array<double, 4> before{};
      for (int a = 0; a < 4; ++a) before[a] = norm(m.packets[a]);
      prop.step(m);
      for (int a = 0; a < 4; ++a) CHECK(std::abs(norm(m.packets[a]) - before[a]) < 1e-12);
    }
  }
  BranchSet b = make_branches(standard_modes(g));
  Propagator prop(g, gravity(1.0), 2e-3, SourcingMode::kBranchResolved);
  for (int s = 0; s < 50; ++s) {
    prop.step(b);
    for (const auto& br : b.branches)
      for (const auto& p : br.packets) CHECK(std::abs(norm(p) - 1.0) < 1e-11);
  }
}

TEST_CASE("strang_step: convenience wrapper matches a propagator step") {
  auto g = build_grid({1, 256, 40.0});
  ModeSet a = standard_modes(g);
  ModeSet b = a;
  strang_step(a, gravity(0.5), 1e-3, SourcingMode::kMeanField);
  Propagator prop(g, gravity(0.5), 1e-3, SourcingMode::kMeanField);
  prop.step(b);
  for (int k = 0; k < 4; ++k) CHECK(a.packets[k].amplitudes == b.packets[k].amplitudes);
}

TEST_CASE("strang_step: mean-field self-convergence is second order in dt") {
  const auto params = gravity(1.0);
  const double t = 0.5;
  const ModeSet coarse = run(params, 2e-3, std::size_t(t / 2e-3), SourcingMode::kMeanField);
  const ModeSet mid = run(params, 1e-3, std::size_t(t / 1e-3), SourcingMode::kMeanField);
  const ModeSet fine = run(params, 5e-4, std::size_t(t / 5e-4), SourcingMode::kMeanField);
  for (int a = 0; a < 4; ++a) {
    const double d1 = packet_distance(coarse.packets[a], mid.packets[a]);
    const double d2 = packet_distance(mid.packets[a], fine.packets[a]);
    const double ratio = d1 / d2;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
    const double w1 = packet_observables(coarse.packets[a]).rms_width;
    const double w2 = packet_observables(mid.packets[a]).rms_width;
    const double w3 = packet_observables(fine.packets[a]).rms_width;
    CHECK(std::abs(w1 - w2) / std::abs(w2 - w3) > 3.0);
  }
}

TEST_CASE("strang_step: phase guard rejects a coarse step with a usable suggestion") {
  auto g = build_grid({1, 1024, 20.0});
  ModeSet m = test::line_modes(g, {-6, -2, 2, 6}, 0.5);
  Propagator prop(g, gravity(1.0), 0.01, SourcingMode::kMeanField);
  double suggested = 0.0;
  try {
    prop.step(m);
    FAIL("expected StepSizeError");
  } catch (const StepSizeError& e) {
    suggested = e.suggested_dt();
  }
  REQUIRE(suggested > 0.0);
  CHECK(suggested < 0.01);
  Propagator ok(g, gravity(1.0), suggested, SourcingMode::kMeanField);
  CHECK_NOTHROW(ok.step(m));
}

TEST_CASE("strang_step: potential term of the guard") {
  auto g = build_grid({1, 64, 40.0});
  ModeSet m = standard_modes(g);
  // kinetic phase is tiny on this coarse grid; a huge G makes the kick dominate
  Propagator prop(g, gravity(1e4), 0.01, SourcingMode::kMeanField);
  CHECK(prop.kinetic_phase_per_step() < 0.5);
  CHECK_THROWS_AS(prop.step(m), StepSizeError);
}

TEST_CASE("strang_step: non-finite amplitudes are reported with the step index") {
  auto g = build_grid({1, 256, 40.0});
  ModeSet m = standard_modes(g);
  Propagator prop(g, gravity(0.0), 1e-3, SourcingMode::kNoGravity);
  prop.step(m);
  prop.step(m);
  m.packets[2].amplitudes[100] = std::numeric_limits<double>::quiet_NaN();
  try {
    prop.step(m);
    FAIL("expected NumericalFailure");
  } catch (const NumericalFailure& e) {
    CHECK(e.step() == 3);
  }
}

TEST_CASE("strang_step: sourcing mode and state shape must agree") {
  auto g = build_grid({1, 64, 40.0});
  ModeSet m = standard_modes(g);
  BranchSet b = make_branches(m);
  Propagator branch(g, gravity(1.0), 1e-3, SourcingMode::kBranchResolved);
  Propagator mean(g, gravity(1.0), 1e-3, SourcingMode::kMeanField);
  CHECK_THROWS_AS(branch.step(m), UsageError);
  CHECK_THROWS_AS(mean.step(b), UsageError);
  CHECK_THROWS_AS(Propagator(g, gravity(1.0), 0.0, SourcingMode::kNoGravity), ConfigError);
}

TEST_CASE("evolve: zero steps records only the initial state") {
  auto g = build_grid({1, 256, 40.0});
  ModeSet m = standard_modes(g);
  const ModeSet before = m;
  Propagator prop(g, gravity(1.0), 1e-3, SourcingMode::kMeanField);
  std::vector<StepRecord> records;
  evolve(m, prop, Schedule{1e-3, 0, 1},
         [&](const StepRecord& r, const ModeSet&) { records.push_back(r); });
  REQUIRE(records.size() == 1);
  CHECK(records[0].step == 0);
  CHECK(records[0].time == 0.0);
  for (int a = 0; a < 4; ++a) CHECK(m.packets[a].amplitudes == before.packets[a].amplitudes);
}

TEST_CASE("evolve: recording cadence includes the final step") {
  auto g = build_grid({1, 128, 40.0});
  ModeSet m = standard_modes(g);
  Propagator prop(g, gravity(0.0), 1e-3, SourcingMode::kNoGravity);
  std::vector<std::size_t> steps;
  evolve(m, prop, Schedule{1e-3, 10, 4},
         [&](const StepRecord& r, const ModeSet&) { steps.push_back(r.step); });
  CHECK(steps == std::vector<std::size_t>{0, 4, 8, 10});
  CHECK_THROWS_AS(evolve(m, prop, Schedule{2e-3, 1, 1}, {}), UsageError);
  CHECK_THROWS_AS(validate(Schedule{1e-3, 0, 1}), ConfigError);
  CHECK_THROWS_AS(validate(Schedule{1e-3, 5, 0}), ConfigError);
  CHECK_THROWS_AS(validate(Schedule{-1e-3, 5, 1}), ConfigError);
}

TEST_CASE("evolve: Gram matrix conserved without gravity and under mean field") {
  auto g = build_grid({1, 256, 40.0});
  // overlapping neighbours so the Gram matrix is not the identity
  const std::array<double, 4> x{-5, -2, 2, 5};
  {
    ModeSet m = test::line_modes(g, x, 1.0);
    const GramMatrix g0 = gram_matrix(m);
    Propagator prop(g, gravity(0.0), 2e-3, SourcingMode::kNoGravity);
    for (int s = 0; s < 2000; ++s) prop.step(m);
    CHECK(max_entry(gram_matrix(m) - g0) < 1e-10);
  }
  {
    ModeSet m = test::line_modes(g, x, 1.0);
    const GramMatrix g0 = gram_matrix(m);
    CHECK(std::abs(g0(0, 1)) > 0.1);
    Propagator prop(g, gravity(1.0), 1e-3, SourcingMode::kMeanField);
    double drift = 0.0;
    evolve(m, prop, Schedule{1e-3, 10000, 500}, [&](const StepRecord& r, const ModeSet&) {
      drift = std::max(drift, max_entry(r.mode_gram - g0));
    });
    MESSAGE("mean-field Gram drift over 1e4 steps: " << drift);
    CHECK(drift < 1e-8);
  }
}

TEST_CASE("evolve: branch-resolved sourcing makes cross-branch overlaps drift") {
  auto g = build_grid({1, 256, 40.0});
  BranchSet b = make_branches(standard_modes(g));
  const GramMatrix g1 = branch_gram(b, 1);
  Propagator prop(g, gravity(1.0, 1), 1e-3, SourcingMode::kBranchResolved);
  double drift = 0.0;
  evolve(b, prop, Schedule{1e-3, 2000, 200}, [&](const StepRecord& r, const BranchSet&) {
    REQUIRE(r.branch_grams.has_value());
    drift = std::max(drift, max_entry((*r.branch_grams)[0] - g1));
  });
  CHECK(drift > 1e-6);
  // each branch felt a different potential, so the accumulated phases differ
  CHECK(b.branches[1].interaction_phase != b.branches[2].interaction_phase);
  CHECK(b.branches[0].interaction_phase < 0.0);
}

TEST_CASE("energy: kinetic only for stationary packets at G = 0") {
  auto g = build_grid({1, 512, 40.0});
  ModeSet m = standard_modes(g);
  PhysicalParams params = gravity(0.0, 2);
  params.hbar = 1.1;
  params.mass = 0.9;
  Propagator prop(g, params, 1e-3, SourcingMode::kNoGravity);
  // Σ (N/2) ħ²/(8 m σ²) over four packets
  const double expected = 4.0 * 1.0 * params.hbar * params.hbar / (8.0 * params.mass);
  CHECK(std::abs(prop.energy(m) / expected - 1.0) < 1e-10);
}

TEST_CASE("energy: conserved at G = 0 and drifting as dt^2 under mean field") {
  auto g = build_grid({1, 256, 40.0});
  {
    ModeSet m = standard_modes(g);
    for (auto& p : m.packets) {
      p = gaussian_packet(g, {packet_observables(p).mean_position[0], 0, 0}, 1.0, {1.5, 0, 0},
                          p.label);
    }
    Propagator prop(g, gravity(0.0), 1e-3, SourcingMode::kNoGravity);
    const double e0 = prop.energy(m);
    for (int s = 0; s < 1000; ++s) prop.step(m);
    CHECK(std::abs(prop.energy(m) / e0 - 1.0) < 1e-10);
  }
  auto drift = [&](double dt) {
    ModeSet m = standard_modes(g);
    Propagator prop(g, gravity(1.0), dt, SourcingMode::kMeanField);
    const double e0 = prop.energy(m);
    double worst = 0.0;
    const auto steps = static_cast<int>(std::lround(1.0 / dt));
    for (int s = 0; s < steps; ++s) {
      prop.step(m);
      worst = std::max(worst, std::abs(prop.energy(m) - e0) / std::abs(e0));
    }
    return worst;
  };
  const double coarse = drift(2e-3);
  const double fine = drift(1e-3);
  MESSAGE("mean-field energy drift " << coarse << " -> " << fine);
  CHECK(coarse / fine > 3.0);
  CHECK(fine < 1e-4);
}
