#include "sng/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "sng/entanglement.hpp"
#include "sng/error.hpp"
#include "sng/fock.hpp"
#include "sng/oracles.hpp"
#include "sng/poisson.hpp"
#include "sng/propagator.hpp"

namespace sng {

bool VerifyReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const VerifyItem& i) { return i.passed; });
}

namespace {

VerifyItem item(std::string name, double error, double tolerance, std::string detail) {
  return VerifyItem{std::move(name), error, tolerance, error <= tolerance, std::move(detail)};
}

/// Runs `body`; library exceptions become a failed entry.
template <class F>
VerifyItem guarded(const std::string& name, double tolerance, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return VerifyItem{name, INFINITY, tolerance, false, e.what()};
  }
}

double probe_width(const ScenarioConfig& c) {
  double w = c.packets[0].width;
  for (const auto& p : c.packets) w = std::min(w, p.width);
  return std::max(w, 2.5 * c.grid.spacing());
}

VerifyItem gaussian_potential(const ScenarioConfig& c, bool fault) {
  auto grid = build_grid(c.grid);
  const double sigma = probe_width(c);
  PhysicalParams params = c.resolved_physics();
  params.newton_G = params.newton_G > 0.0 ? params.newton_G : 1.0;
  const double mass = params.boson_number * params.mass;

  auto packet = gaussian_packet(grid, {}, sigma, {}, {}, c.support_sigmas);
  const std::array<double, 1> weight{double(params.boson_number)};
  auto rho = mass_density(std::span<const WavePacket>(&packet, 1), params, weight);

  GravityKernel kernel = build_kernel(grid, params, c.kernel);
  if (fault) {
    for (auto& v : kernel.spectrum) v *= 1.001;
  }
  auto phi = PoissonSolver(std::move(kernel)).solve(rho);

  double worst = 0.0;
  if (grid->dimension() == 3) {
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const Vec3 x = grid->position(i);
      const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      if (r < 0.5 * sigma || r > 4.0 * sigma) continue;
      const double ref = oracle::gaussian_potential_closed_form(r, sigma, mass, params.newton_G);
      worst = std::max(worst, std::abs(phi.values[i] - ref) / std::abs(ref));
    }
    return item("gaussian-potential", worst, 1e-6,
                fmt::format("3D sigma={} vs -(GM/r)erf(r/sigma sqrt2), r in [sigma/2, 4sigma]",
                            sigma));
  }
  const std::size_t stride = std::max<std::size_t>(1, grid->size() / 64);
  for (std::size_t i = 0; i < grid->size(); i += stride) {
    const double x = grid->coordinates()[i];
    if (std::abs(x) > 4.0 * sigma) continue;
    const double ref = oracle::softened_gaussian_potential(x, 0.0, sigma, mass, params.newton_G,
                                                           params.softening);
    worst = std::max(worst, std::abs(phi.values[i] - ref) / std::abs(ref));
  }
  return item("gaussian-potential", worst, 1e-8,
              fmt::format("1D sigma={} softening={} vs direct quadrature", sigma,
                          params.softening));
}

VerifyItem shell_quadrature(const ScenarioConfig& c) {
  const double sigma = probe_width(c);
  double worst = 0.0;
  for (double f : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double r = f * sigma;
    const double closed = oracle::gaussian_potential_closed_form(r, sigma, 1.0, 1.0);
    const double shell = oracle::gaussian_potential_shell(r, sigma, 1.0, 1.0);
    worst = std::max(worst, std::abs(shell - closed) / std::abs(closed));
  }
  return item("potential-oracle-consistency", worst, 1e-10,
              "shell-theorem quadrature vs erf closed form");
}

VerifyItem free_spreading(const ScenarioConfig& c) {
  auto grid = build_grid(c.grid);
  PhysicalParams params = c.resolved_physics();
  params.newton_G = 0.0;
  ModeSet modes;
  for (int a = 0; a < 4; ++a) {
    const auto& p = c.packets[a];
    // at rest, so the packets stay where the boundary rule was checked
    modes.packets[a] = gaussian_packet(grid, p.center, p.width, {}, kModeLabels[a], c.support_sigmas);
  }
  Propagator probe(grid, params, c.schedule.dt, SourcingMode::kNoGravity, c.propagator_options());
  double dt = c.schedule.dt;
  if (probe.kinetic_phase_per_step() > c.phase_guard) {
    dt *= 0.9 * c.phase_guard / probe.kinetic_phase_per_step();
  }
  Propagator prop(grid, params, dt, SourcingMode::kNoGravity, c.propagator_options());
  const std::size_t steps = std::min<std::size_t>(c.schedule.n_steps, grid->dimension() == 3 ? 100 : 2000);
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t s = 1; s <= steps; ++s) {
    prop.step(modes);
    if (s % 10 != 0 && s != steps) continue;
    for (int a = 0; a < 4; ++a) {
      const auto obs = packet_observables(modes.packets[a]);
      if (boundary_clearance(obs, *grid) < c.support_sigmas) continue;
      const double ref = oracle::free_gaussian_width(c.packets[a].width, s * dt, params.hbar,
                                                     params.mass);
      worst = std::max(worst, std::abs(obs.rms_width / ref - 1.0));
      ++checked;
    }
  }
  if (checked == 0) return VerifyItem{"free-spreading", INFINITY, 1e-6, false, "no checkable records"};
  return item("free-spreading", worst, 1e-6,
              fmt::format("{} steps of dt={}, width vs analytic spreading", steps, dt));
}

VerifyItem lowdin_pair() {
  double worst = 0.0;
  for (double s : {-0.9, -0.5, 0.0, 0.1353352832366127, 0.5, 0.9, 0.99}) {
    Eigen::MatrixXcd g(2, 2);
    g << 1.0, s, s, 1.0;
    const Eigen::Matrix2d ref = oracle::lowdin_2x2(s);
    worst = std::max(worst, (lowdin_orthonormalize(g) - ref.cast<cplx>()).cwiseAbs().maxCoeff());
  }
  return item("lowdin-2x2", worst, 1e-12, "G^{-1/2} vs closed-form 2x2 eigendecomposition");
}

Eigen::VectorXcd random_unit(std::mt19937_64& rng, int k) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXcd v(k);
  for (int j = 0; j < k; ++j) v[j] = cplx(n(rng), n(rng));
  return v.normalized();
}

VerifyItem nboson_overlaps(std::mt19937_64& rng) {
  const auto basis2 = FockBasis::named("m", 2);
  Eigen::VectorXcd a(2), b(2);
  a << 1.0, 0.0;
  b << 0.9, std::sqrt(1.0 - 0.81);
  double worst = std::abs(inner_product(fock_power(a, 10, basis2), fock_power(b, 10, basis2)) -
                          nboson_overlap(0.9, 10));
  const auto basis3 = FockBasis::named("m", 3);
  for (int n = 1; n <= 6; ++n) {
    const Eigen::VectorXcd u = random_unit(rng, 3);
    const Eigen::VectorXcd v = random_unit(rng, 3);
    const oracle::DenseFock dense(3, n);
    const cplx brute = dense.fock_power(u, n).dot(dense.fock_power(v, n));
    worst = std::max(worst, std::abs(brute - nboson_overlap(u.dot(v), n)));
  }
  return item("nboson-overlap", worst, 1e-12, "<N;u|N;v> = <u|v>^N vs dense ladder, N <= 10");
}

VerifyItem fock_equivalence(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 2; k <= 3; ++k) {
    const auto basis = FockBasis::named("b", k);
    for (int n = 1; n <= 4; ++n) {
      const Eigen::VectorXcd cl = random_unit(rng, k);
      const Eigen::VectorXcd cr = random_unit(rng, k);
      const oracle::DenseFock dense(k, n);
      Eigen::VectorXcd ref = dense.fock_power(cl, n) + dense.fock_power(cr, n);
      ref.normalize();
      worst = std::max(worst, (dense.embed(pair_block_state(cl, cr, n, basis)) - ref).cwiseAbs().maxCoeff());
    }
  }
  return item("fock-equivalence", worst, 1e-12,
              "pair_block_state vs dense creation matrices, N <= 4");
}

VerifyItem branch_pipeline(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  double worst = 0.0;
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<Eigen::VectorXcd> m1, m2;
      for (int b = 0; b < 4; ++b) {
        m1.push_back(random_unit(rng, 3));
        m2.push_back(random_unit(rng, 3));
      }
      Eigen::Vector4cd amp;
      for (int b = 0; b < 4; ++b) amp[b] = std::polar(0.5, phase(rng));
      Eigen::MatrixXcd g1(4, 4), g2(4, 4);
      for (int b = 0; b < 4; ++b)
        for (int d = 0; d < 4; ++d) {
          g1(b, d) = m1[b].dot(m1[d]);
          g2(b, d) = m2[b].dot(m2[d]);
        }
      const double fast = branch_entanglement(g1, g2, n, amp).entropy_bits;
      const double dense = oracle::reduced_density_entropy(oracle::dense_branch_state(m1, m2, n, amp));
      worst = std::max(worst, std::abs(fast - dense));
    }
  }
  return item("branch-entanglement", worst, 1e-10,
              "branch-Gram entropy vs dense occupation-basis state, N = 1, 2");
}

}  // namespace

VerifyReport verify(const ScenarioConfig& config, const VerifyOptions& options) {
  validate(config);
  VerifyReport report;
  report.scenario = config.name;
  report.dimension = config.grid.dimension;
  std::mt19937_64 rng(20251017);
  report.items.push_back(guarded("gaussian-potential", 1e-6, [&] {
    return gaussian_potential(config, options.inject_kernel_fault);
  }));
  if (config.grid.dimension == 3) report.items.push_back(shell_quadrature(config));
  report.items.push_back(guarded("free-spreading", 1e-6, [&] { return free_spreading(config); }));
  report.items.push_back(lowdin_pair());
  report.items.push_back(nboson_overlaps(rng));
  report.items.push_back(fock_equivalence(rng));
  report.items.push_back(branch_pipeline(rng));
  return report;
}

std::string format_report(const VerifyReport& report) {
  std::string out = fmt::format("verify {} ({}D)\n", report.scenario, report.dimension);
  for (const auto& i : report.items) {
    out += fmt::format("  {:<30} {}  error {:.3e}  tol {:.1e}  {}\n", i.name,
                       i.passed ? "PASS" : "FAIL", i.error, i.tolerance, i.detail);
  }
  out += fmt::format("  {}\n", report.passed() ? "all items passed" : "FAILED");
  return out;
}

}  // namespace sng
