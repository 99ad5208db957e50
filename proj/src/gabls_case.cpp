#include "ablmini/gabls_case.hpp"

#include "ablmini/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace ablmini {

namespace {

// counter-based generator: splitmix64 of (seed, i, j, k) -> [0,1)
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double hash_unit(std::uint64_t seed, int i, int j, int k) {
  std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  h = splitmix64(h ^ (std::uint64_t(std::uint32_t(i)) |
                      (std::uint64_t(std::uint32_t(j)) << 32)));
  h = splitmix64(h ^ std::uint64_t(std::uint32_t(k)));
  return double(h >> 11) * 0x1.0p-53; // [0,1)
}

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

} // namespace

GridSpec CaseConfig::make_grid() const {
  return build_grid(nx, ny, nz, Lx(), Ly(), Lz(), true, true, 2);
}

void CaseConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
  if (nx < 4 || ny < 4 || nz < 4) fail("grid: cell counts must be >= 4");
  if (!is_pow2(mult_x) || !is_pow2(mult_y))
    fail("grid: domain multipliers must be powers of 2");
  if (mult_x < mult_y) fail("grid: mult_x must be >= mult_y");
  if (u_geo < 0) fail("physics: u_geo must be >= 0");
  if (theta0 <= 0) fail("physics: theta0 must be positive");
  if (reynolds <= 0) fail("physics: reynolds must be positive");
  if (lb <= 0) fail("physics: lb must be positive");
  if (prandtl <= 0) fail("physics: prandtl must be positive");
  if (sgs.cs <= 0) fail("sgs: cs must be positive");
  if (sgs.pr_t <= 0) fail("sgs: pr_t must be positive");
  if (most.z0 <= 0) fail("wall: z0 must be positive");
  if (most.kappa <= 0.3 || most.kappa >= 0.45)
    fail("wall: kappa must lie in (0.3, 0.45)");
  if (mac_tol <= 0 || mac_tol >= 1) fail("solver: mac_tol must be in (0,1)");
  if (nodal_tol <= 0 || nodal_tol >= 1)
    fail("solver: nodal_tol must be in (0,1)");
  if (helmholtz_tol <= 0 || helmholtz_tol >= 1)
    fail("solver: helmholtz_tol must be in (0,1)");
  if (cfl_max <= 0 || cfl_max > 2.0)
    fail("solver: cfl_max must be in (0, 2]");
  if (steps < 0) fail("run: steps must be >= 0");
  if (threads < 1) fail("run: threads must be >= 1");
}

State initialize(const CaseConfig& cfg, const GridSpec& grid,
                 WorkerPool& pool) {
  cfg.validate();
  State st(grid);
  const int nx = grid.nx, ny = grid.ny, nz = grid.nz;

  pool.for_each(0, nz, [&](int k) {
    const double z = grid.zc(k);
    const double base =
        z <= cfg.z_inversion ? 265.0
                             : 265.0 + cfg.lapse * (z - cfg.z_inversion);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        st.u.x(i, j, k) = cfg.u_geo;
        st.u.y(i, j, k) = cfg.v_geo;
        st.u.z(i, j, k) = 0.0;
        st.theta(i, j, k) = base;
      }
  });

  // seeded uniform perturbation in [-amp, amp] below perturb_z, recentred to
  // zero plane mean and rescaled so the amplitude bound still holds
  pool.for_each(0, nz, [&](int k) {
    if (grid.zc(k) > cfg.perturb_z || cfg.perturb_amp <= 0) return;
    std::vector<double> d(std::size_t(nx) * ny);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        d[std::size_t(j) * nx + i] =
            cfg.perturb_amp * (2.0 * hash_unit(cfg.seed, i, j, k) - 1.0);
    std::vector<double> rows(ny);
    for (int j = 0; j < ny; ++j)
      rows[j] = kern::pairwise_combine(&d[std::size_t(j) * nx], nx);
    const double mean =
        kern::pairwise_combine(rows.data(), ny) / (double(nx) * ny);
    double amax = 0.0;
    for (auto& v : d) {
      v -= mean;
      amax = std::max(amax, std::abs(v));
    }
    const double scale = amax > cfg.perturb_amp ? cfg.perturb_amp / amax : 1.0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        st.theta(i, j, k) += scale * d[std::size_t(j) * nx + i];
  });
  return st;
}

CaseBCs boundary_spec(const CaseConfig& cfg) {
  CaseBCs b;
  // tangential velocity: traction-consistent gradient at the bottom (value
  // refreshed from the surface state each step), stress-free at the top
  const BCSide::Type bot_t =
      cfg.wall_model_on ? BCSide::Gradient : BCSide::Even;
  b.u = BCSpec::periodic_xy({bot_t, 0.0}, {BCSide::Even, 0.0});
  b.v = BCSpec::periodic_xy({bot_t, 0.0}, {BCSide::Even, 0.0});
  // normal velocity: impenetrable walls
  b.w = BCSpec::periodic_xy({BCSide::OddValue, 0.0}, {BCSide::OddValue, 0.0});
  // temperature: similarity-gradient at the bottom, prescribed inversion
  // gradient at the top
  b.theta = BCSpec::periodic_xy({bot_t, 0.0}, {BCSide::Gradient, cfg.lapse});
  return b;
}

CaseConfig weak_scale_domain(const CaseConfig& base, long long target_n) {
  const long long base_n = 1LL * base.nz * base.nz * base.nz;
  if (target_n < base_n || target_n % base_n != 0)
    throw std::invalid_argument(
        "weak_scale_domain: target must be a multiple of the base nz^3");
  const long long m = target_n / base_n;
  if (!is_pow2(int(m)))
    throw std::invalid_argument(
        "weak_scale_domain: target multiplier must be a power of 2");
  int b = 0;
  for (long long v = m; v > 1; v >>= 1) ++b;
  CaseConfig cfg = base;
  cfg.mult_x = 1 << ((b + 1) / 2);
  cfg.mult_y = 1 << (b / 2);
  cfg.nx = base.nz * cfg.mult_x;
  cfg.ny = base.nz * cfg.mult_y;
  cfg.nz = base.nz;
  return cfg;
}

} // namespace ablmini
