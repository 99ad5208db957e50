#pragma once

#include <cmath>
#include <stdexcept>

namespace ablmini {

// Equispaced structured grid. Cell centers sit at (i+1/2)*dx; z is never
// periodic (rigid lid / wall).
struct GridSpec {
  int nx = 0, ny = 0, nz = 0;
  double Lx = 0, Ly = 0, Lz = 0;
  double dx = 0, dy = 0, dz = 0;
  int ghost = 2;
  bool periodic_x = true;
  bool periodic_y = true;

  double avg_dx() const {
    return std::cbrt(Lx * Ly * Lz) / std::cbrt(double(nx) * ny * nz);
  }
  double xc(int i) const { return (i + 0.5) * dx; }
  double yc(int j) const { return (j + 0.5) * dy; }
  double zc(int k) const { return (k + 0.5) * dz; }
  long long cells() const { return 1LL * nx * ny * nz; }
};

GridSpec build_grid(int nx, int ny, int nz, double Lx, double Ly, double Lz,
                    bool periodic_x = true, bool periodic_y = true,
                    int ghost = 2);

// Ghost extension policy for one side of one axis.
struct BCSide {
  enum Type {
    Periodic,  // wrap
    Even,      // zero-gradient mirror
    OddValue,  // odd extension about a boundary value (Dirichlet)
    Gradient,  // prescribed-gradient extension
  };
  Type type = Periodic;
  double value = 0.0; // boundary value (OddValue) or gradient (Gradient)
};

struct BCSpec {
  BCSide xlo, xhi, ylo, yhi, zlo, zhi;

  static BCSpec periodic_xy(BCSide bottom, BCSide top) {
    BCSpec b;
    b.xlo = b.xhi = b.ylo = b.yhi = {BCSide::Periodic, 0.0};
    b.zlo = bottom;
    b.zhi = top;
    return b;
  }
};

} // namespace ablmini
