#pragma once

#include "ablmini/grid.hpp"

#include <cstdint>
#include <vector>

namespace ablmini {

// Cell-centered scalar with ghost layers, x-fastest storage. Interior
// indices run [0, n); ghosts extend to [-g, n+g).
class CellScalarField {
public:
  CellScalarField() = default;
  explicit CellScalarField(const GridSpec& grid)
      : CellScalarField(grid.nx, grid.ny, grid.nz, grid.ghost) {}
  CellScalarField(int nx, int ny, int nz, int ghost)
      : nx_(nx), ny_(ny), nz_(nz), g_(ghost),
        sx_(nx + 2 * ghost), sy_(ny + 2 * ghost),
        data_(std::size_t(nx + 2 * ghost) * (ny + 2 * ghost) * (nz + 2 * ghost),
              0.0) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  int ghost() const { return g_; }

  std::int64_t idx(int i, int j, int k) const {
    return (std::int64_t(k + g_) * sy_ + (j + g_)) * sx_ + (i + g_);
  }
  double& operator()(int i, int j, int k) { return data_[idx(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[idx(i, j, k)]; }

  // pointer to (0, j, k); valid for i in [-g, nx+g)
  double* row(int j, int k) { return data_.data() + idx(0, j, k); }
  const double* row(int j, int k) const { return data_.data() + idx(0, j, k); }

  std::int64_t row_stride() const { return sx_; }
  std::int64_t plane_stride() const { return std::int64_t(sx_) * sy_; }

  void fill(double v) { data_.assign(data_.size(), v); }
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

private:
  int nx_ = 0, ny_ = 0, nz_ = 0, g_ = 0;
  int sx_ = 0, sy_ = 0;
  std::vector<double> data_;
};

struct CellVectorField {
  CellScalarField x, y, z;

  CellVectorField() = default;
  explicit CellVectorField(const GridSpec& grid) : x(grid), y(grid), z(grid) {}
  CellScalarField& comp(int c) { return c == 0 ? x : (c == 1 ? y : z); }
  const CellScalarField& comp(int c) const {
    return c == 0 ? x : (c == 1 ? y : z);
  }
};

// Face-normal velocities on a MAC layout. With periodic x, uf(nx,j,k) is
// kept equal to uf(0,j,k) (shared face), likewise vf in y. wf at k=0 and
// k=nz is the wall face.
class FaceVelocitySet {
public:
  FaceVelocitySet() = default;
  explicit FaceVelocitySet(const GridSpec& grid)
      : nx_(grid.nx), ny_(grid.ny), nz_(grid.nz),
        uf_(std::size_t(grid.nx + 1) * grid.ny * grid.nz, 0.0),
        vf_(std::size_t(grid.nx) * (grid.ny + 1) * grid.nz, 0.0),
        wf_(std::size_t(grid.nx) * grid.ny * (grid.nz + 1), 0.0) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }

  double& u(int fi, int j, int k) {
    return uf_[(std::size_t(k) * ny_ + j) * (nx_ + 1) + fi];
  }
  double u(int fi, int j, int k) const {
    return uf_[(std::size_t(k) * ny_ + j) * (nx_ + 1) + fi];
  }
  double& v(int i, int fj, int k) {
    return vf_[(std::size_t(k) * (ny_ + 1) + fj) * nx_ + i];
  }
  double v(int i, int fj, int k) const {
    return vf_[(std::size_t(k) * (ny_ + 1) + fj) * nx_ + i];
  }
  double& w(int i, int j, int fk) {
    return wf_[(std::size_t(fk) * ny_ + j) * nx_ + i];
  }
  double w(int i, int j, int fk) const {
    return wf_[(std::size_t(fk) * ny_ + j) * nx_ + i];
  }

  // re-assert shared-face identity along periodic directions
  void sync_periodic(const GridSpec& grid);

private:
  int nx_ = 0, ny_ = 0, nz_ = 0;
  std::vector<double> uf_, vf_, wf_;
};

// Node-centered scalar, (nx+1) x (ny+1) x (nz+1), no ghosts. Along periodic
// directions the high edge duplicates the low edge.
class NodeScalarField {
public:
  NodeScalarField() = default;
  explicit NodeScalarField(const GridSpec& grid)
      : nx_(grid.nx), ny_(grid.ny), nz_(grid.nz),
        data_(std::size_t(grid.nx + 1) * (grid.ny + 1) * (grid.nz + 1), 0.0) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }

  double& operator()(int i, int j, int k) {
    return data_[(std::size_t(k) * (ny_ + 1) + j) * (nx_ + 1) + i];
  }
  double operator()(int i, int j, int k) const {
    return data_[(std::size_t(k) * (ny_ + 1) + j) * (nx_ + 1) + i];
  }

  void sync_periodic(const GridSpec& grid);
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

private:
  int nx_ = 0, ny_ = 0, nz_ = 0;
  std::vector<double> data_;
};

// Horizontally averaged profile: one value per z level plus the level
// heights.
struct Profile {
  std::vector<double> z;
  std::vector<double> value;

  int levels() const { return static_cast<int>(value.size()); }
};

} // namespace ablmini
