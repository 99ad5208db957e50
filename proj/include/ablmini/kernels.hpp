#pragma once

#include <cstdint>

// Hot inner-loop kernels. Every entry has a scalar reference implementation
// and (on x86-64 with AVX2/FMA) a vectorized variant. The active table is
// selected once at startup from CPU features; ABLMINI_KERNELS=scalar|avx2
// overrides the choice. Variants are equivalence-tested against the scalar
// reference in tests/test_kernels.cpp.
//
// Reductions (dot, sumsq, row_sum) use a fixed-order pairwise tree so that
// results are reproducible run to run; the tree shape differs between the
// scalar and AVX2 variants, so cross-variant agreement is to rounding, not
// bitwise.

namespace ablmini::kern {

struct Table {
  const char* name;

  // BLAS-1 style ops over contiguous spans
  void (*axpy)(double a, const double* x, double* y, int n);          // y += a*x
  void (*axpby)(double a, const double* x, double b, double* y, int n); // y = a*x + b*y
  void (*scale)(double a, double* x, int n);
  void (*copy)(const double* x, double* y, int n);
  double (*dot)(const double* x, const double* y, int n);
  double (*sumsq)(const double* x, int n);
  double (*row_sum)(const double* x, int n); // pairwise-tree sum

  // 7-point constant-coefficient stencil row:
  //   out[i] = cc*x[i] + cx*(x[i-1]+x[i+1]) + cy*(ym[i]+yp[i]) + czm*zm[i] + czp*zp[i]
  void (*cc7_row)(const double* x, const double* ym, const double* yp,
                  const double* zm, const double* zp,
                  double cc, double cx, double cy, double czm, double czp,
                  double* out, int n);

  // Variable-coefficient Helmholtz row, face diffusivity = arithmetic mean
  // of adjacent cells:
  //   out[i] = alpha*x[i]
  //          - ihx2*( bxp*(x[i+1]-x[i]) - bxm*(x[i]-x[i-1]) )
  //          - ihy2*( byp*(yp[i]-x[i]) - bym*(x[i]-ym[i]) )
  //          - ihz2*( szp*bzp*(zp[i]-x[i]) - szm*bzm*(x[i]-zm[i]) )
  //          + dz_extra*b[i]*x[i]
  // where bxp = 0.5*(b[i]+b[i+1]) etc. szm/szp gate wall faces (0 or 1) and
  // dz_extra carries the Dirichlet wall term 2/dz^2 when active on this row.
  void (*helm7_row)(const double* x, const double* ym, const double* yp,
                    const double* zm, const double* zp,
                    const double* b, const double* bym, const double* byp,
                    const double* bzm, const double* bzp,
                    double alpha, double ihx2, double ihy2, double ihz2,
                    double szm, double szp, double dz_extra,
                    double* out, int n);

  // One (dy,dz) leg of a 27-point nodal stencil row:
  //   out[i] += cm*r[i-1] + cc*r[i] + cp*r[i+1]
  void (*tri_row_acc)(const double* r, double cm, double cc, double cp,
                      double* out, int n);

  // Small dense contraction, fp64/fp32: out(rows x n) = A(rows x m) * x(m x n),
  // row-major, out overwritten. n is the fast (contiguous) index.
  void (*mxm_f64)(const double* A, int rows, int m, const double* x, int n, double* out);
  void (*mxm_f32)(const float* A, int rows, int m, const float* x, int n, float* out);
};

// Active table (CPU-feature selected, env-overridable). Stable for the
// lifetime of the process.
const Table& active();

// Lookup by name ("scalar", "avx2"); nullptr if the variant is not
// compiled in or not supported by this CPU.
const Table* find(const char* name);

// Fixed-order pairwise tree over a partial-sum array (base case 8).
double pairwise_combine(const double* s, int n);

} // namespace ablmini::kern
