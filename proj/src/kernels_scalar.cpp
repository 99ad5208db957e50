#include "ablmini/kernels.hpp"

namespace ablmini::kern {

double pairwise_combine(const double* s, int n) {
  if (n <= 8) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += s[i];
    return acc;
  }
  const int half = n / 2;
  return pairwise_combine(s, half) + pairwise_combine(s + half, n - half);
}

namespace {

void axpy_s(double a, const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpby_s(double a, const double* x, double b, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void scale_s(double a, double* x, int n) {
  for (int i = 0; i < n; ++i) x[i] *= a;
}

void copy_s(const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] = x[i];
}

double dot_block(const double* x, const double* y, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double dot_s(const double* x, const double* y, int n) {
  // pairwise over 32-element blocks
  if (n <= 32) return dot_block(x, y, n);
  const int half = (n / 64) * 32; // block-aligned midpoint
  const int h = half > 0 ? half : 32;
  return dot_s(x, y, h) + dot_s(x + h, y + h, n - h);
}

double sumsq_s(const double* x, int n) { return dot_s(x, x, n); }

double row_block(const double* x, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double row_sum_s(const double* x, int n) {
  if (n <= 8) return row_block(x, n);
  const int half = n / 2;
  return row_sum_s(x, half) + row_sum_s(x + half, n - half);
}

void cc7_row_s(const double* x, const double* ym, const double* yp,
               const double* zm, const double* zp,
               double cc, double cx, double cy, double czm, double czp,
               double* out, int n) {
  for (int i = 0; i < n; ++i) {
    out[i] = cc * x[i] + cx * (x[i - 1] + x[i + 1]) + cy * (ym[i] + yp[i]) +
             czm * zm[i] + czp * zp[i];
  }
}

void helm7_row_s(const double* x, const double* ym, const double* yp,
                 const double* zm, const double* zp,
                 const double* b, const double* bym, const double* byp,
                 const double* bzm, const double* bzp,
                 double alpha, double ihx2, double ihy2, double ihz2,
                 double szm, double szp, double dz_extra,
                 double* out, int n) {
  for (int i = 0; i < n; ++i) {
    const double bi = b[i];
    const double bxm = 0.5 * (bi + b[i - 1]);
    const double bxp = 0.5 * (bi + b[i + 1]);
    const double bym_f = 0.5 * (bi + bym[i]);
    const double byp_f = 0.5 * (bi + byp[i]);
    const double bzm_f = 0.5 * (bi + bzm[i]);
    const double bzp_f = 0.5 * (bi + bzp[i]);
    double v = alpha * x[i] + dz_extra * bi * x[i];
    v -= ihx2 * (bxp * (x[i + 1] - x[i]) - bxm * (x[i] - x[i - 1]));
    v -= ihy2 * (byp_f * (yp[i] - x[i]) - bym_f * (x[i] - ym[i]));
    v -= ihz2 * (szp * bzp_f * (zp[i] - x[i]) - szm * bzm_f * (x[i] - zm[i]));
    out[i] = v;
  }
}

void tri_row_acc_s(const double* r, double cm, double cc, double cp,
                   double* out, int n) {
  for (int i = 0; i < n; ++i)
    out[i] += cm * r[i - 1] + cc * r[i] + cp * r[i + 1];
}

void mxm_f64_s(const double* A, int rows, int m, const double* x, int n,
               double* out) {
  for (int r = 0; r < rows; ++r) {
    double* o = out + static_cast<std::int64_t>(r) * n;
    for (int i = 0; i < n; ++i) o[i] = 0.0;
    const double* arow = A + static_cast<std::int64_t>(r) * m;
    for (int a = 0; a < m; ++a) {
      const double c = arow[a];
      const double* xr = x + static_cast<std::int64_t>(a) * n;
      for (int i = 0; i < n; ++i) o[i] += c * xr[i];
    }
  }
}

void mxm_f32_s(const float* A, int rows, int m, const float* x, int n,
               float* out) {
  for (int r = 0; r < rows; ++r) {
    float* o = out + static_cast<std::int64_t>(r) * n;
    for (int i = 0; i < n; ++i) o[i] = 0.0f;
    const float* arow = A + static_cast<std::int64_t>(r) * m;
    for (int a = 0; a < m; ++a) {
      const float c = arow[a];
      const float* xr = x + static_cast<std::int64_t>(a) * n;
      for (int i = 0; i < n; ++i) o[i] += c * xr[i];
    }
  }
}

} // namespace

const Table& scalar_table() {
  static const Table t = {
      "scalar", axpy_s,     axpby_s,    scale_s,      copy_s,
      dot_s,    sumsq_s,    row_sum_s,  cc7_row_s,    helm7_row_s,
      tri_row_acc_s, mxm_f64_s, mxm_f32_s,
  };
  return t;
}

} // namespace ablmini::kern
