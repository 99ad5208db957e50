// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; it is only entered through the dispatch table after a
// runtime CPU-feature check.

#include "ablmini/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define ABLMINI_HAVE_AVX2_TU 1
#include <immintrin.h>
#endif

namespace ablmini::kern {

#if ABLMINI_HAVE_AVX2_TU

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void axpy_v(double a, const double* x, double* y, int n) {
  const __m256d va = _mm256_set1_pd(a);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void axpby_v(double a, const double* x, double b, double* y, int n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void scale_v(double a, double* x, int n) {
  const __m256d va = _mm256_set1_pd(a);
  int i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void copy_v(const double* x, double* y, int n) {
  int i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_loadu_pd(x + i));
  for (; i < n; ++i) y[i] = x[i];
}

// 32-element block: 8 vector loads combined pairwise in-register.
double dot_block_v(const double* x, const double* y, int n) {
  if (n == 32) {
    __m256d s0 = _mm256_mul_pd(_mm256_loadu_pd(x), _mm256_loadu_pd(y));
    __m256d s1 = _mm256_mul_pd(_mm256_loadu_pd(x + 4), _mm256_loadu_pd(y + 4));
    __m256d s2 = _mm256_mul_pd(_mm256_loadu_pd(x + 8), _mm256_loadu_pd(y + 8));
    __m256d s3 = _mm256_mul_pd(_mm256_loadu_pd(x + 12), _mm256_loadu_pd(y + 12));
    __m256d s4 = _mm256_mul_pd(_mm256_loadu_pd(x + 16), _mm256_loadu_pd(y + 16));
    __m256d s5 = _mm256_mul_pd(_mm256_loadu_pd(x + 20), _mm256_loadu_pd(y + 20));
    __m256d s6 = _mm256_mul_pd(_mm256_loadu_pd(x + 24), _mm256_loadu_pd(y + 24));
    __m256d s7 = _mm256_mul_pd(_mm256_loadu_pd(x + 28), _mm256_loadu_pd(y + 28));
    s0 = _mm256_add_pd(s0, s1);
    s2 = _mm256_add_pd(s2, s3);
    s4 = _mm256_add_pd(s4, s5);
    s6 = _mm256_add_pd(s6, s7);
    return hsum(_mm256_add_pd(_mm256_add_pd(s0, s2), _mm256_add_pd(s4, s6)));
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double dot_v(const double* x, const double* y, int n) {
  if (n <= 32) return dot_block_v(x, y, n);
  const int half = (n / 64) * 32;
  const int h = half > 0 ? half : 32;
  return dot_v(x, y, h) + dot_v(x + h, y + h, n - h);
}

double sumsq_v(const double* x, int n) { return dot_v(x, x, n); }

double row_block_v(const double* x, int n) {
  if (n == 32) {
    __m256d s0 = _mm256_add_pd(_mm256_loadu_pd(x), _mm256_loadu_pd(x + 4));
    __m256d s1 = _mm256_add_pd(_mm256_loadu_pd(x + 8), _mm256_loadu_pd(x + 12));
    __m256d s2 = _mm256_add_pd(_mm256_loadu_pd(x + 16), _mm256_loadu_pd(x + 20));
    __m256d s3 = _mm256_add_pd(_mm256_loadu_pd(x + 24), _mm256_loadu_pd(x + 28));
    return hsum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double row_sum_v(const double* x, int n) {
  if (n <= 32) return row_block_v(x, n);
  const int half = (n / 64) * 32;
  const int h = half > 0 ? half : 32;
  return row_sum_v(x, h) + row_sum_v(x + h, n - h);
}

void cc7_row_v(const double* x, const double* ym, const double* yp,
               const double* zm, const double* zp,
               double cc, double cx, double cy, double czm, double czp,
               double* out, int n) {
  const __m256d vcc = _mm256_set1_pd(cc);
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  const __m256d vzm = _mm256_set1_pd(czm);
  const __m256d vzp = _mm256_set1_pd(czp);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_mul_pd(vcc, _mm256_loadu_pd(x + i));
    __m256d xs = _mm256_add_pd(_mm256_loadu_pd(x + i - 1), _mm256_loadu_pd(x + i + 1));
    v = _mm256_fmadd_pd(vcx, xs, v);
    __m256d ys = _mm256_add_pd(_mm256_loadu_pd(ym + i), _mm256_loadu_pd(yp + i));
    v = _mm256_fmadd_pd(vcy, ys, v);
    v = _mm256_fmadd_pd(vzm, _mm256_loadu_pd(zm + i), v);
    v = _mm256_fmadd_pd(vzp, _mm256_loadu_pd(zp + i), v);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) {
    out[i] = cc * x[i] + cx * (x[i - 1] + x[i + 1]) + cy * (ym[i] + yp[i]) +
             czm * zm[i] + czp * zp[i];
  }
}

void helm7_row_v(const double* x, const double* ym, const double* yp,
                 const double* zm, const double* zp,
                 const double* b, const double* bym, const double* byp,
                 const double* bzm, const double* bzp,
                 double alpha, double ihx2, double ihy2, double ihz2,
                 double szm, double szp, double dz_extra,
                 double* out, int n) {
  const __m256d vhalf = _mm256_set1_pd(0.5);
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vix = _mm256_set1_pd(ihx2);
  const __m256d viy = _mm256_set1_pd(ihy2);
  const __m256d vizm = _mm256_set1_pd(ihz2 * szm);
  const __m256d vizp = _mm256_set1_pd(ihz2 * szp);
  const __m256d vde = _mm256_set1_pd(dz_extra);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xi = _mm256_loadu_pd(x + i);
    const __m256d bi = _mm256_loadu_pd(b + i);
    const __m256d bxm = _mm256_mul_pd(vhalf, _mm256_add_pd(bi, _mm256_loadu_pd(b + i - 1)));
    const __m256d bxp = _mm256_mul_pd(vhalf, _mm256_add_pd(bi, _mm256_loadu_pd(b + i + 1)));
    const __m256d bymf = _mm256_mul_pd(vhalf, _mm256_add_pd(bi, _mm256_loadu_pd(bym + i)));
    const __m256d bypf = _mm256_mul_pd(vhalf, _mm256_add_pd(bi, _mm256_loadu_pd(byp + i)));
    const __m256d bzmf = _mm256_mul_pd(vhalf, _mm256_add_pd(bi, _mm256_loadu_pd(bzm + i)));
    const __m256d bzpf = _mm256_mul_pd(vhalf, _mm256_add_pd(bi, _mm256_loadu_pd(bzp + i)));
    __m256d v = _mm256_mul_pd(va, xi);
    v = _mm256_fmadd_pd(vde, _mm256_mul_pd(bi, xi), v);
    __m256d fx = _mm256_sub_pd(
        _mm256_mul_pd(bxp, _mm256_sub_pd(_mm256_loadu_pd(x + i + 1), xi)),
        _mm256_mul_pd(bxm, _mm256_sub_pd(xi, _mm256_loadu_pd(x + i - 1))));
    v = _mm256_fnmadd_pd(vix, fx, v);
    __m256d fy = _mm256_sub_pd(
        _mm256_mul_pd(bypf, _mm256_sub_pd(_mm256_loadu_pd(yp + i), xi)),
        _mm256_mul_pd(bymf, _mm256_sub_pd(xi, _mm256_loadu_pd(ym + i))));
    v = _mm256_fnmadd_pd(viy, fy, v);
    v = _mm256_fnmadd_pd(vizp, _mm256_mul_pd(bzpf, _mm256_sub_pd(_mm256_loadu_pd(zp + i), xi)), v);
    v = _mm256_fmadd_pd(vizm, _mm256_mul_pd(bzmf, _mm256_sub_pd(xi, _mm256_loadu_pd(zm + i))), v);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) {
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

void tri_row_acc_v(const double* r, double cm, double cc, double cp,
                   double* out, int n) {
  const __m256d vm = _mm256_set1_pd(cm);
  const __m256d vc = _mm256_set1_pd(cc);
  const __m256d vp = _mm256_set1_pd(cp);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(out + i);
    v = _mm256_fmadd_pd(vm, _mm256_loadu_pd(r + i - 1), v);
    v = _mm256_fmadd_pd(vc, _mm256_loadu_pd(r + i), v);
    v = _mm256_fmadd_pd(vp, _mm256_loadu_pd(r + i + 1), v);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i)
    out[i] += cm * r[i - 1] + cc * r[i] + cp * r[i + 1];
}

void mxm_f64_v(const double* A, int rows, int m, const double* x, int n,
               double* out) {
  for (int r = 0; r < rows; ++r) {
    double* o = out + static_cast<std::int64_t>(r) * n;
    int i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(o + i, _mm256_setzero_pd());
    for (; i < n; ++i) o[i] = 0.0;
    const double* arow = A + static_cast<std::int64_t>(r) * m;
    for (int a = 0; a < m; ++a) {
      const __m256d c = _mm256_set1_pd(arow[a]);
      const double* xr = x + static_cast<std::int64_t>(a) * n;
      int j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d v = _mm256_loadu_pd(o + j);
        v = _mm256_fmadd_pd(c, _mm256_loadu_pd(xr + j), v);
        _mm256_storeu_pd(o + j, v);
      }
      for (; j < n; ++j) o[j] += arow[a] * xr[j];
    }
  }
}

void mxm_f32_v(const float* A, int rows, int m, const float* x, int n,
               float* out) {
  for (int r = 0; r < rows; ++r) {
    float* o = out + static_cast<std::int64_t>(r) * n;
    int i = 0;
    for (; i + 8 <= n; i += 8) _mm256_storeu_ps(o + i, _mm256_setzero_ps());
    for (; i < n; ++i) o[i] = 0.0f;
    const float* arow = A + static_cast<std::int64_t>(r) * m;
    for (int a = 0; a < m; ++a) {
      const __m256 c = _mm256_set1_ps(arow[a]);
      const float* xr = x + static_cast<std::int64_t>(a) * n;
      int j = 0;
      for (; j + 8 <= n; j += 8) {
        __m256 v = _mm256_loadu_ps(o + j);
        v = _mm256_fmadd_ps(c, _mm256_loadu_ps(xr + j), v);
        _mm256_storeu_ps(o + j, v);
      }
      for (; j < n; ++j) o[j] += arow[a] * xr[j];
    }
  }
}

} // namespace

const Table* avx2_table() {
  static const Table t = {
      "avx2",  axpy_v,     axpby_v,    scale_v,      copy_v,
      dot_v,   sumsq_v,    row_sum_v,  cc7_row_v,    helm7_row_v,
      tri_row_acc_v, mxm_f64_v, mxm_f32_v,
  };
  return &t;
}

#else

const Table* avx2_table() { return nullptr; }

#endif

} // namespace ablmini::kern
