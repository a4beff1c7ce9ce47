#include "hubmix/dense_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hubmix {
namespace dense_detail {

namespace {

inline double sign_with(double magnitude, double sign_src) {
  return sign_src >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

bool is_symmetric(const std::vector<double>& a, i64 n, double tol) {
  for (i64 i = 0; i < n; ++i) {
    for (i64 j = 0; j < i; ++j) {
      if (std::abs(a[static_cast<std::size_t>(i * n + j)] -
                   a[static_cast<std::size_t>(j * n + i)]) > tol) {
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Balancing: permutation phase isolates eigenvalues reachable by row/column
// exchanges, scaling phase equalizes row/column norms with exact powers of 2.
// ---------------------------------------------------------------------------

BalanceRange balance_in_place(std::vector<double>& a, i64 n) {
  auto at = [&](i64 i, i64 j) -> double& {
    return a[static_cast<std::size_t>(i * n + j)];
  };
  i64 lo = 0, hi = n - 1;

  auto exchange = [&](i64 j, i64 m) {
    if (j == m) return;
    for (i64 i = 0; i <= hi; ++i) std::swap(at(i, j), at(i, m));
    for (i64 i = lo; i < n; ++i) std::swap(at(j, i), at(m, i));
  };

  // Rows whose off-diagonal part vanishes are pushed to the bottom.
  for (bool moved = true; moved && hi >= lo;) {
    moved = false;
    for (i64 j = hi; j >= lo; --j) {
      bool zero_row = true;
      for (i64 i = lo; i <= hi && zero_row; ++i) {
        if (i != j && at(j, i) != 0.0) zero_row = false;
      }
      if (zero_row) {
        exchange(j, hi);
        --hi;
        moved = true;
        break;
      }
    }
  }
  // Columns whose off-diagonal part vanishes are pushed to the top.
  for (bool moved = true; moved && lo <= hi;) {
    moved = false;
    for (i64 j = lo; j <= hi; ++j) {
      bool zero_col = true;
      for (i64 i = lo; i <= hi && zero_col; ++i) {
        if (i != j && at(i, j) != 0.0) zero_col = false;
      }
      if (zero_col) {
        exchange(j, lo);
        ++lo;
        moved = true;
        break;
      }
    }
  }

  // Iterative radix-2 scaling inside the active window.
  constexpr double radix = 2.0;
  constexpr double radix_sq = radix * radix;
  for (bool converged = false; !converged;) {
    converged = true;
    for (i64 i = lo; i <= hi; ++i) {
      double c = 0.0, r = 0.0;
      for (i64 j = lo; j <= hi; ++j) {
        if (j == i) continue;
        c += std::abs(at(j, i));
        r += std::abs(at(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix_sq;
      }
      g = r * radix;
      while (c >= g) {
        f /= radix;
        c /= radix_sq;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        const double ginv = 1.0 / f;
        for (i64 j = lo; j < n; ++j) at(i, j) *= ginv;
        for (i64 j = 0; j <= hi; ++j) at(j, i) *= f;
      }
    }
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Householder reduction to upper Hessenberg form on the active window.
// Cache-friendly formulation: both transforms run along contiguous rows.
// ---------------------------------------------------------------------------

void hessenberg_in_place(std::vector<double>& a, i64 n, i64 lo, i64 hi) {
  auto at = [&](i64 i, i64 j) -> double& {
    return a[static_cast<std::size_t>(i * n + j)];
  };
  std::vector<double> u(static_cast<std::size_t>(n), 0.0);
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);

  for (i64 m = lo + 1; m + 1 <= hi; ++m) {
    double scale = 0.0;
    for (i64 i = m; i <= hi; ++i) scale += std::abs(at(i, m - 1));
    if (scale == 0.0) continue;

    double h = 0.0;
    for (i64 i = m; i <= hi; ++i) {
      u[static_cast<std::size_t>(i)] = at(i, m - 1) / scale;
      h += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    }
    const double g = -sign_with(std::sqrt(h), u[static_cast<std::size_t>(m)]);
    h -= u[static_cast<std::size_t>(m)] * g;
    u[static_cast<std::size_t>(m)] -= g;

    // Left: A -= (u/h) (u^T A) over rows m..hi, columns m-1..n-1.
    std::fill(w.begin() + (m - 1), w.end(), 0.0);
    for (i64 i = m; i <= hi; ++i) {
      const double ui = u[static_cast<std::size_t>(i)];
      const double* __restrict row = &at(i, 0);
      double* __restrict wp = w.data();
#pragma omp simd
      for (i64 j = m - 1; j < n; ++j) wp[j] += ui * row[j];
    }
    for (i64 i = m; i <= hi; ++i) {
      const double f = u[static_cast<std::size_t>(i)] / h;
      double* __restrict row = &at(i, 0);
      const double* __restrict wp = w.data();
#pragma omp simd
      for (i64 j = m - 1; j < n; ++j) row[j] -= f * wp[j];
    }

    // Right: A -= (A u) (u^T/h) over all rows 0..hi, columns m..hi.
    for (i64 i = 0; i <= hi; ++i) {
      double* __restrict row = &at(i, 0);
      const double* __restrict up = u.data();
      double dot = 0.0;
#pragma omp simd reduction(+ : dot)
      for (i64 j = m; j <= hi; ++j) dot += row[j] * up[j];
      const double f = dot / h;
#pragma omp simd
      for (i64 j = m; j <= hi; ++j) row[j] -= f * up[j];
    }

    at(m, m - 1) = scale * g;
    for (i64 i = m + 1; i <= hi; ++i) at(i, m - 1) = 0.0;
  }
}

// ---------------------------------------------------------------------------
// Francis double-shift QR on a Hessenberg matrix, eigenvalues only.
// ---------------------------------------------------------------------------

std::vector<Complex> hessenberg_qr_eigenvalues(std::vector<double>& a, i64 n,
                                               i64 lo, i64 hi) {
  auto at = [&](i64 i, i64 j) -> double& {
    return a[static_cast<std::size_t>(i * n + j)];
  };
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n));
  for (i64 i = 0; i < lo; ++i) out.emplace_back(at(i, i), 0.0);
  for (i64 i = hi + 1; i < n; ++i) out.emplace_back(at(i, i), 0.0);

  double anorm = 0.0;
  for (i64 i = lo; i <= hi; ++i) {
    for (i64 j = std::max(i - 1, lo); j <= hi; ++j) anorm += std::abs(at(i, j));
  }
  if (anorm == 0.0) anorm = 1.0;

  i64 remaining_steps = 30 * std::max<i64>(n, 1);
  i64 en = hi;
  double t = 0.0;

  while (en >= lo) {
    int its = 0;
    for (;;) {
      // Look for a negligible subdiagonal element.
      i64 l = en;
      for (; l > lo; --l) {
        double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(at(l, l - 1)) + s == s) {
          at(l, l - 1) = 0.0;
          break;
        }
      }

      double x = at(en, en);
      if (l == en) {  // one eigenvalue isolated
        out.emplace_back(x + t, 0.0);
        en -= 1;
        break;
      }
      double y = at(en - 1, en - 1);
      double w = at(en, en - 1) * at(en - 1, en);
      if (l == en - 1) {  // a 2x2 block splits off
        double p = 0.5 * (y - x);
        const double q = p * p + w;
        double z = std::sqrt(std::abs(q));
        x += t;
        if (q >= 0.0) {
          z = p + sign_with(z, p);
          const double r1 = x + z;
          const double r2 = (z != 0.0) ? x - w / z : r1;
          out.emplace_back(r1, 0.0);
          out.emplace_back(r2, 0.0);
        } else {
          out.emplace_back(x + p, z);
          out.emplace_back(x + p, -z);
        }
        en -= 2;
        break;
      }

      if (remaining_steps-- <= 0) {
        throw EigenSolverError("hessenberg_qr: no convergence after 30n sweeps", en);
      }
      if (its == 10 || its == 20) {  // exceptional shift
        t += x;
        for (i64 i = lo; i <= en; ++i) at(i, i) -= x;
        const double s = std::abs(at(en, en - 1)) + std::abs(at(en - 1, en - 2));
        y = x = 0.75 * s;
        w = -0.4375 * s * s;
      }
      ++its;

      // Find two consecutive small subdiagonals starting the implicit bulge.
      i64 m = en - 2;
      double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
      for (; m >= l; --m) {
        z = at(m, m);
        r = x - z;
        double s = y - z;
        p = (r * s - w) / at(m + 1, m) + at(m, m + 1);
        q = at(m + 1, m + 1) - z - r - s;
        r = at(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
        const double v =
            std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) +
                           std::abs(at(m + 1, m + 1)));
        if (u + v == v) break;
      }
      for (i64 i = m + 2; i <= en; ++i) {
        at(i, i - 2) = 0.0;
        if (i != m + 2) at(i, i - 3) = 0.0;
      }

      // Double QR sweep over rows m..en.
      for (i64 k = m; k <= en - 1; ++k) {
        const bool notlast = (k != en - 1);
        if (k != m) {
          p = at(k, k - 1);
          q = at(k + 1, k - 1);
          r = notlast ? at(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x != 0.0) {
            p /= x;
            q /= x;
            r /= x;
          }
        }
        const double s = sign_with(std::sqrt(p * p + q * q + r * r), p);
        if (s == 0.0) continue;
        if (k == m) {
          if (l != m) at(k, k - 1) = -at(k, k - 1);
        } else {
          at(k, k - 1) = -s * x;
        }
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;

        for (i64 j = k; j <= en; ++j) {  // row modification
          double pp = at(k, j) + q * at(k + 1, j);
          if (notlast) {
            pp += r * at(k + 2, j);
            at(k + 2, j) -= pp * z;
          }
          at(k + 1, j) -= pp * y;
          at(k, j) -= pp * x;
        }
        const i64 mmin = std::min(en, k + 3);
        for (i64 i = l; i <= mmin; ++i) {  // column modification
          double pp = x * at(i, k) + y * at(i, k + 1);
          if (notlast) {
            pp += z * at(i, k + 2);
            at(i, k + 2) -= pp * r;
          }
          at(i, k + 1) -= pp * q;
          at(i, k) -= pp;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symmetric path. Blocked Householder tridiagonalization (panel + rank-2k
// update) followed by implicit-shift QL iteration on the tridiagonal.
// ---------------------------------------------------------------------------

namespace {

// y = A x with A the m x m symmetric matrix stored in the lower triangle of
// a row-major buffer with leading dimension ld.
void symv_lower(const double* __restrict a, i64 ld, i64 m,
                const double* __restrict x, double* __restrict y) {
  for (i64 i = 0; i < m; ++i) y[i] = 0.0;
  for (i64 i = 0; i < m; ++i) {
    const double* __restrict row = a + i * ld;
    const double xi = x[i];
    double acc = 0.0;
    // single pass so each row streams from memory once
#pragma omp simd reduction(+ : acc)
    for (i64 j = 0; j < i; ++j) {
      acc += row[j] * x[j];
      y[j] += row[j] * xi;
    }
    y[i] += acc + row[i] * xi;
  }
}

struct Householder {
  double beta = 0.0;  // new subdiagonal value
  double tau = 0.0;
};

// Reflector for x (length len): on return v holds the direction with v[0]=1.
Householder make_householder(double* v, i64 len) {
  Householder h;
  if (len <= 0) return h;
  const double alpha = v[0];
  double xnorm_sq = 0.0;
  for (i64 i = 1; i < len; ++i) xnorm_sq += v[i] * v[i];
  if (xnorm_sq == 0.0) {
    h.beta = alpha;
    h.tau = 0.0;
    v[0] = 1.0;
    return h;
  }
  const double beta = -sign_with(std::hypot(alpha, std::sqrt(xnorm_sq)), alpha);
  h.tau = (beta - alpha) / beta;
  const double inv = 1.0 / (alpha - beta);
  for (i64 i = 1; i < len; ++i) v[i] *= inv;
  v[0] = 1.0;
  h.beta = beta;
  return h;
}

// Unblocked tridiagonalization of the trailing m x m block at `a` (leading
// dimension ld, lower storage). Writes m diagonal and m-1 subdiagonal values.
void tridiagonalize_unblocked(double* a, i64 ld, i64 m, double* d, double* e) {
  std::vector<double> v(static_cast<std::size_t>(m));
  std::vector<double> w(static_cast<std::size_t>(m));
  for (i64 i = 0; i + 2 <= m; ++i) {
    const i64 len = m - i - 1;
    d[i] = a[i * ld + i];
    // copy column i below the diagonal
    for (i64 r = 0; r < len; ++r) v[static_cast<std::size_t>(r)] = a[(i + 1 + r) * ld + i];
    Householder h = make_householder(v.data(), len);
    e[i] = h.beta;
    if (h.tau == 0.0) continue;
    double* sub = a + (i + 1) * ld + (i + 1);
    symv_lower(sub, ld, len, v.data(), w.data());
    double vw = 0.0;
    for (i64 r = 0; r < len; ++r) {
      w[static_cast<std::size_t>(r)] *= h.tau;
      vw += w[static_cast<std::size_t>(r)] * v[static_cast<std::size_t>(r)];
    }
    const double corr = -0.5 * h.tau * vw;
    for (i64 r = 0; r < len; ++r) w[static_cast<std::size_t>(r)] += corr * v[static_cast<std::size_t>(r)];
    // rank-2 update of the trailing lower triangle
    for (i64 r = 0; r < len; ++r) {
      double* row = sub + r * ld;
      const double vr = v[static_cast<std::size_t>(r)];
      const double wr = w[static_cast<std::size_t>(r)];
      for (i64 c = 0; c <= r; ++c) {
        row[c] -= vr * w[static_cast<std::size_t>(c)] + wr * v[static_cast<std::size_t>(c)];
      }
    }
  }
  if (m >= 2) {
    d[m - 2] = a[(m - 2) * ld + (m - 2)];
    e[m - 2] = a[(m - 1) * ld + (m - 2)];
  }
  if (m >= 1) d[m - 1] = a[(m - 1) * ld + (m - 1)];
}

// ---------------------------------------------------------------------------
// Two-stage reduction for large symmetric matrices. Stage one compresses the
// full matrix to semibandwidth kBand with blocked two-sided updates whose
// kernels stream the triangle once per panel (the one-stage algorithm reads
// it once per column, which is hopeless on low-bandwidth memory). Stage two
// chases the band down to tridiagonal with Givens rotations.
// ---------------------------------------------------------------------------

constexpr i64 kBand = 32;

// Householder QR of a column-major m x b panel; tau and the T factor of the
// compact WY representation (Q = I - V T V^T) are accumulated on the fly.
void panel_qr(std::vector<double>& col_major, i64 m, i64 b,
              std::vector<double>& tau, std::vector<double>& tmat) {
  auto pc = [&](i64 c) { return col_major.data() + c * m; };
  tau.assign(static_cast<std::size_t>(b), 0.0);
  tmat.assign(static_cast<std::size_t>(b * b), 0.0);
  for (i64 j = 0; j < b; ++j) {
    double* cj = pc(j);
    const i64 len = m - j;
    Householder h = make_householder(cj + j, len);
    tau[static_cast<std::size_t>(j)] = h.tau;
    const double beta = h.beta;
    if (h.tau != 0.0) {
      for (i64 c = j + 1; c < b; ++c) {
        double* cc = pc(c);
        double dot = 0.0;
#pragma omp simd reduction(+ : dot)
        for (i64 r = j; r < m; ++r) dot += cj[r] * cc[r];
        const double f = h.tau * dot;
#pragma omp simd
        for (i64 r = j; r < m; ++r) cc[r] -= f * cj[r];
      }
    }
    // T update: T(0:j, j) = -tau_j * T(0:j, 0:j) * (V(:, 0:j)^T v_j)
    if (j > 0) {
      std::vector<double> z(static_cast<std::size_t>(j), 0.0);
      for (i64 c = 0; c < j; ++c) {
        const double* cc = pc(c);
        double dot = cc[j];  // v_c has implicit 1 at row c, v_j is 0 there
#pragma omp simd reduction(+ : dot)
        for (i64 r = j + 1; r < m; ++r) dot += cc[r] * cj[r];
        z[static_cast<std::size_t>(c)] = dot;
      }
      for (i64 r = 0; r < j; ++r) {
        double acc = 0.0;
        for (i64 c = r; c < j; ++c) {
          acc += tmat[static_cast<std::size_t>(r * b + c)] * z[static_cast<std::size_t>(c)];
        }
        tmat[static_cast<std::size_t>(r * b + j)] =
            -tau[static_cast<std::size_t>(j)] * acc;
      }
    }
    tmat[static_cast<std::size_t>(j * b + j)] = tau[static_cast<std::size_t>(j)];
    cj[j] = beta;  // R diagonal; v_j below keeps the reflector
  }
}

// U = A V for the symmetric trailing block (lower storage, leading dim ld).
// V and U are row-major m x b; the triangle streams through memory once.
void symm_multi(const double* __restrict a, i64 ld, i64 m,
                const double* __restrict v, double* __restrict u, i64 b) {
  std::fill(u, u + m * b, 0.0);
  for (i64 i = 0; i < m; ++i) {
    const double* __restrict row = a + i * ld;
    const double* __restrict vi = v + i * b;
    double* __restrict ui = u + i * b;
    for (i64 j = 0; j < i; ++j) {
      const double aij = row[j];
      const double* __restrict vj = v + j * b;
      double* __restrict uj = u + j * b;
#pragma omp simd
      for (i64 t = 0; t < kBand; ++t) {
        ui[t] += aij * vj[t];
        uj[t] += aij * vi[t];
      }
    }
    const double aii = row[i];
#pragma omp simd
    for (i64 t = 0; t < kBand; ++t) ui[t] += aii * vi[t];
  }
}

// Stage one: reduce the full symmetric matrix (lower, leading dim n) to
// semibandwidth kBand. Panels of width kBand are QR-factored below the band
// and folded back with W = U T - V (T^T S T)/2, A -= V W^T + W V^T.
void reduce_to_band(double* a, i64 n) {
  const i64 b = kBand;
  std::vector<double> panel, tau, tmat, vrows, urows, wrows, s, m1, m2;
  for (i64 j = 0; j + b < n; j += b) {
    const i64 mp = n - j - b;  // rows below the band in this panel
    const i64 bp = std::min(b, mp);
    if (bp <= 0) break;
    // copy panel A[j+b : n, j : j+bp] to column-major scratch
    panel.assign(static_cast<std::size_t>(mp * bp), 0.0);
    for (i64 r = 0; r < mp; ++r) {
      const double* row = a + (j + b + r) * n + j;
      for (i64 c = 0; c < bp; ++c) {
        panel[static_cast<std::size_t>(c * mp + r)] = row[c];
      }
    }
    panel_qr(panel, mp, bp, tau, tmat);
    // R (staircase) goes back; zeros below it
    for (i64 r = 0; r < mp; ++r) {
      double* row = a + (j + b + r) * n + j;
      for (i64 c = 0; c < bp; ++c) {
        row[c] = (r <= c) ? panel[static_cast<std::size_t>(c * mp + r)] : 0.0;
      }
    }
    if (mp <= 1) break;
    // V in row-major with unit diagonal
    vrows.assign(static_cast<std::size_t>(mp * b), 0.0);
    for (i64 r = 0; r < mp; ++r) {
      for (i64 c = 0; c < bp; ++c) {
        if (r > c) {
          vrows[static_cast<std::size_t>(r * b + c)] =
              panel[static_cast<std::size_t>(c * mp + r)];
        } else if (r == c) {
          vrows[static_cast<std::size_t>(r * b + c)] = 1.0;
        }
      }
    }
    double* trail = a + (j + b) * n + (j + b);

    urows.assign(static_cast<std::size_t>(mp * b), 0.0);
    symm_multi(trail, n, mp, vrows.data(), urows.data(), b);

    // S = V^T U  (bp x bp, symmetric)
    s.assign(static_cast<std::size_t>(b * b), 0.0);
    for (i64 r = 0; r < mp; ++r) {
      const double* vr = vrows.data() + r * b;
      const double* ur = urows.data() + r * b;
      for (i64 p = 0; p < bp; ++p) {
        const double vp = vr[p];
        if (vp == 0.0) continue;
        double* srow = s.data() + p * b;
#pragma omp simd
        for (i64 q = 0; q < kBand; ++q) srow[q] += vp * ur[q];
      }
    }
    // M2 = T^T S T
    m1.assign(static_cast<std::size_t>(b * b), 0.0);
    for (i64 r = 0; r < bp; ++r) {  // M1 = T^T S
      for (i64 c = 0; c < bp; ++c) {
        double acc = 0.0;
        for (i64 t = 0; t <= r; ++t) {
          acc += tmat[static_cast<std::size_t>(t * bp + r)] *
                 s[static_cast<std::size_t>(t * b + c)];
        }
        m1[static_cast<std::size_t>(r * b + c)] = acc;
      }
    }
    m2.assign(static_cast<std::size_t>(b * b), 0.0);
    for (i64 r = 0; r < bp; ++r) {  // M2 = M1 T
      for (i64 c = 0; c < bp; ++c) {
        double acc = 0.0;
        for (i64 t = 0; t <= c; ++t) {
          acc += m1[static_cast<std::size_t>(r * b + t)] *
                 tmat[static_cast<std::size_t>(t * bp + c)];
        }
        m2[static_cast<std::size_t>(r * b + c)] = acc;
      }
    }
    // W = U T - (1/2) V M2, rowwise
    wrows.assign(static_cast<std::size_t>(mp * b), 0.0);
    for (i64 r = 0; r < mp; ++r) {
      const double* ur = urows.data() + r * b;
      const double* vr = vrows.data() + r * b;
      double* wr = wrows.data() + r * b;
      for (i64 c = 0; c < bp; ++c) {
        double acc = 0.0;
        for (i64 t = 0; t <= c; ++t) {
          acc += ur[t] * tmat[static_cast<std::size_t>(t * bp + c)];
        }
        double acc2 = 0.0;
        for (i64 t = 0; t < bp; ++t) {
          acc2 += vr[t] * m2[static_cast<std::size_t>(t * b + c)];
        }
        wr[c] = acc - 0.5 * acc2;
      }
    }
    // trailing symmetric rank-2b update
    for (i64 r = 0; r < mp; ++r) {
      double* __restrict row = trail + r * n;
      const double* __restrict vr = vrows.data() + r * b;
      const double* __restrict wr = wrows.data() + r * b;
      for (i64 c = 0; c <= r; ++c) {
        const double* __restrict vc = vrows.data() + c * b;
        const double* __restrict wc = wrows.data() + c * b;
        double acc0 = 0.0, acc1 = 0.0;
#pragma omp simd reduction(+ : acc0, acc1)
        for (i64 t = 0; t < kBand; ++t) {
          acc0 += vr[t] * wc[t];
          acc1 += wr[t] * vc[t];
        }
        row[c] -= acc0 + acc1;
      }
    }
  }
}

// Stage two: Givens reduction of a symmetric band matrix (lower band storage
// entry(d, c) = A[c+d][c]) to tridiagonal, one outer diagonal at a time with
// standard bulge chasing.
void band_to_tridiagonal(std::vector<double>& band, i64 n, i64 width,
                         std::vector<double>& d, std::vector<double>& e) {
  auto entry = [&](i64 dd, i64 c) -> double& {
    return band[static_cast<std::size_t>(dd * n + c)];
  };

  // Two-sided rotation in the (p-1, p) plane. The pair at column skip_col is
  // assumed already written by the caller; bulge_in sits at A[p][p-1-w] and
  // is annihilated by the t0 branch; the returned bulge lives at A[p+w][p-1].
  auto apply = [&](i64 p, double cs, double sn, i64 w, double bulge_in,
                   i64 skip_col) {
    const i64 t0 = p - 1 - w;
    if (t0 >= 0 && t0 != skip_col) {
      const double x = entry(w, t0);
      entry(w, t0) = cs * x + sn * bulge_in;  // rotation chosen so the
                                              // partner entry vanishes
    }
    for (i64 t = std::max<i64>(0, p - w); t <= p - 2; ++t) {
      if (t == skip_col) continue;
      const double x = entry(p - 1 - t, t);
      const double y = entry(p - t, t);
      entry(p - 1 - t, t) = cs * x + sn * y;
      entry(p - t, t) = -sn * x + cs * y;
    }
    {
      const double app = entry(0, p - 1);
      const double aqq = entry(0, p);
      const double apq = entry(1, p - 1);
      entry(0, p - 1) = cs * cs * app + 2.0 * cs * sn * apq + sn * sn * aqq;
      entry(0, p) = sn * sn * app - 2.0 * cs * sn * apq + cs * cs * aqq;
      entry(1, p - 1) = cs * sn * (aqq - app) + (cs * cs - sn * sn) * apq;
    }
    const i64 hi = std::min<i64>(n - 1, p - 1 + w);
    for (i64 t = p + 1; t <= hi; ++t) {
      const double x = entry(t - p + 1, p - 1);
      const double y = entry(t - p, p);
      entry(t - p + 1, p - 1) = cs * x + sn * y;
      entry(t - p, p) = -sn * x + cs * y;
    }
    double bulge_out = 0.0;
    if (p + w <= n - 1) {
      const double y = entry(w, p);
      bulge_out = sn * y;
      entry(w, p) = cs * y;
    }
    return bulge_out;
  };

  for (i64 w = width; w >= 2; --w) {
    for (i64 c = 0; c + w < n; ++c) {
      const double y = entry(w, c);
      if (y == 0.0) continue;
      const double x = entry(w - 1, c);
      double r = std::hypot(x, y);
      double cs = x / r, sn = y / r;
      entry(w - 1, c) = r;
      entry(w, c) = 0.0;
      i64 p = c + w;
      double bulge = apply(p, cs, sn, w, 0.0, c);
      while (bulge != 0.0 && p + w <= n - 1) {
        const i64 c2 = p - 1;  // bulge column; eliminated via the t0 branch
        const i64 p2 = p + w;
        const double xx = entry(w, c2);
        r = std::hypot(xx, bulge);
        if (r == 0.0) break;
        cs = xx / r;
        sn = bulge / r;
        bulge = apply(p2, cs, sn, w, bulge, -1);
        p = p2;
      }
    }
  }
  d.assign(static_cast<std::size_t>(n), 0.0);
  e.assign(static_cast<std::size_t>(n), 0.0);
  for (i64 i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = entry(0, i);
  for (i64 i = 0; i + 1 < n; ++i) e[static_cast<std::size_t>(i)] = entry(1, i);
}

// Blocked driver: dlatrd-style panels with deferred rank-2nb updates.
void tridiagonalize(std::vector<double>& buf, i64 n, std::vector<double>& d,
                    std::vector<double>& e) {
  d.assign(static_cast<std::size_t>(n), 0.0);
  e.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 0) return;
  double* a = buf.data();
  constexpr i64 kPanel = 32;
  constexpr i64 kCrossover = 96;

  i64 p = 0;
  std::vector<double> vpanel, wpanel, col, wcol;
  while (n - p > kCrossover) {
    const i64 m = n - p;
    const i64 nb = kPanel;  // m > kCrossover >= kPanel + 2
    double* t = a + p * n + p;  // trailing block, leading dimension n
    vpanel.assign(static_cast<std::size_t>(m * nb), 0.0);
    wpanel.assign(static_cast<std::size_t>(m * nb), 0.0);
    auto vrow = [&](i64 r) { return vpanel.data() + r * nb; };
    auto wrow = [&](i64 r) { return wpanel.data() + r * nb; };

    for (i64 i = 0; i < nb; ++i) {
      const i64 len = m - i - 1;
      col.assign(static_cast<std::size_t>(m - i), 0.0);
      // column i of the updated block: stale storage plus panel corrections
      for (i64 r = i; r < m; ++r) {
        double val = t[r * n + i];
        const double* vr = vrow(r);
        const double* wr = wrow(r);
        const double* vi = vrow(i);
        const double* wi = wrow(i);
        for (i64 s = 0; s < i; ++s) val -= vr[s] * wi[s] + wr[s] * vi[s];
        col[static_cast<std::size_t>(r - i)] = val;
      }
      d[static_cast<std::size_t>(p + i)] = col[0];
      Householder h = make_householder(col.data() + 1, len);
      e[static_cast<std::size_t>(p + i)] = h.beta;
      const double* v = col.data() + 1;  // length len, local rows i+1..m-1
      for (i64 r = 0; r < len; ++r) vrow(i + 1 + r)[i] = v[r];
      if (h.tau == 0.0) continue;  // w column stays zero

      wcol.assign(static_cast<std::size_t>(len), 0.0);
      symv_lower(t + (i + 1) * n + (i + 1), n, len, v, wcol.data());
      // corrections for the columns already processed in this panel
      if (i > 0) {
        std::vector<double> c1(static_cast<std::size_t>(i), 0.0);
        std::vector<double> c2(static_cast<std::size_t>(i), 0.0);
        for (i64 r = 0; r < len; ++r) {
          const double* wr = wrow(i + 1 + r);
          const double* vr = vrow(i + 1 + r);
          for (i64 s = 0; s < i; ++s) {
            c1[static_cast<std::size_t>(s)] += wr[s] * v[r];
            c2[static_cast<std::size_t>(s)] += vr[s] * v[r];
          }
        }
        for (i64 r = 0; r < len; ++r) {
          const double* vr = vrow(i + 1 + r);
          const double* wr = wrow(i + 1 + r);
          double acc = 0.0;
          for (i64 s = 0; s < i; ++s) acc += vr[s] * c1[static_cast<std::size_t>(s)] + wr[s] * c2[static_cast<std::size_t>(s)];
          wcol[static_cast<std::size_t>(r)] -= acc;
        }
      }
      double vw = 0.0;
      for (i64 r = 0; r < len; ++r) {
        wcol[static_cast<std::size_t>(r)] *= h.tau;
        vw += wcol[static_cast<std::size_t>(r)] * v[r];
      }
      const double corr = -0.5 * h.tau * vw;
      for (i64 r = 0; r < len; ++r) {
        wrow(i + 1 + r)[i] = wcol[static_cast<std::size_t>(r)] + corr * v[r];
      }
    }

    // Trailing update: T[nb.., nb..] -= V W^T + W V^T (lower triangle).
    for (i64 r = nb; r < m; ++r) {
      double* __restrict row = t + r * n;
      const double* __restrict vr = vrow(r);
      const double* __restrict wr = wrow(r);
      for (i64 c = nb; c <= r; ++c) {
        const double* __restrict vc = vpanel.data() + c * kPanel;
        const double* __restrict wc = wpanel.data() + c * kPanel;
        double acc0 = 0.0, acc1 = 0.0;
#pragma omp simd reduction(+ : acc0, acc1)
        for (i64 s = 0; s < kPanel; ++s) {
          acc0 += vr[s] * wc[s];
          acc1 += wr[s] * vc[s];
        }
        row[c] -= acc0 + acc1;
      }
    }
    p += nb;
  }
  tridiagonalize_unblocked(a + p * n + p, n, n - p,
                           d.data() + p, e.data() + p);
}

// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e) {
  const i64 n = static_cast<i64>(d.size());
  if (n == 0) return d;
  e.resize(static_cast<std::size_t>(n), 0.0);
  e[static_cast<std::size_t>(n - 1)] = 0.0;
  i64 remaining = 30 * n;

  for (i64 l = 0; l < n; ++l) {
    for (;;) {
      i64 m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[static_cast<std::size_t>(m)]) +
                          std::abs(d[static_cast<std::size_t>(m + 1)]);
        if (std::abs(e[static_cast<std::size_t>(m)]) <= kEps * dd) break;
      }
      if (m == l) break;
      if (remaining-- <= 0) {
        throw EigenSolverError("tridiag_eigenvalues: no convergence after 30n sweeps", l);
      }
      double g = (d[static_cast<std::size_t>(l + 1)] - d[static_cast<std::size_t>(l)]) /
                 (2.0 * e[static_cast<std::size_t>(l)]);
      double r = std::hypot(g, 1.0);
      g = d[static_cast<std::size_t>(m)] - d[static_cast<std::size_t>(l)] +
          e[static_cast<std::size_t>(l)] / (g + sign_with(r, g));
      double s = 1.0, c = 1.0, pshift = 0.0;
      bool underflow = false;
      for (i64 i = m - 1; i >= l; --i) {
        double f = s * e[static_cast<std::size_t>(i)];
        const double b = c * e[static_cast<std::size_t>(i)];
        r = std::hypot(f, g);
        e[static_cast<std::size_t>(i + 1)] = r;
        if (r == 0.0) {
          d[static_cast<std::size_t>(i + 1)] -= pshift;
          e[static_cast<std::size_t>(m)] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[static_cast<std::size_t>(i + 1)] - pshift;
        r = (d[static_cast<std::size_t>(i)] - g) * s + 2.0 * c * b;
        pshift = s * r;
        d[static_cast<std::size_t>(i + 1)] = g + pshift;
        g = c * r - b;
      }
      if (!underflow) {
        d[static_cast<std::size_t>(l)] -= pshift;
        e[static_cast<std::size_t>(l)] = g;
        e[static_cast<std::size_t>(m)] = 0.0;
      }
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

std::vector<double> symmetric_eigenvalues(std::vector<double> a, i64 n) {
  constexpr i64 kTwoStageThreshold = 384;
  std::vector<double> d, e;
  if (n >= kTwoStageThreshold) {
    reduce_to_band(a.data(), n);
    std::vector<double> band(static_cast<std::size_t>((kBand + 1) * n), 0.0);
    for (i64 dd = 0; dd <= kBand; ++dd) {
      for (i64 c = 0; c + dd < n; ++c) {
        band[static_cast<std::size_t>(dd * n + c)] =
            a[static_cast<std::size_t>((c + dd) * n + c)];
      }
    }
    a.clear();
    a.shrink_to_fit();
    band_to_tridiagonal(band, n, kBand, d, e);
  } else {
    tridiagonalize(a, n, d, e);
  }
  if (n <= 1) return d;
  std::vector<double> sub(e.begin(), e.end() - 1);
  sub.push_back(0.0);
  return tridiag_eigenvalues(std::move(d), std::move(sub));
}

// ---------------------------------------------------------------------------
// Staircase deflation of the exact kernel.
// ---------------------------------------------------------------------------

namespace {

// Householder QR with column pivoting; returns the permutation and leaves R
// in the upper triangle. Q is discarded.
std::vector<i64> qr_column_pivot(std::vector<double>& a, i64 m) {
  auto at = [&](i64 i, i64 j) -> double& {
    return a[static_cast<std::size_t>(i * m + j)];
  };
  std::vector<i64> perm(static_cast<std::size_t>(m));
  for (i64 j = 0; j < m; ++j) perm[static_cast<std::size_t>(j)] = j;
  std::vector<double> norms(static_cast<std::size_t>(m), 0.0);
  std::vector<double> norms_ref(static_cast<std::size_t>(m), 0.0);
  for (i64 j = 0; j < m; ++j) {
    double s = 0.0;
    for (i64 i = 0; i < m; ++i) s += at(i, j) * at(i, j);
    norms[static_cast<std::size_t>(j)] = norms_ref[static_cast<std::size_t>(j)] = s;
  }
  std::vector<double> v(static_cast<std::size_t>(m));

  for (i64 step = 0; step < m; ++step) {
    i64 pivot = step;
    for (i64 j = step + 1; j < m; ++j) {
      if (norms[static_cast<std::size_t>(j)] > norms[static_cast<std::size_t>(pivot)]) pivot = j;
    }
    if (pivot != step) {
      for (i64 i = 0; i < m; ++i) std::swap(at(i, step), at(i, pivot));
      std::swap(norms[static_cast<std::size_t>(step)], norms[static_cast<std::size_t>(pivot)]);
      std::swap(norms_ref[static_cast<std::size_t>(step)], norms_ref[static_cast<std::size_t>(pivot)]);
      std::swap(perm[static_cast<std::size_t>(step)], perm[static_cast<std::size_t>(pivot)]);
    }
    const i64 len = m - step;
    for (i64 r = 0; r < len; ++r) v[static_cast<std::size_t>(r)] = at(step + r, step);
    Householder h = make_householder(v.data(), len);
    at(step, step) = h.beta;
    for (i64 r = 1; r < len; ++r) at(step + r, step) = 0.0;
    if (h.tau != 0.0) {
      for (i64 j = step + 1; j < m; ++j) {
        double dot = 0.0;
        for (i64 r = 0; r < len; ++r) dot += v[static_cast<std::size_t>(r)] * at(step + r, j);
        const double f = h.tau * dot;
        for (i64 r = 0; r < len; ++r) at(step + r, j) -= f * v[static_cast<std::size_t>(r)];
      }
    }
    // Downdate column norms, recomputing when cancellation bites.
    for (i64 j = step + 1; j < m; ++j) {
      double& nj = norms[static_cast<std::size_t>(j)];
      nj -= at(step, j) * at(step, j);
      if (nj < 1e-3 * norms_ref[static_cast<std::size_t>(j)] || nj < 0.0) {
        double s = 0.0;
        for (i64 i = step + 1; i < m; ++i) s += at(i, j) * at(i, j);
        nj = norms_ref[static_cast<std::size_t>(j)] = s;
      }
    }
  }
  return perm;
}

}  // namespace

i64 deflate_kernel_staircase(std::vector<double>& a, i64& n, double rel_tol) {
  i64 zeros = 0;
  while (n > 0) {
    const i64 m = n;
    std::vector<double> r_fact = a;  // QRCP destroys its input
    const std::vector<i64> perm = qr_column_pivot(r_fact, m);
    auto rat = [&](i64 i, i64 j) { return r_fact[static_cast<std::size_t>(i * m + j)]; };
    const double top = std::abs(rat(0, 0));
    if (top == 0.0) {  // the whole block is zero
      zeros += m;
      n = 0;
      a.clear();
      break;
    }
    i64 rank = 0;
    while (rank < m && std::abs(rat(rank, rank)) > rel_tol * top) ++rank;
    const i64 s = m - rank;
    if (s == 0) break;

    // Kernel basis: for each free column solve R11 y = -R12 e_t.
    std::vector<double> kernel(static_cast<std::size_t>(m * s), 0.0);
    auto kat = [&](i64 i, i64 j) -> double& {
      return kernel[static_cast<std::size_t>(i * s + j)];
    };
    std::vector<double> y(static_cast<std::size_t>(rank));
    for (i64 t = 0; t < s; ++t) {
      for (i64 i = rank - 1; i >= 0; --i) {
        double acc = -rat(i, rank + t);
        for (i64 j = i + 1; j < rank; ++j) acc -= rat(i, j) * y[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = acc / rat(i, i);
      }
      for (i64 i = 0; i < rank; ++i) kat(perm[static_cast<std::size_t>(i)], t) = y[static_cast<std::size_t>(i)];
      kat(perm[static_cast<std::size_t>(rank + t)], t) = 1.0;
    }

    // Orthonormalize the kernel and complete to a full orthogonal basis by
    // accumulating the Householder QR of the kernel block against identity.
    std::vector<double> q(static_cast<std::size_t>(m * m), 0.0);
    for (i64 i = 0; i < m; ++i) q[static_cast<std::size_t>(i * m + i)] = 1.0;
    {
      std::vector<double> v(static_cast<std::size_t>(m));
      std::vector<double> taus(static_cast<std::size_t>(s), 0.0);
      std::vector<double> vs(static_cast<std::size_t>(m * s), 0.0);
      for (i64 step = 0; step < s; ++step) {
        const i64 len = m - step;
        for (i64 r = 0; r < len; ++r) v[static_cast<std::size_t>(r)] = kat(step + r, step);
        Householder h = make_householder(v.data(), len);
        taus[static_cast<std::size_t>(step)] = h.tau;
        for (i64 r = 0; r < len; ++r) vs[static_cast<std::size_t>((step + r) * s + step)] = v[static_cast<std::size_t>(r)];
        kat(step, step) = h.beta;
        for (i64 r = 1; r < len; ++r) kat(step + r, step) = 0.0;
        if (h.tau == 0.0) continue;
        for (i64 j = step + 1; j < s; ++j) {
          double dot = 0.0;
          for (i64 r = 0; r < len; ++r) dot += v[static_cast<std::size_t>(r)] * kat(step + r, j);
          const double f = h.tau * dot;
          for (i64 r = 0; r < len; ++r) kat(step + r, j) -= f * v[static_cast<std::size_t>(r)];
        }
      }
      // q = H_0 H_1 ... H_{s-1} I, applied back to front.
      for (i64 step = s - 1; step >= 0; --step) {
        const double tau = taus[static_cast<std::size_t>(step)];
        if (tau == 0.0) continue;
        const i64 len = m - step;
        for (i64 j = 0; j < m; ++j) {
          double dot = 0.0;
          for (i64 r = 0; r < len; ++r) {
            dot += vs[static_cast<std::size_t>((step + r) * s + step)] *
                   q[static_cast<std::size_t>((step + r) * m + j)];
          }
          const double f = tau * dot;
          for (i64 r = 0; r < len; ++r) {
            q[static_cast<std::size_t>((step + r) * m + j)] -=
                f * vs[static_cast<std::size_t>((step + r) * s + step)];
          }
        }
      }
    }

    // Core = Z2^T A Z2 with Z2 the trailing m-s columns of q.
    const i64 mc = m - s;
    std::vector<double> tmp(static_cast<std::size_t>(m * mc), 0.0);
    for (i64 i = 0; i < m; ++i) {
      for (i64 j = 0; j < mc; ++j) {
        double acc = 0.0;
        for (i64 t = 0; t < m; ++t) {
          acc += a[static_cast<std::size_t>(i * m + t)] *
                 q[static_cast<std::size_t>(t * m + (s + j))];
        }
        tmp[static_cast<std::size_t>(i * mc + j)] = acc;
      }
    }
    std::vector<double> core(static_cast<std::size_t>(mc * mc), 0.0);
    for (i64 i = 0; i < mc; ++i) {
      for (i64 j = 0; j < mc; ++j) {
        double acc = 0.0;
        for (i64 t = 0; t < m; ++t) {
          acc += q[static_cast<std::size_t>(t * m + (s + i))] *
                 tmp[static_cast<std::size_t>(t * mc + j)];
        }
        core[static_cast<std::size_t>(i * mc + j)] = acc;
      }
    }
    a = std::move(core);
    n = mc;
    zeros += s;
  }
  return zeros;
}

std::vector<Complex> general_eigenvalues(std::vector<double> a, i64 n,
                                         const DenseOptions& opts) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n));
  if (opts.deflate_exact_kernel) {
    const i64 zeros = deflate_kernel_staircase(a, n, opts.kernel_tol);
    for (i64 i = 0; i < zeros; ++i) out.emplace_back(0.0, 0.0);
  }
  if (n == 0) return out;
  if (is_symmetric(a, n, opts.symmetry_tol)) {
    for (double v : symmetric_eigenvalues(std::move(a), n)) out.emplace_back(v, 0.0);
    return out;
  }
  const BalanceRange range = balance_in_place(a, n);
  hessenberg_in_place(a, n, range.lo, range.hi);
  std::vector<Complex> vals = hessenberg_qr_eigenvalues(a, n, range.lo, range.hi);
  out.insert(out.end(), vals.begin(), vals.end());
  return out;
}

}  // namespace dense_detail

std::vector<Complex> dense_eigenvalues(const TransitionMatrix& p,
                                       const DenseOptions& opts) {
  return dense_detail::general_eigenvalues(p.to_dense(), p.size(), opts);
}

double mixing_rate_general(const TransitionMatrix& p) {
  const std::vector<Complex> values = dense_eigenvalues(p);
  return mixing_rate_from_values(values);
}

}  // namespace hubmix
