#pragma once
// Closed-form engine for the TCPair backoff process:
//   * StationarySummary  — boundary slices (corner eps, row r, column d) and
//                          block masses of the stationary distribution at a
//                          fixed collision probability p, plus the attempt
//                          probability eta
//   * SummaryDerivatives — exact d/dp of all of the above
//   * solve_coupling_*   — the fixed point p = 1 - (1-eta(p))^(N-1) across N
//                          pairs (damped Newton, plus a derivative-free
//                          bisection oracle)
//   * ds_throughput      — channel capacity of the double-station protocol
//   * baseline_csma_throughput — conventional single-station RTS comparator
//
// Why boundary slices suffice: inside a stage block (m, n) the only internal
// flow is the joint decrement (i,j) -> (i-1,j-1), so every state telescopes
// along its diagonal over the external injections,
//     pi(i,j) = sum_k I(i+k, j+k),
// and the injections themselves are built from *other* blocks' boundary
// values: collision redraws read pi(.,.,0,j) and pi(.,.,i,0), success
// redraws are uniform over the (0,0) block, and the pair's own both-zero
// corner redraws uniformly over the next block. Writing the telescopes out
// for the boundary states yields closed linear recurrences over the blocks
// in the order (0,0), (1,0), ..., (M-1,0), (1,1), ..., (M-1,M-1); blocks in
// the top stage are self-referential and need small structured solves. The
// system is linear and homogeneous, so it is solved with eps_{0,0} = 1 and
// rescaled by the total mass. Everything here runs in O(M^2 * W_max) time,
// which is what lets the optimizers sweep window sizes the brute-force chain
// oracle could never touch.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dscsma/core.hpp"

namespace dscsma {

namespace detail {

// --------------------------------------------------------------------------
// Boundary slices are stored as vectors of length W whose entry 0 is the
// block corner eps; entries 1..W-1 are the proper one-zero states. All
// source sums in the recurrences run over 1..W-1 only (the corner is not a
// one-zero source), so the prefix helpers below exclude index 0.

// pre[k] = v[1] + ... + v[k], pre[0] = 0.
inline std::vector<double> prefix1(const std::vector<double>& v) {
  std::vector<double> p(v.size(), 0.0);
  for (std::size_t k = 1; k < v.size(); ++k) p[k] = p[k - 1] + v[k];
  return p;
}

// sum of v[a..b] from its prefix array, clamped to the stored range.
inline double seg(const std::vector<double>& pre, int a, int b) {
  const int n = static_cast<int>(pre.size()) - 1;
  b = std::min(b, n);
  a = std::max(a, 1);
  if (a > b) return 0.0;
  return pre[b] - pre[a - 1];
}

// Injection weight: an injection at boundary distance l-1 (source index l)
// feeds a diagonal of 1 + min(a, b) states; summed over the free coordinate
// of a W-wide block this gives w(l; W) = -l^2/2 + (W + 1/2) l.
inline double diag_weight(int l, int w) {
  return static_cast<double>(l) * (w + 0.5 - 0.5 * l);
}

// Column sources saturate once the source index passes the short side W_n.
inline double diag_weight_sat(int l, int wn) {
  return diag_weight(std::min(l, wn), wn);
}

// Sum of 1 + min(a,b) over a full W_m x W_n block (W_m >= W_n).
inline double corner_weight(int wm, int wn) {
  const double m = wm, n = wn;
  return -n * n * n / 6.0 + m * n * n / 2.0 + m * n / 2.0 + n / 6.0;
}

// --------------------------------------------------------------------------
// O(n) solver for the top-stage two-sided system
//     x_i = b_i + c * ( sum_{l > i} x_l + sum_{l <= n+1-i} x_l ),  i = 1..n.
// With prefix sums F_k = x_1 + ... + x_k and T = F_n this reads
//     x_i = b_i + c (T - F_i) + c F_{n+1-i},
// so sweeping k = 1, 2, ... while carrying T symbolically (every F_k is
// affine in T) closes the two chains F_k (left) and F_{n-k} (right) at the
// middle, which pins T; then every x_i follows directly. b[0] is ignored.

struct Affine {
  double a = 0.0, b = 0.0;  // value = a + b * T
};

inline std::vector<double> solve_two_sided(const std::vector<double>& b,
                                           double c) {
  const int n = static_cast<int>(b.size()) - 1;
  require(n >= 1, errc::singular_system, "two-sided system with no unknowns");
  std::vector<Affine> f(n + 1);
  f[0] = {0.0, 0.0};
  f[n] = {0.0, 1.0};
  double t = 0.0;
  bool pinned = false;
  for (int k = 1; k <= n; ++k) {
    const int mk = n + 1 - k;
    if (k == mk) {  // odd n: middle equation x_k = b_k + c T
      // right chain has already produced F[k]; left chain gives F[k-1].
      const Affine lhs = f[k];
      const Affine rhs = {f[k - 1].a + b[k], f[k - 1].b + c};
      const double den = lhs.b - rhs.b;
      require(std::abs(den) > 1e-14, errc::singular_system,
              "two-sided solve: degenerate middle closure");
      t = (rhs.a - lhs.a) / den;
      pinned = true;
      break;
    }
    // left chain: F_k (1+c) = F_{k-1} + b_k + c T + c F_{n+1-k}
    Affine left;
    left.a = (f[k - 1].a + b[k] + c * f[mk].a) / (1.0 + c);
    left.b = (f[k - 1].b + c + c * f[mk].b) / (1.0 + c);
    // mirror: x_{mk} = b_{mk} + c T - c F_{mk} + c F_k
    Affine xm;
    xm.a = b[mk] + c * (left.a - f[mk].a);
    xm.b = c + c * (left.b - f[mk].b);
    // right chain: F_{mk-1} = F_{mk} - x_{mk}
    const Affine right = {f[mk].a - xm.a, f[mk].b - xm.b};
    if (mk - 1 == k) {  // even n: the chains meet, left == right pins T
      const double den = left.b - right.b;
      require(std::abs(den) > 1e-14, errc::singular_system,
              "two-sided solve: degenerate even closure");
      t = (right.a - left.a) / den;
      f[k] = left;
      pinned = true;
      break;
    }
    f[k] = left;
    f[mk - 1] = right;
  }
  require(pinned, errc::singular_system, "two-sided solve: no closure");
  std::vector<double> fv(n + 1);
  for (int k = 0; k <= n; ++k) fv[k] = f[k].a + f[k].b * t;
  std::vector<double> x(n + 1, 0.0);
  double scale = 1.0;
  for (int i = 1; i <= n; ++i) {
    x[i] = b[i] + c * (t - fv[i]) + c * fv[n + 1 - i];
    scale = std::max(scale, std::abs(x[i]));
  }
  // O(n) residual audit: the sweep is exact in exact arithmetic, so any
  // large residual means the system itself was degenerate.
  std::vector<double> ps(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) ps[i] = ps[i - 1] + x[i];
  double worst = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double res = x[i] - b[i] - c * ((ps[n] - ps[i]) + ps[n + 1 - i]);
    worst = std::max(worst, std::abs(res));
  }
  require(worst <= 1e-9 * scale, errc::singular_system,
          "two-sided solve: residual " + std::to_string(worst));
  return x;
}

// Affine-valued helpers for the derivative pass (unknown = d eps00 / dp).
using AVec = std::vector<Affine>;

inline AVec prefix1(const AVec& v) {
  AVec p(v.size());
  for (std::size_t k = 1; k < v.size(); ++k)
    p[k] = {p[k - 1].a + v[k].a, p[k - 1].b + v[k].b};
  return p;
}

inline Affine seg(const AVec& pre, int a, int b) {
  const int n = static_cast<int>(pre.size()) - 1;
  b = std::min(b, n);
  a = std::max(a, 1);
  if (a > b) return {};
  return {pre[b].a - pre[a - 1].a, pre[b].b - pre[a - 1].b};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// StationarySummary
// ---------------------------------------------------------------------------

class SummaryDerivatives;

class StationarySummary {
 public:
  StationarySummary(const ProtocolParams& pp, double p) : pp_(pp), p_(p) {
    validate(pp_);
    require(p >= 0.0 && p < 1.0, errc::invalid_probability,
            "collision probability must lie in [0, 1)");
    win_.resize(pp_.stages);
    for (int s = 0; s < pp_.stages; ++s) win_[s] = pp_.window(s);
    compute();
  }

  int stages() const { return pp_.stages; }
  int window(int s) const { return win_[s]; }
  double collision_prob() const { return p_; }
  double eta() const { return eta_; }

  // Corner probability pi(m,n,0,0); symmetric in (m,n).
  double eps(int m, int n) const { return r_[tri_any(m, n)][0]; }

  // Boundary slices for any block order. row_slice(m,n)[j] = pi(m,n,0,j)
  // (length W_n, entry 0 = eps); col_slice(m,n)[i] = pi(m,n,i,0).
  const std::vector<double>& row_slice(int m, int n) const {
    return m >= n ? r_[tri(m, n)] : d_[tri(n, m)];
  }
  const std::vector<double>& col_slice(int m, int n) const {
    return m >= n ? d_[tri(m, n)] : r_[tri(n, m)];
  }

  // Total stationary mass of stage block (m,n); sums to 1 over all ordered
  // blocks.
  double mass(int m, int n) const { return mass_[tri_any(m, n)]; }

  double total_mass() const {
    double z = 0.0;
    for (int m = 0; m < pp_.stages; ++m)
      for (int n = 0; n <= m; ++n) z += (m == n ? 1.0 : 2.0) * mass_[tri(m, n)];
    return z;
  }

  // Full per-state reconstruction of one block (row-major W_m x W_n):
  // rebuilds the block's injection function from the solved boundary values
  // and telescopes pi(i,j) = I(i,j) + pi(i+1,j+1). Intended for oracle-scale
  // cross-validation.
  std::vector<double> block(int m, int n) const {
    const int wm = win_[m], wn = win_[n];
    if (m < n) {
      const std::vector<double> t = block(n, m);  // wn x wm
      std::vector<double> out(static_cast<std::size_t>(wm) * wn);
      for (int i = 0; i < wm; ++i)
        for (int j = 0; j < wn; ++j)
          out[static_cast<std::size_t>(i) * wn + j] =
              t[static_cast<std::size_t>(j) * wm + i];
      return out;
    }
    std::vector<double> row_src, col_src;  // effective sources, index >= 1
    double corner = 0.0;
    gather_inputs(m, n, row_src, col_src, corner);
    const double cm = p_ / wm, cn = p_ / wn;
    const double unif = corner / (static_cast<double>(wm) * wn);
    std::vector<double> out(static_cast<std::size_t>(wm) * wn, 0.0);
    for (int i = wm - 1; i >= 0; --i)
      for (int j = wn - 1; j >= 0; --j) {
        double inj = unif;
        if (j + 1 <= wn - 1 && j + 1 < static_cast<int>(row_src.size()))
          inj += cm * row_src[j + 1];
        if (i + 1 <= wm - 1 && i + 1 < static_cast<int>(col_src.size()))
          inj += cn * col_src[i + 1];
        const double below =
            (i + 1 < wm && j + 1 < wn)
                ? out[static_cast<std::size_t>(i + 1) * wn + (j + 1)]
                : 0.0;
        out[static_cast<std::size_t>(i) * wn + j] = inj + below;
      }
    return out;
  }

 private:
  friend class SummaryDerivatives;

  static int tri(int m, int n) { return m * (m + 1) / 2 + n; }  // n <= m
  int tri_any(int m, int n) const {
    return m >= n ? tri(m, n) : tri(n, m);
  }

  // Effective injection sources of a lower-triangle block (m >= n), from the
  // *solved* boundary values (self-referential blocks include themselves).
  void gather_inputs(int m, int n, std::vector<double>& row_src,
                     std::vector<double>& col_src, double& corner) const {
    const int top = pp_.stages - 1;
    row_src.clear();
    col_src.clear();
    corner = 0.0;
    if (m == 0 && n == 0) {
      // success redraws are uniform over the base block; expressed through
      // the block's own corner, the per-state injection is eps00 / W0.
      corner = r_[tri(0, 0)][0] * win_[0];
      return;
    }
    if (n == 0) {
      row_src = r_[tri(m - 1, 0)];
      if (m == top)
        for (int l = 1; l < win_[0]; ++l) row_src[l] += r_[tri(top, 0)][l];
      return;
    }
    if (m == n && m == top) {
      const auto& dp = d_[tri(top, top - 1)];
      const auto& x = r_[tri(top, top)];
      row_src.assign(win_[top], 0.0);
      for (int l = 1; l < win_[top]; ++l) row_src[l] = dp[l] + x[l];
      col_src = row_src;
      corner = r_[tri(top - 1, top - 1)][0] + 2.0 * r_[tri(top, top - 1)][0] +
               r_[tri(top, top)][0];
      return;
    }
    row_src = (m == n) ? d_[tri(n, n - 1)] : r_[tri(m - 1, n)];
    if (m == top)
      for (int l = 1; l < win_[n]; ++l) row_src[l] += r_[tri(top, n)][l];
    col_src = d_[tri(m, n - 1)];
    corner = r_[tri(m - 1, n - 1)][0];
    if (m == top) corner += r_[tri(top, n - 1)][0];
    return;
  }

  void compute() {
    using detail::corner_weight;
    using detail::diag_weight;
    using detail::diag_weight_sat;
    using detail::prefix1;
    using detail::seg;

    const int mM = pp_.stages, top = mM - 1;
    const int nblocks = tri(top, top) + 1;
    r_.assign(nblocks, {});
    d_.assign(nblocks, {});
    mass_.assign(nblocks, 0.0);

    // ---- base block (0,0): uniform success injections, seed eps00 = 1.
    {
      const int w = win_[0];
      auto& r = r_[tri(0, 0)];
      r.assign(w, 0.0);
      r[0] = 1.0;
      for (int j = 1; j < w; ++j) r[j] = static_cast<double>(w - j) / w;
      d_[tri(0, 0)] = r;
      mass_[tri(0, 0)] = (2.0 * w + 1.0) * (w + 1.0) / 6.0;
    }

    // ---- column n = 0, middle stages: only row injections.
    for (int m = 1; m <= top - 1; ++m) {
      const int wm = win_[m], w0 = win_[0];
      const auto& rp = r_[tri(m - 1, 0)];
      const auto prp = prefix1(rp);
      const double c = p_ / wm;
      auto& r = r_[tri(m, 0)];
      auto& d = d_[tri(m, 0)];
      r.assign(w0, 0.0);
      d.assign(wm, 0.0);
      for (int j = 1; j < w0; ++j) r[j] = c * seg(prp, j + 1, w0 - 1);
      for (int i = 1; i < wm; ++i)
        d[i] = c * seg(prp, 1, std::min(w0 - 1, wm - i));
      r[0] = d[0] = c * seg(prp, 1, w0 - 1);
      double acc = 0.0;
      for (int l = 1; l < w0; ++l) acc += rp[l] * diag_weight(l, wm);
      mass_[tri(m, 0)] = c * acc;
    }

    // ---- column n = 0, top stage: rows feed back into themselves
    // (stage stays at the cap), giving a triangular back-substitution.
    {
      const int wm = win_[top], w0 = win_[0];
      const auto& rp = r_[tri(top - 1, 0)];
      const double c = p_ / wm;
      auto& r = r_[tri(top, 0)];
      r.assign(w0, 0.0);
      double suf = 0.0;  // sum_{l > j} (rp[l] + r[l])
      for (int j = w0 - 1; j >= 1; --j) {
        r[j] = c * suf;
        suf += rp[j] + r[j];
      }
      std::vector<double> src(w0, 0.0);
      for (int l = 1; l < w0; ++l) src[l] = rp[l] + r[l];
      const auto ps = prefix1(src);
      auto& d = d_[tri(top, 0)];
      d.assign(wm, 0.0);
      for (int i = 1; i < wm; ++i)
        d[i] = c * seg(ps, 1, std::min(w0 - 1, wm - i));
      r[0] = d[0] = c * seg(ps, 1, w0 - 1);
      double acc = 0.0;
      for (int l = 1; l < w0; ++l) acc += src[l] * diag_weight(l, wm);
      mass_[tri(top, 0)] = c * acc;
    }

    // ---- interior columns n >= 1.
    for (int n = 1; n <= top - 1; ++n) {
      const int wn = win_[n];
      for (int m = n; m <= top - 1; ++m) {
        const int wm = win_[m];
        // row sources: previous stage in m (transposed slice when m == n)
        const auto& rp = (m == n) ? d_[tri(n, n - 1)] : r_[tri(m - 1, n)];
        const auto& dp = d_[tri(m, n - 1)];
        const double e = r_[tri(m - 1, n - 1)][0];
        const auto prp = prefix1(rp);
        const auto pdp = prefix1(dp);
        const double cm = p_ / wm, cn = p_ / wn;
        const double eu = e / (static_cast<double>(wm) * wn);
        auto& r = r_[tri(m, n)];
        auto& d = d_[tri(m, n)];
        r.assign(wn, 0.0);
        d.assign(wm, 0.0);
        for (int j = 1; j < wn; ++j)
          r[j] = cm * seg(prp, j + 1, wn - 1) + cn * seg(pdp, 1, wn - j) +
                 (wn - j) * eu;
        for (int i = 1; i < wm; ++i)
          d[i] = cm * seg(prp, 1, std::min(wn - 1, wm - i)) +
                 cn * seg(pdp, i + 1, std::min(i + wn, wm - 1)) +
                 std::min(wn, wm - i) * eu;
        r[0] = d[0] = cm * seg(prp, 1, wn - 1) +
                      cn * seg(pdp, 1, std::min(wn, wm - 1)) + e / wm;
        double racc = 0.0, dacc = 0.0;
        for (int l = 1; l < wn; ++l) racc += rp[l] * diag_weight(l, wm);
        for (int l = 1; l < wm; ++l) dacc += dp[l] * diag_weight_sat(l, wn);
        mass_[tri(m, n)] =
            cm * racc + cn * dacc + eu * corner_weight(wm, wn);
      }
      // top stage of this column: triangular in r again.
      {
        const int wm = win_[top];
        const auto& rp = r_[tri(top - 1, n)];
        const auto& dp = d_[tri(top, n - 1)];
        const double e2 = r_[tri(top - 1, n - 1)][0] + r_[tri(top, n - 1)][0];
        const auto pdp = prefix1(dp);
        const double cm = p_ / wm, cn = p_ / wn;
        const double eu = e2 / (static_cast<double>(wm) * wn);
        auto& r = r_[tri(top, n)];
        r.assign(wn, 0.0);
        double suf = 0.0;
        for (int j = wn - 1; j >= 1; --j) {
          r[j] = cm * suf + cn * seg(pdp, 1, wn - j) + (wn - j) * eu;
          suf += rp[j] + r[j];
        }
        std::vector<double> src(wn, 0.0);
        for (int l = 1; l < wn; ++l) src[l] = rp[l] + r[l];
        const auto ps = prefix1(src);
        auto& d = d_[tri(top, n)];
        d.assign(wm, 0.0);
        for (int i = 1; i < wm; ++i)
          d[i] = cm * seg(ps, 1, std::min(wn - 1, wm - i)) +
                 cn * seg(pdp, i + 1, std::min(i + wn, wm - 1)) +
                 std::min(wn, wm - i) * eu;
        r[0] = d[0] = cm * seg(ps, 1, wn - 1) +
                      cn * seg(pdp, 1, std::min(wn, wm - 1)) + e2 / wm;
        double racc = 0.0, dacc = 0.0;
        for (int l = 1; l < wn; ++l) racc += src[l] * diag_weight(l, wm);
        for (int l = 1; l < wm; ++l) dacc += dp[l] * diag_weight_sat(l, wn);
        mass_[tri(top, n)] =
            cm * racc + cn * dacc + eu * corner_weight(wm, wn);
      }
    }

    // ---- top corner block (M-1, M-1): square and symmetric, both source
    // directions are the same array (dp + self), and the corner couples to
    // itself; solve the two-sided system with the corner kept symbolic.
    {
      const int w = win_[top];
      const auto& dp = (top == 0) ? r_[0] : d_[tri(top, top - 1)];
      const double esig =
          r_[tri(top - 1, top - 1)][0] + 2.0 * r_[tri(top, top - 1)][0];
      const double c = p_ / w;
      const auto pdp = prefix1(dp);
      std::vector<double> rhs0(w, 0.0), rhs1(w, 0.0);
      const double w2 = static_cast<double>(w) * w;
      for (int i = 1; i < w; ++i) {
        rhs0[i] = c * (seg(pdp, i + 1, w - 1) + seg(pdp, 1, w - i)) +
                  (w - i) * esig / w2;
        rhs1[i] = (w - i) / w2;
      }
      const auto x0 = detail::solve_two_sided(rhs0, c);
      c6_x1_ = detail::solve_two_sided(rhs1, c);
      double t0 = 0.0, t1 = 0.0, tdp = seg(pdp, 1, w - 1);
      for (int l = 1; l < w; ++l) {
        t0 += x0[l];
        t1 += c6_x1_[l];
      }
      c6_denom_ = 1.0 - 1.0 / w - 2.0 * c * t1;
      require(std::abs(c6_denom_) > 1e-13, errc::singular_system,
              "top-corner closure is degenerate");
      const double e = (2.0 * c * (tdp + t0) + esig / w) / c6_denom_;
      auto& r = r_[tri(top, top)];
      r.assign(w, 0.0);
      r[0] = e;
      for (int l = 1; l < w; ++l) r[l] = x0[l] + e * c6_x1_[l];
      d_[tri(top, top)] = r;
      double acc = 0.0;
      for (int l = 1; l < w; ++l) acc += (dp[l] + r[l]) * diag_weight(l, w);
      mass_[tri(top, top)] =
          2.0 * c * acc + (esig + e) / w2 * corner_weight(w, w);
    }

    // ---- normalize to total mass 1 and accumulate eta.
    const double z = total_mass();
    require(z > 0.0, errc::singular_system, "non-positive total mass");
    const double inv = 1.0 / z;
    for (auto& v : r_)
      for (double& x : v) x *= inv;
    for (auto& v : d_)
      for (double& x : v) x *= inv;
    for (double& x : mass_) x *= inv;
    eta_ = 0.0;
    for (int m = 0; m < mM; ++m)
      for (int n = 0; n <= m; ++n) {
        double s = 0.0;
        const auto& r = r_[tri(m, n)];
        const auto& d = d_[tri(m, n)];
        for (std::size_t k = 1; k < r.size(); ++k) s += r[k];
        for (std::size_t k = 1; k < d.size(); ++k) s += d[k];
        eta_ += (m == n ? 1.0 : 2.0) * s;
      }
  }

  ProtocolParams pp_;
  double p_;
  std::vector<int> win_;
  std::vector<std::vector<double>> r_, d_;  // lower triangle, [0] = eps
  std::vector<double> mass_;
  double eta_ = 0.0;
  // cached pieces of the top-corner solve reused by the derivative pass
  std::vector<double> c6_x1_;
  double c6_denom_ = 0.0;
};

// ---------------------------------------------------------------------------
// SummaryDerivatives: exact d/dp of the normalized summary.
//
// The normalized boundary values satisfy the same recurrences at every p, so
// differentiating each case gives the same linear structure driven by the
// product-rule value terms, seeded by the unknown scalar s = d eps00 / dp.
// Every derivative quantity is affine in s; the derivative of the
// normalization (sum of block masses == 1) pins s at the end.
// ---------------------------------------------------------------------------

class SummaryDerivatives {
 public:
  explicit SummaryDerivatives(const StationarySummary& s) : sum_(s) {
    compute();
  }

  double deta() const { return deta_; }
  double deps00() const { return s_; }
  double deps(int m, int n) const { return dr_[sum_.tri_any(m, n)][0]; }
  const std::vector<double>& drow_slice(int m, int n) const {
    return m >= n ? dr_[StationarySummary::tri(m, n)]
                  : dd_[StationarySummary::tri(n, m)];
  }
  const std::vector<double>& dcol_slice(int m, int n) const {
    return m >= n ? dd_[StationarySummary::tri(m, n)]
                  : dr_[StationarySummary::tri(n, m)];
  }
  double dmass(int m, int n) const { return dmass_[sum_.tri_any(m, n)]; }

  double dmass_total() const {  // zero up to round-off, by construction
    double z = 0.0;
    const int mM = sum_.stages();
    for (int m = 0; m < mM; ++m)
      for (int n = 0; n <= m; ++n)
        z += (m == n ? 1.0 : 2.0) * dmass_[StationarySummary::tri(m, n)];
    return z;
  }

 private:
  using Affine = detail::Affine;
  using AVec = detail::AVec;
  static int tri(int m, int n) { return StationarySummary::tri(m, n); }

  void compute() {
    using detail::corner_weight;
    using detail::diag_weight;
    using detail::diag_weight_sat;

    const int mM = sum_.stages(), top = mM - 1;
    const double p = sum_.collision_prob();
    const int nblocks = tri(top, top) + 1;
    std::vector<AVec> ar(nblocks), ad(nblocks);
    std::vector<Affine> amass(nblocks);

    // ---- base block: dr00[j] = (W0 - j)/W0 * s.
    {
      const int w = sum_.window(0);
      ar[tri(0, 0)].assign(w, Affine{});
      for (int j = 0; j < w; ++j)
        ar[tri(0, 0)][j] = {0.0, static_cast<double>(w - j) / w};
      ad[tri(0, 0)] = ar[tri(0, 0)];
      amass[tri(0, 0)] = {0.0, (2.0 * w + 1.0) * (w + 1.0) / 6.0};
    }

    // ---- column n = 0, middle stages.
    for (int m = 1; m <= top - 1; ++m) {
      const int wm = sum_.window(m), w0 = sum_.window(0);
      const auto& rpv = sum_.r_[tri(m - 1, 0)];
      const auto prv = detail::prefix1(rpv);
      const auto prd = detail::prefix1(ar[tri(m - 1, 0)]);
      const double c = p / wm, c1 = 1.0 / wm;
      auto& r = ar[tri(m, 0)];
      auto& d = ad[tri(m, 0)];
      r.assign(w0, Affine{});
      d.assign(wm, Affine{});
      for (int j = 1; j < w0; ++j)
        r[j] = axpy(c1 * detail::seg(prv, j + 1, w0 - 1),
                    detail::seg(prd, j + 1, w0 - 1), c);
      for (int i = 1; i < wm; ++i) {
        const int hi = std::min(w0 - 1, wm - i);
        d[i] = axpy(c1 * detail::seg(prv, 1, hi), detail::seg(prd, 1, hi), c);
      }
      r[0] = d[0] = axpy(c1 * detail::seg(prv, 1, w0 - 1),
                         detail::seg(prd, 1, w0 - 1), c);
      Affine acc{};
      double accv = 0.0;
      for (int l = 1; l < w0; ++l) {
        accv += rpv[l] * diag_weight(l, wm);
        acc = add(acc, scale(ar[tri(m - 1, 0)][l], diag_weight(l, wm)));
      }
      amass[tri(m, 0)] = axpy(c1 * accv, acc, c);
    }

    // ---- column n = 0, top stage (triangular).
    {
      const int wm = sum_.window(top), w0 = sum_.window(0);
      const auto& rpv = sum_.r_[tri(top - 1, 0)];
      const auto& rv = sum_.r_[tri(top, 0)];
      const auto& drp = ar[tri(top - 1, 0)];
      const double c = p / wm, c1 = 1.0 / wm;
      auto& r = ar[tri(top, 0)];
      r.assign(w0, Affine{});
      double sufv = 0.0;
      Affine sufd{};
      for (int j = w0 - 1; j >= 1; --j) {
        r[j] = axpy(c1 * sufv, sufd, c);
        sufv += rpv[j] + rv[j];
        sufd = add(sufd, add(drp[j], r[j]));
      }
      std::vector<double> srcv(w0, 0.0);
      AVec srcd(w0, Affine{});
      for (int l = 1; l < w0; ++l) {
        srcv[l] = rpv[l] + rv[l];
        srcd[l] = add(drp[l], r[l]);
      }
      const auto psv = detail::prefix1(srcv);
      const auto psd = detail::prefix1(srcd);
      auto& d = ad[tri(top, 0)];
      d.assign(wm, Affine{});
      for (int i = 1; i < wm; ++i) {
        const int hi = std::min(w0 - 1, wm - i);
        d[i] = axpy(c1 * detail::seg(psv, 1, hi), detail::seg(psd, 1, hi), c);
      }
      r[0] = d[0] = axpy(c1 * detail::seg(psv, 1, w0 - 1),
                         detail::seg(psd, 1, w0 - 1), c);
      Affine acc{};
      double accv = 0.0;
      for (int l = 1; l < w0; ++l) {
        accv += srcv[l] * diag_weight(l, wm);
        acc = add(acc, scale(srcd[l], diag_weight(l, wm)));
      }
      amass[tri(top, 0)] = axpy(c1 * accv, acc, c);
    }

    // ---- interior columns.
    for (int n = 1; n <= top - 1; ++n) {
      const int wn = sum_.window(n);
      for (int m = n; m <= top - 1; ++m) {
        const int wm = sum_.window(m);
        const auto& rpv = (m == n) ? sum_.d_[tri(n, n - 1)]
                                   : sum_.r_[tri(m - 1, n)];
        const auto& drp = (m == n) ? ad[tri(n, n - 1)] : ar[tri(m - 1, n)];
        const auto& dpv = sum_.d_[tri(m, n - 1)];
        const auto& ddp = ad[tri(m, n - 1)];
        const double ev = sum_.r_[tri(m - 1, n - 1)][0];
        const Affine de = ar[tri(m - 1, n - 1)][0];
        const auto prv = detail::prefix1(rpv);
        const auto prd = detail::prefix1(drp);
        const auto pdv = detail::prefix1(dpv);
        const auto pdd = detail::prefix1(ddp);
        const double cm = p / wm, cn = p / wn;
        const double im = 1.0 / wm, in = 1.0 / wn;
        const double wmn = static_cast<double>(wm) * wn;
        auto& r = ar[tri(m, n)];
        auto& d = ad[tri(m, n)];
        r.assign(wn, Affine{});
        d.assign(wm, Affine{});
        for (int j = 1; j < wn; ++j) {
          Affine v = axpy(im * detail::seg(prv, j + 1, wn - 1),
                          detail::seg(prd, j + 1, wn - 1), cm);
          v = add(v, axpy(in * detail::seg(pdv, 1, wn - j),
                          detail::seg(pdd, 1, wn - j), cn));
          r[j] = add(v, scale(de, (wn - j) / wmn));
        }
        for (int i = 1; i < wm; ++i) {
          const int hr = std::min(wn - 1, wm - i);
          Affine v = axpy(im * detail::seg(prv, 1, hr),
                          detail::seg(prd, 1, hr), cm);
          const int lo = i + 1, hi = std::min(i + wn, wm - 1);
          v = add(v, axpy(in * detail::seg(pdv, lo, hi),
                          detail::seg(pdd, lo, hi), cn));
          d[i] = add(v, scale(de, std::min(wn, wm - i) / wmn));
        }
        {
          Affine v = axpy(im * detail::seg(prv, 1, wn - 1),
                          detail::seg(prd, 1, wn - 1), cm);
          const int hd = std::min(wn, wm - 1);
          v = add(v, axpy(in * detail::seg(pdv, 1, hd),
                          detail::seg(pdd, 1, hd), cn));
          r[0] = d[0] = add(v, scale(de, 1.0 / wm));
        }
        Affine racc{}, dacc{};
        double raccv = 0.0, daccv = 0.0;
        for (int l = 1; l < wn; ++l) {
          raccv += rpv[l] * diag_weight(l, wm);
          racc = add(racc, scale(drp[l], diag_weight(l, wm)));
        }
        for (int l = 1; l < wm; ++l) {
          daccv += dpv[l] * diag_weight_sat(l, wn);
          dacc = add(dacc, scale(ddp[l], diag_weight_sat(l, wn)));
        }
        Affine mblk = axpy(im * raccv, racc, cm);
        mblk = add(mblk, axpy(in * daccv, dacc, cn));
        amass[tri(m, n)] =
            add(mblk, scale(de, corner_weight(wm, wn) / wmn));
      }
      // top stage of this column (triangular).
      {
        const int wm = sum_.window(top);
        const auto& rpv = sum_.r_[tri(top - 1, n)];
        const auto& rv = sum_.r_[tri(top, n)];
        const auto& drp = ar[tri(top - 1, n)];
        const auto& dpv = sum_.d_[tri(top, n - 1)];
        const auto& ddp = ad[tri(top, n - 1)];
        const double e2v =
            sum_.r_[tri(top - 1, n - 1)][0] + sum_.r_[tri(top, n - 1)][0];
        const Affine de2 =
            add(ar[tri(top - 1, n - 1)][0], ar[tri(top, n - 1)][0]);
        const auto pdv = detail::prefix1(dpv);
        const auto pdd = detail::prefix1(ddp);
        const double cm = p / wm, cn = p / wn;
        const double im = 1.0 / wm, in = 1.0 / wn;
        const double wmn = static_cast<double>(wm) * wn;
        auto& r = ar[tri(top, n)];
        r.assign(wn, Affine{});
        double sufv = 0.0;
        Affine sufd{};
        for (int j = wn - 1; j >= 1; --j) {
          Affine v = axpy(im * sufv, sufd, cm);
          v = add(v, axpy(in * detail::seg(pdv, 1, wn - j),
                          detail::seg(pdd, 1, wn - j), cn));
          r[j] = add(v, scale(de2, (wn - j) / wmn));
          sufv += rpv[j] + rv[j];
          sufd = add(sufd, add(drp[j], r[j]));
        }
        std::vector<double> srcv(wn, 0.0);
        AVec srcd(wn, Affine{});
        for (int l = 1; l < wn; ++l) {
          srcv[l] = rpv[l] + rv[l];
          srcd[l] = add(drp[l], r[l]);
        }
        const auto psv = detail::prefix1(srcv);
        const auto psd = detail::prefix1(srcd);
        auto& d = ad[tri(top, n)];
        d.assign(wm, Affine{});
        for (int i = 1; i < wm; ++i) {
          const int hr = std::min(wn - 1, wm - i);
          Affine v = axpy(im * detail::seg(psv, 1, hr),
                          detail::seg(psd, 1, hr), cm);
          const int lo = i + 1, hi = std::min(i + wn, wm - 1);
          v = add(v, axpy(in * detail::seg(pdv, lo, hi),
                          detail::seg(pdd, lo, hi), cn));
          d[i] = add(v, scale(de2, std::min(wn, wm - i) / wmn));
        }
        {
          Affine v = axpy(im * detail::seg(psv, 1, wn - 1),
                          detail::seg(psd, 1, wn - 1), cm);
          const int hd = std::min(wn, wm - 1);
          v = add(v, axpy(in * detail::seg(pdv, 1, hd),
                          detail::seg(pdd, 1, hd), cn));
          r[0] = d[0] = add(v, scale(de2, 1.0 / wm));
        }
        Affine racc{}, dacc{};
        double raccv = 0.0, daccv = 0.0;
        for (int l = 1; l < wn; ++l) {
          raccv += srcv[l] * diag_weight(l, wm);
          racc = add(racc, scale(srcd[l], diag_weight(l, wm)));
        }
        for (int l = 1; l < wm; ++l) {
          daccv += dpv[l] * diag_weight_sat(l, wn);
          dacc = add(dacc, scale(ddp[l], diag_weight_sat(l, wn)));
        }
        Affine mblk = axpy(im * raccv, racc, cm);
        mblk = add(mblk, axpy(in * daccv, dacc, cn));
        amass[tri(top, n)] =
            add(mblk, scale(de2, corner_weight(wm, wn) / wmn));
      }
    }

    // ---- top corner block: differentiate the two-sided system. With
    // x = c A x + RHS, the derivative solves (I - cA) x' = (1/W) A x + RHS',
    // which reuses the cached basis solution x1 for the corner unknown.
    {
      const int w = sum_.window(top);
      const auto& dpv = (top == 0) ? sum_.r_[0] : sum_.d_[tri(top, top - 1)];
      const auto& ddp = ad[tri(top, top - 1)];
      const auto& xv = sum_.r_[tri(top, top)];
      const Affine desig = add(ar[tri(top - 1, top - 1)][0],
                               scale(ar[tri(top, top - 1)][0], 2.0));
      const double c = p / w;
      const double w2 = static_cast<double>(w) * w;
      std::vector<double> sv(w, 0.0);
      for (int l = 1; l < w; ++l) sv[l] = dpv[l] + xv[l];
      const auto psv = detail::prefix1(sv);
      const auto pdd = detail::prefix1(ddp);
      std::vector<double> rhs_a(w, 0.0), rhs_b(w, 0.0);
      for (int i = 1; i < w; ++i) {
        const double val_term =
            (1.0 / w) * (detail::seg(psv, i + 1, w - 1) +
                         detail::seg(psv, 1, w - i));
        const Affine drv = detail::seg(pdd, i + 1, w - 1);
        const Affine drp2 = detail::seg(pdd, 1, w - i);
        rhs_a[i] = val_term + c * (drv.a + drp2.a) + (w - i) * desig.a / w2;
        rhs_b[i] = c * (drv.b + drp2.b) + (w - i) * desig.b / w2;
      }
      const auto ua = detail::solve_two_sided(rhs_a, c);
      const auto ub = detail::solve_two_sided(rhs_b, c);
      double tdpv = 0.0, txv = 0.0, tua = 0.0, tub = 0.0, tddp_a = 0.0,
             tddp_b = 0.0, tx1 = 0.0;
      for (int l = 1; l < w; ++l) {
        tdpv += dpv[l];
        txv += xv[l];
        tua += ua[l];
        tub += ub[l];
        tddp_a += ddp[l].a;
        tddp_b += ddp[l].b;
        tx1 += sum_.c6_x1_[l];
      }
      // d/dp of: e = (2p/W) (TOT(dp) + TOT(x)) + (esig + e)/W
      Affine de;
      de.a = ((2.0 / w) * (tdpv + txv) + (2.0 * p / w) * (tddp_a + tua) +
              desig.a / w) /
             sum_.c6_denom_;
      de.b = ((2.0 * p / w) * (tddp_b + tub) + desig.b / w) / sum_.c6_denom_;
      auto& r = ar[tri(top, top)];
      r.assign(w, Affine{});
      r[0] = de;
      for (int l = 1; l < w; ++l)
        r[l] = {ua[l] + de.a * sum_.c6_x1_[l], ub[l] + de.b * sum_.c6_x1_[l]};
      ad[tri(top, top)] = r;
      Affine acc{};
      double accv = 0.0;
      for (int l = 1; l < w; ++l) {
        accv += sv[l] * diag_weight(l, w);
        acc = add(acc, scale(add(ddp[l], r[l]), diag_weight(l, w)));
      }
      Affine mblk = {2.0 * ((1.0 / w) * accv + c * acc.a), 2.0 * c * acc.b};
      const Affine etot = add(desig, de);
      amass[tri(top, top)] =
          add(mblk, scale(etot, corner_weight(w, w) / w2));
    }

    // ---- pin s with the derivative of the normalization.
    Affine total{};
    for (int m = 0; m < mM; ++m)
      for (int n = 0; n <= m; ++n)
        total = add(total, scale(amass[tri(m, n)], m == n ? 1.0 : 2.0));
    require(std::abs(total.b) > 1e-300, errc::singular_system,
            "derivative normalization has no solution");
    s_ = -total.a / total.b;

    dr_.assign(nblocks, {});
    dd_.assign(nblocks, {});
    dmass_.assign(nblocks, 0.0);
    for (int b = 0; b < nblocks; ++b) {
      dr_[b].resize(ar[b].size());
      for (std::size_t k = 0; k < ar[b].size(); ++k)
        dr_[b][k] = ar[b][k].a + ar[b][k].b * s_;
      dd_[b].resize(ad[b].size());
      for (std::size_t k = 0; k < ad[b].size(); ++k)
        dd_[b][k] = ad[b][k].a + ad[b][k].b * s_;
      dmass_[b] = amass[b].a + amass[b].b * s_;
    }
    deta_ = 0.0;
    for (int m = 0; m < mM; ++m)
      for (int n = 0; n <= m; ++n) {
        double acc = 0.0;
        for (std::size_t k = 1; k < dr_[tri(m, n)].size(); ++k)
          acc += dr_[tri(m, n)][k];
        for (std::size_t k = 1; k < dd_[tri(m, n)].size(); ++k)
          acc += dd_[tri(m, n)][k];
        deta_ += (m == n ? 1.0 : 2.0) * acc;
      }
  }

  static Affine add(Affine x, Affine y) { return {x.a + y.a, x.b + y.b}; }
  static Affine scale(Affine x, double k) { return {x.a * k, x.b * k}; }
  // value-term v plus c * affine term: the product-rule combination.
  static Affine axpy(double v, Affine x, double c) {
    return {v + c * x.a, c * x.b};
  }

  const StationarySummary& sum_;
  std::vector<std::vector<double>> dr_, dd_;
  std::vector<double> dmass_;
  double s_ = 0.0, deta_ = 0.0;
};

// ---------------------------------------------------------------------------
// Coupled fixed point: p = 1 - (1 - eta(p))^(N-1).
// ---------------------------------------------------------------------------

struct CouplingSolution {
  double p = 0.0;
  double eta = 0.0;
  int iterations = 0;
  bool used_bisection = false;
  double residual = 0.0;  // |(1 - eta)^(N-1) + p - 1| at the returned root
};

namespace detail {
inline double coupling_gap(double eta, int n, double p) {
  return std::pow(1.0 - eta, n - 1) + p - 1.0;
}
}  // namespace detail

// Damped Newton iteration on g(p) = (1-eta(p))^(N-1) + p - 1 with the exact
// derivative d eta/dp from the summary-derivative pass. g is strictly
// increasing (eta falls as collisions rise), so a sign-preserving bracket is
// maintained; a proposal outside the bracket is halved toward the current
// iterate, and after three such rejected proposals the solve finishes by
// bisection on the bracket.
inline CouplingSolution solve_coupling_newton(const ProtocolParams& pp,
                                              double tol = 1e-12,
                                              int max_iter = 100) {
  validate(pp);
  require(tol > 0.0, errc::invalid_params, "tol must be positive");
  const int n = pp.n_pairs;
  if (n == 1) {
    const StationarySummary s(pp, 0.0);
    return {0.0, s.eta(), 0, false, 0.0};
  }
  double lo = 1e-12, hi = 1.0 - 1e-12;
  double p = 0.5, eta = 0.0, g = 0.0;
  int rejected = 0;
  for (int it = 1; it <= max_iter; ++it) {
    const StationarySummary s(pp, p);
    eta = s.eta();
    g = detail::coupling_gap(eta, n, p);
    if (std::abs(g) < tol)
      return {p, eta, it, false, std::abs(g)};
    if (g < 0.0)
      lo = p;
    else
      hi = p;
    if (rejected >= 3) break;
    const SummaryDerivatives ds(s);
    const double slope =
        1.0 - (n - 1) * std::pow(1.0 - eta, n - 2) * ds.deta();
    double cand = p - g / slope;
    bool ok = std::isfinite(cand) && cand > lo && cand < hi;
    for (int h = 0; h < 3 && !ok; ++h) {  // half-step damping
      cand = p + 0.5 * (cand - p);
      ok = std::isfinite(cand) && cand > lo && cand < hi;
    }
    if (!ok) {
      ++rejected;
      cand = 0.5 * (lo + hi);
    }
    p = cand;
  }
  // bisection finish on the maintained bracket
  int extra = 0;
  while (hi - lo > tol && extra < 200) {
    const double mid = 0.5 * (lo + hi);
    const StationarySummary s(pp, mid);
    eta = s.eta();
    g = detail::coupling_gap(eta, n, mid);
    if (g < 0.0)
      lo = mid;
    else
      hi = mid;
    p = mid;
    ++extra;
  }
  const StationarySummary s(pp, p);
  eta = s.eta();
  g = detail::coupling_gap(eta, n, p);
  require(std::abs(g) < std::sqrt(tol), errc::no_convergence,
          "fixed point did not converge");
  return {p, eta, max_iter + extra, true, std::abs(g)};
}

// Derivative-free oracle for the same root: bisection on
// f(p) = 1 - (1-eta(p))^(N-1) - p.
inline CouplingSolution solve_coupling_bisection(const ProtocolParams& pp,
                                                 double tol = 1e-12) {
  validate(pp);
  require(tol > 0.0, errc::invalid_params, "tol must be positive");
  const int n = pp.n_pairs;
  if (n == 1) {
    const StationarySummary s(pp, 0.0);
    return {0.0, s.eta(), 0, true, 0.0};
  }
  double lo = 0.0, hi = 1.0 - 1e-12;
  const double flo =
      1.0 - std::pow(1.0 - StationarySummary(pp, lo).eta(), n - 1) - lo;
  const double fhi =
      1.0 - std::pow(1.0 - StationarySummary(pp, hi).eta(), n - 1) - hi;
  require(flo >= 0.0 && fhi < 0.0, errc::no_sign_change,
          "no sign change on [0, 1)");
  int it = 0;
  while (hi - lo > tol && it < 200) {
    const double mid = 0.5 * (lo + hi);
    const double f =
        1.0 - std::pow(1.0 - StationarySummary(pp, mid).eta(), n - 1) - mid;
    if (f >= 0.0)
      lo = mid;
    else
      hi = mid;
    ++it;
  }
  const double p = 0.5 * (lo + hi);
  const StationarySummary s(pp, p);
  return {p, s.eta(), it, true,
          std::abs(detail::coupling_gap(s.eta(), n, p))};
}

// ---------------------------------------------------------------------------
// Throughput
// ---------------------------------------------------------------------------

struct ThroughputBreakdown {
  double nu = 0.0;            // P(an epoch is a single successful exchange)
  double offered_load = 0.0;  // L_o
  double capacity = 0.0;      // payload symbols per symbol time (direct form)
  double capacity_load_form = 0.0;  // same, via the offered-load identity
};

// Channel capacity of the double-station protocol for N pairs with per-pair
// attempt probability eta. A successful exchange delivers BOTH stations'
// data frames superimposed in the same symbols, so each success carries
// 2 * payload symbols. Returns 0 at eta == 0 (the idle-channel limit);
// throws DegenerateEta outside [0, 1).
inline ThroughputBreakdown ds_throughput_detail(double eta, int n_pairs,
                                                const FrameTimings& t) {
  require(n_pairs >= 1, errc::invalid_params, "n_pairs must be >= 1");
  require(eta >= 0.0 && eta < 1.0, errc::degenerate_eta,
          "attempt probability must lie in [0, 1)");
  t.validate();
  ThroughputBreakdown out;
  if (eta == 0.0) return out;
  const int n = n_pairs;
  const double ts = t.t_success(), tc = t.t_collision(), tau = t.slot;
  const double idle = std::pow(1.0 - eta, n);
  const double nu = n * eta * std::pow(1.0 - eta, n - 1);
  const double payload = 2.0 * t.payload;
  out.nu = nu;
  out.capacity =
      payload * nu / (ts * nu + tc * (1.0 - nu - idle) + tau * idle);
  out.offered_load = nu / (tc / tau - idle * (tc / tau - 1.0));
  out.capacity_load_form = payload / (ts + tau / out.offered_load - tc);
  return out;
}

inline double ds_throughput(double eta, int n_pairs, const FrameTimings& t) {
  const ThroughputBreakdown b = ds_throughput_detail(eta, n_pairs, t);
  if (b.nu > 0.0)
    require(std::abs(b.capacity - b.capacity_load_form) <=
                1e-12 * std::max(1.0, std::abs(b.capacity)),
            errc::degenerate_eta,
            "throughput forms disagree; model assumptions violated");
  return b.capacity;
}

// Fixed point + throughput in one call.
inline double analytic_capacity(const ProtocolParams& pp,
                                const FrameTimings& t) {
  const CouplingSolution fp = solve_coupling_newton(pp);
  return ds_throughput(fp.eta, pp.n_pairs, t);
}

// ---------------------------------------------------------------------------
// Conventional single-station RTS baseline (one counter per station,
// standard binary exponential backoff, same timing table but without the
// partner handshake frames). Used as the comparison curve.
// ---------------------------------------------------------------------------

struct BaselineSolution {
  double tau = 0.0;  // per-station attempt probability
  double p = 0.0;    // conditional collision probability
  double capacity = 0.0;
};

inline BaselineSolution baseline_csma_detail(int n_stations, int w0,
                                             int stages,
                                             const FrameTimings& t,
                                             double tol = 1e-13) {
  validate(ProtocolParams{.n_pairs = 1, .w0 = w0, .stages = stages});
  require(n_stations >= 1, errc::invalid_params, "n_stations must be >= 1");
  t.validate();
  // attempt probability of one station at collision probability p; the
  // geometric series keeps the expression smooth at p = 1/2.
  const auto tau_of = [&](double p) {
    double series = 0.0, term = 1.0;
    for (int k = 0; k < stages - 1; ++k) {
      series += term;
      term *= 2.0 * p;
    }
    return 2.0 / ((w0 + 1.0) + p * w0 * series);
  };
  double p = 0.0;
  if (n_stations > 1) {
    double lo = 0.0, hi = 1.0;
    int it = 0;
    // f(p) = p - 1 + (1 - tau(p))^(n-1): f(0) <= 0, f(1) > 0.
    while (hi - lo > tol && it < 200) {
      const double mid = 0.5 * (lo + hi);
      const double f =
          mid - 1.0 + std::pow(1.0 - tau_of(mid), n_stations - 1);
      if (f < 0.0)
        lo = mid;
      else
        hi = mid;
      ++it;
    }
    require(it < 200, errc::no_convergence, "baseline fixed point stalled");
    p = 0.5 * (lo + hi);
  }
  const double tau = tau_of(p);
  const double n = n_stations;
  const double idle = std::pow(1.0 - tau, n);
  const double succ = n * tau * std::pow(1.0 - tau, n - 1);
  const double coll = 1.0 - idle - succ;
  const double denom = idle * t.slot + succ * t.t_success_baseline() +
                       coll * t.t_collision_baseline();
  return {tau, p, t.payload * succ / denom};
}

inline double baseline_csma_throughput(int n_stations, int w0, int stages,
                                       const FrameTimings& t) {
  return baseline_csma_detail(n_stations, w0, stages, t).capacity;
}

// Attempt probability of a pair whose two counters are redrawn uniformly on
// a fixed window W after every event (no doubling): the renewal argument
// gives eta = (W-1) / (W^2/3 + W/2 + 1/6). Used by the population optimizer.
inline double eta_uniform_window(int w) {
  require(w >= 2, errc::invalid_params, "window must be >= 2");
  const double wd = w;
  return (wd - 1.0) / (wd * wd / 3.0 + wd / 2.0 + 1.0 / 6.0);
}

}  // namespace dscsma
