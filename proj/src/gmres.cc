#include "snmge/gmres.h"

#include <chrono>
#include <cmath>

#include "snmge/moment_vector.h"

namespace snmge {

namespace {

constexpr double kReorthThreshold = 1e-8;
constexpr double kBreakdownFloor = 1e-300;

void axpy(Vec& y, double a, const Vec& x) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// y = g solved through the rotated Hessenberg columns (upper triangular).
Vec back_substitute(const std::vector<Vec>& hcols, const Vec& g, int m) {
  Vec y(m);
  for (int i = m - 1; i >= 0; --i) {
    double s = g[i];
    for (int k = i + 1; k < m; ++k) s -= hcols[k][i] * y[k];
    y[i] = s / hcols[i][i];
  }
  return y;
}

}  // namespace

GmresResult gmres_solve(const LinearOp& apply_a, const Vec& b,
                        const GmresOptions& options, const LinearOp& precond) {
  GmresResult result;
  const size_t n = b.size();
  result.x.assign(n, 0.0);

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    result.res_history.push_back(0.0);
    result.iter_seconds.push_back(0.0);
    return result;
  }

  using clock = std::chrono::steady_clock;
  auto mark = clock::now();
  auto take_split = [&mark]() {
    const auto now = clock::now();
    const double s = std::chrono::duration<double>(now - mark).count();
    mark = now;
    return s;
  };

  auto true_rel_residual = [&](const Vec& x) {
    Vec ax = apply_a(x);
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double d = b[i] - ax[i];
      s += d * d;
    }
    return std::sqrt(s) / bnorm;
  };

  int total = 0;
  bool done = false;
  while (!done) {
    // Residual of the current iterate; the first cycle starts from zero.
    Vec r = b;
    if (total > 0) {
      Vec ax = apply_a(result.x);
      for (size_t i = 0; i < n; ++i) r[i] -= ax[i];
    }
    double rnorm = norm2(r);
    if (rnorm / bnorm <= options.tol) {
      result.final_residual = rnorm / bnorm;
      result.status = SolveStatus::converged;
      break;
    }
    if (!std::isfinite(rnorm)) {
      result.status = SolveStatus::diverged;
      result.final_residual = rnorm / bnorm;
      break;
    }

    const int budget = options.max_iters - total;
    if (budget <= 0) {
      result.status = SolveStatus::max_iters;
      result.final_residual = rnorm / bnorm;
      break;
    }
    const int dim = options.restart > 0 ? std::min(options.restart, budget) : budget;

    std::vector<Vec> basis;
    basis.reserve(dim + 1);
    {
      Vec v0 = r;
      for (double& e : v0) e /= rnorm;
      basis.push_back(std::move(v0));
    }
    std::vector<Vec> hcols;   // column j holds rotated H(0..j+1, j)
    Vec cs, sn;
    Vec g(1, rnorm);

    int m = 0;                // columns completed this cycle
    bool breakdown = false;
    bool cycle_converged = false;

    for (int j = 0; j < dim; ++j) {
      Vec z = precond ? precond(basis[j]) : basis[j];
      Vec w = apply_a(z);
      const double wnorm_in = norm2(w);

      Vec h(j + 2, 0.0);
      for (int i = 0; i <= j; ++i) {
        const double p = dot(basis[i], w);
        h[i] = p;
        axpy(w, -p, basis[i]);
      }
      // One reorthogonalization pass when the first sweep left a visible
      // component along the basis.
      double maxproj = 0.0;
      Vec h2(j + 1, 0.0);
      for (int i = 0; i <= j; ++i) {
        h2[i] = dot(basis[i], w);
        maxproj = std::max(maxproj, std::fabs(h2[i]));
      }
      if (maxproj > kReorthThreshold * std::max(wnorm_in, 1.0)) {
        for (int i = 0; i <= j; ++i) {
          h[i] += h2[i];
          axpy(w, -h2[i], basis[i]);
        }
      }
      const double wnorm = norm2(w);
      h[j + 1] = wnorm;

      // Previous rotations, then a new one that zeroes h[j+1].
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * h[i] + sn[i] * h[i + 1];
        h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
        h[i] = t;
      }
      if (wnorm <= kBreakdownFloor * std::max(1.0, std::fabs(h[j]))) {
        breakdown = true;
        cs.push_back(1.0);
        sn.push_back(0.0);
        g.push_back(0.0);
      } else {
        const double denom = std::hypot(h[j], h[j + 1]);
        cs.push_back(h[j] / denom);
        sn.push_back(h[j + 1] / denom);
        h[j] = denom;
        h[j + 1] = 0.0;
        g.push_back(-sn[j] * g[j]);
        g[j] *= cs[j];
      }
      hcols.push_back(std::move(h));
      ++m;
      ++total;

      const double rel = std::fabs(g[j + 1]) / bnorm;
      result.res_history.push_back(rel);
      result.iter_seconds.push_back(take_split());
      result.final_residual = rel;
      if (!std::isfinite(rel)) {
        result.status = SolveStatus::diverged;
        done = true;
        break;
      }
      if (breakdown) {
        done = true;
        break;
      }
      if (rel <= options.tol) {
        cycle_converged = true;
        break;
      }

      Vec v = w;
      for (double& e : v) e /= wnorm;
      basis.push_back(std::move(v));
    }

    if (m > 0 && result.status != SolveStatus::diverged) {
      Vec y = back_substitute(hcols, g, m);
      Vec update(n, 0.0);
      for (int j = 0; j < m; ++j) axpy(update, y[j], basis[j]);
      if (precond) update = precond(update);
      axpy(result.x, 1.0, update);
    }

    if (breakdown) {
      // The Krylov space became invariant; the subspace solution is exact in
      // exact arithmetic, so trust it only if the explicit residual agrees.
      const double rel = true_rel_residual(result.x);
      result.final_residual = rel;
      result.res_history.back() = rel;
      result.status =
          rel <= options.tol ? SolveStatus::converged : SolveStatus::diverged;
      break;
    }
    if (result.status == SolveStatus::diverged) break;
    if (cycle_converged) {
      result.status = SolveStatus::converged;
      break;
    }
    if (total >= options.max_iters) {
      result.status = SolveStatus::max_iters;
      break;
    }
    // Otherwise restart from the updated iterate.
  }

  result.iterations = total;
  return result;
}

}  // namespace snmge
