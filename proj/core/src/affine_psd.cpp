#include "coneray/affine_psd.hpp"

#include <cmath>

#include "coneray/error.hpp"

namespace coneray {

const char* slice_status_name(SliceStatus s) {
  switch (s) {
    case SliceStatus::Feasible: return "Feasible";
    case SliceStatus::Infeasible: return "Infeasible";
    case SliceStatus::Stalled: return "Stalled";
  }
  return "?";
}

namespace {

struct EigCache {
  std::vector<double> lam;                 // ascending
  std::vector<std::vector<double>> vecs;   // vecs[r] is the r-th eigenvector
};

SymMatrix assemble(const AffinePsdProblem& pb, const std::vector<double>& c) {
  SymMatrix g = pb.base;
  for (size_t k = 0; k < pb.directions.size(); ++k) {
    if (c[k] == 0.0) continue;
    const auto& m = pb.directions[k].a;
    for (size_t idx = 0; idx < g.a.size(); ++idx) g.a[idx] += c[k] * m[idx];
  }
  return g;
}

// Softened minimum -mu*log(sum_i exp(-lam_i/mu)) and its gradient in c.
double softmin_grad(const AffinePsdProblem& pb, const EigCache& e, double mu,
                    std::vector<double>* grad) {
  const int n = pb.base.n;
  double wsum = 0.0;
  std::vector<double> w(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t = (e.lam[i] - e.lam[0]) / mu;
    if (t > 40.0) break;  // weight below ~4e-18, ascending order
    w[i] = std::exp(-t);
    wsum += w[i];
  }
  double h = e.lam[0] - mu * std::log(wsum);
  if (grad) {
    grad->assign(pb.directions.size(), 0.0);
    for (size_t k = 0; k < pb.directions.size(); ++k) {
      const SymMatrix& m = pb.directions[k];
      double gk = 0.0;
      for (int i = 0; i < n; ++i) {
        if (w[i] == 0.0) continue;
        const std::vector<double>& u = e.vecs[i];
        double quad = 0.0;
        for (int r = 0; r < n; ++r) {
          double row = 0.0;
          for (int s = 0; s < n; ++s) row += m.at(r, s) * u[s];
          quad += u[r] * row;
        }
        gk += (w[i] / wsum) * quad;
      }
      (*grad)[k] = gk;
    }
  }
  return h;
}

EigCache eig_at(const AffinePsdProblem& pb, const std::vector<double>& c,
                SymMatrix* g_out) {
  SymMatrix g = assemble(pb, c);
  EigCache e;
  sym_eig(g, e.lam, e.vecs);
  if (g_out) *g_out = std::move(g);
  return e;
}

}  // namespace

SliceResult max_min_eig(const AffinePsdProblem& pb) {
  const int n = pb.base.n;
  if (n > 64) fail(Errc::RankExceeded, "affine psd problems support n <= 64");
  for (const auto& m : pb.directions) {
    if (m.n != n) fail(Errc::DimensionMismatch, "direction size mismatch");
  }
  const size_t k = pb.directions.size();

  double scale = std::max(1.0, pb.base.max_abs());
  for (const auto& m : pb.directions) scale = std::max(scale, m.max_abs());

  SliceResult res;
  res.c_star.assign(k, 0.0);
  std::vector<double> c(k, 0.0);
  EigCache e = eig_at(pb, c, &res.G);
  res.t_star = n > 0 ? e.lam[0] : 0.0;
  res.iterations = 0;

  if (k == 0 || n == 0) {
    res.status = res.t_star >= -pb.tolerance ? SliceStatus::Feasible
                                             : SliceStatus::Infeasible;
    return res;
  }

  const double grad_stop = 1e-8 * std::max(1.0, scale);
  bool infeasible_converged = false;
  const double logn = std::log(static_cast<double>(std::max(n, 2)));

  // fixed smoothing schedule
  const double mus[] = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  const int legs = 7;
  int iters_left = pb.max_iters;
  std::vector<double> grad, trial_c;

  for (int leg = 0; leg < legs && iters_left > 0 && !infeasible_converged;
       ++leg) {
    const double mu = mus[leg] * scale;
    const bool last = leg == legs - 1;
    double h = softmin_grad(pb, e, mu, &grad);
    double alpha = mu / scale;
    int leg_budget = last ? iters_left : std::min(iters_left, 600);
    bool leg_converged = false;

    while (leg_budget > 0 && iters_left > 0) {
      double gnorm = 0.0;
      for (double gk : grad) gnorm += gk * gk;
      gnorm = std::sqrt(gnorm);

      if (gnorm <= std::max(grad_stop, 1e-3 * mu)) {
        leg_converged = true;
        break;
      }

      // backtracking ascent step along the smoothed gradient
      bool accepted = false;
      for (int bt = 0; bt < 50; ++bt) {
        trial_c = c;
        for (size_t i = 0; i < k; ++i) trial_c[i] += alpha * grad[i];
        SymMatrix g_trial;
        EigCache e_trial = eig_at(pb, trial_c, &g_trial);
        double h_trial = softmin_grad(pb, e_trial, mu, nullptr);
        if (h_trial >= h + 0.25 * alpha * gnorm * gnorm) {
          c = trial_c;
          e = std::move(e_trial);
          h = h_trial;
          if (e.lam[0] > res.t_star) {
            res.t_star = e.lam[0];
            res.c_star = c;
            res.G = std::move(g_trial);
          }
          accepted = true;
          alpha *= 1.6;
          break;
        }
        alpha *= 0.5;
        if (alpha * gnorm < 1e-18 * std::max(1.0, scale)) break;
      }
      if (!accepted) {
        // the line search cannot improve the smoothed value any further, so
        // this leg is as converged as float arithmetic allows
        leg_converged = true;
        break;
      }
      softmin_grad(pb, e, mu, &grad);
      ++res.iterations;
      --leg_budget;
      --iters_left;
    }

    // The softened objective brackets the true one: softmin <= lambda_min <=
    // softmin + mu*log(n) at every point, and the leg just maximized the
    // smooth concave softmin. Its converged value plus the bracket therefore
    // caps lambda_min over the whole slice; once that ceiling sits below the
    // feasibility bar, no coefficient choice can reach it.
    if (leg_converged && h + mu * logn < -pb.tolerance) infeasible_converged = true;
  }

  if (res.t_star >= -pb.tolerance) {
    res.status = SliceStatus::Feasible;
  } else if (infeasible_converged) {
    res.status = SliceStatus::Infeasible;
  } else {
    res.status = SliceStatus::Stalled;
  }
  return res;
}

}  // namespace coneray
