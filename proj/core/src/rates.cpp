#include "sobreg/rates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "sobreg/estimators.hpp"
#include "sobreg/fredholm.hpp"
#include "sobreg/seeding.hpp"

namespace sobreg {

namespace {

constexpr double kThresholdGuard = 0.05;

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(lo < hi) || count < 2) {
    throw std::invalid_argument("log grid requires 0 < lo < hi and count >= 2");
  }
  std::vector<double> g(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::size_t default_sigma_count(double lo, double hi) {
  const double decades = std::log10(hi / lo);
  return std::max<std::size_t>(3, static_cast<std::size_t>(std::lround(15.0 * decades)) + 1);
}

// Runs tasks [0, n) on `jobs` threads; task i writes only its own slot.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  jobs = std::max<std::size_t>(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  for (std::size_t t = 0; t < std::min(jobs, n); ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) task(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

RateFit fit_rate(std::span<const double> x, std::span<const double> values,
                 const std::vector<std::size_t>& exclusions) {
  if (x.size() != values.size()) {
    throw std::invalid_argument("fit_rate: x and values must have equal length");
  }
  std::vector<bool> drop(x.size(), false);
  for (std::size_t idx : exclusions) {
    if (idx >= x.size()) throw std::invalid_argument("fit_rate: exclusion index out of range");
    drop[idx] = true;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (drop[i]) continue;
    if (!(x[i] > 0.0) || !(values[i] > 0.0)) {
      throw std::invalid_argument("fit_rate: log-log fit needs strictly positive data");
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(values[i]));
  }
  if (lx.size() < 3) {
    throw std::invalid_argument("fit_rate: fewer than 3 usable points after exclusions");
  }
  const std::size_t n = lx.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = lx[i] - mx, dy = ly[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: degenerate x grid");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points_used = n;
  fit.excluded = exclusions;
  if (syy == 0.0) {
    fit.r_squared = 1.0;  // constant data, exactly fit by slope 0
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
      ss_res += e * e;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

const char* to_string(RateRegime r) {
  switch (r) {
    case RateRegime::OverSmoothing: return "over";
    case RateRegime::UnderSmoothing: return "under";
    case RateRegime::Threshold: return "threshold";
  }
  return "?";
}

TheoreticalRates theoretical_rates(double s, double r, double beta) {
  if (!(s >= 0.0)) throw std::invalid_argument("s must be >= 0");
  if (!(beta >= 1.0)) throw std::invalid_argument("beta must be >= 1");
  if (!(r > smoothness_lower_bound(beta))) {
    throw std::invalid_argument("r must exceed (beta-1)/2");
  }
  TheoreticalRates out;
  out.threshold = r - (beta + 1.0) / 2.0;
  if (std::abs(s - out.threshold) < kThresholdGuard) {
    out.regime = RateRegime::Threshold;
    return out;
  }
  if (s > out.threshold) {
    out.regime = RateRegime::OverSmoothing;
    out.lambda_exponent = (2.0 * s + 2.0) / (2.0 * r + 1.0);
    out.error_exponent = 2.0 - 2.0 * beta / (2.0 * r + 1.0);
  } else {
    out.regime = RateRegime::UnderSmoothing;
    out.lambda_exponent = (2.0 * s + 2.0) / (2.0 * s + 2.0 + beta);
    out.error_exponent = 2.0 - 2.0 * beta / (2.0 * s + 2.0 + beta);
  }
  return out;
}

std::vector<OracleRateRow> run_oracle_rate_experiment(const OracleRateConfig& config) {
  config.lambda_grid.validate();
  const std::size_t sigma_count = config.sigma_count > 0
                                      ? config.sigma_count
                                      : default_sigma_count(config.sigma_lo, config.sigma_hi);
  const std::vector<double> sigmas = log_grid(config.sigma_lo, config.sigma_hi, sigma_count);
  const double beta = beta_of(config.family, config.theta);

  struct Cell {
    double r, s;
  };
  std::vector<Cell> cells;
  for (double r : config.r_values) {
    for (double s : config.s_values) cells.push_back({r, s});
  }
  std::vector<OracleRateRow> rows(cells.size());

  parallel_for(cells.size(), config.jobs, [&](std::size_t ci) {
    const auto [r, s] = cells[ci];
    const std::uint64_t sp_seed = derive_seed(config.master_seed, "oracle-rates/spectrum");
    const std::uint64_t tf_seed =
        derive_seed(config.master_seed, "oracle-rates/truth/r=" + std::to_string(r));
    const Spectrum sp = build_spectrum(config.family, config.theta, config.n_modes,
                                       config.spectrum_bounds, sp_seed);
    const TrueFunction tf = build_true_function(sp, r, config.coef_bounds, tf_seed);

    OracleRateRow row;
    row.r = r;
    row.s = s;
    row.sigma = sigmas;
    row.theory = theoretical_rates(s, r, beta);
    for (double sigma : sigmas) {
      const SelectionResult sel = oracle_lambda(sp, tf, sigma, s, config.lambda_grid);
      row.lambda_star.push_back(sel.lambda_star);
      row.error_star.push_back(expected_error(sp, tf, sigma, s, sel.lambda_star));
      if (sel.boundary) row.excluded_sigma.push_back(row.lambda_star.size() - 1);
    }
    row.lambda_fit = fit_rate(row.sigma, row.lambda_star, row.excluded_sigma);
    row.error_fit = fit_rate(row.sigma, row.error_star, row.excluded_sigma);
    rows[ci] = std::move(row);
  });
  return rows;
}

PracticalResult run_practical_experiment(const PracticalConfig& config) {
  config.lambda_grid.validate();
  if (config.replicates == 0) throw std::invalid_argument("need at least one replicate");
  if (config.methods.empty()) throw std::invalid_argument("need at least one selector");

  const FredholmProblem problem = build_problem(config.mesh_points, config.rank_threshold);
  const Spectrum sp = problem.to_spectrum();
  const TrueFunction tf = build_true_function(
      sp, config.smoothness, {}, derive_seed(config.master_seed, "practical/truth"), {},
      CoefficientLaw::MagnitudeBand, config.beta);

  PracticalResult result;
  result.retained_modes = sp.size();
  result.sigma_grid = log_grid(config.sigma_lo, config.sigma_hi, config.sigma_count);
  if (config.noise_scale == NoiseScale::RelativeMesh) {
    double signal2 = 0.0;  // ||L phi*||^2 = sum lambda_i c_i^2
    for (std::size_t i = 0; i < sp.size(); ++i) {
      signal2 += sp.eigenvalues[i] * tf.coefficients[i] * tf.coefficients[i];
    }
    double mean_w = 0.0;
    for (double w : problem.mesh.weights) mean_w += w;
    mean_w /= static_cast<double>(problem.mesh.weights.size());
    result.noise_scale_factor = std::sqrt(signal2) * std::sqrt(mean_w);
  } else {
    result.noise_scale_factor = 1.0;
  }

  struct Cell {
    double s;
    std::size_t sigma_idx;
    std::size_t replicate;
  };
  std::vector<Cell> cells;
  for (double s : config.s_values) {
    for (std::size_t i = 0; i < result.sigma_grid.size(); ++i) {
      for (std::size_t k = 0; k < config.replicates; ++k) cells.push_back({s, i, k});
    }
  }

  // Oracle selections do not depend on the replicate; compute once per (s, sigma).
  const bool want_oracle =
      std::find(config.methods.begin(), config.methods.end(), SelectionMethod::Oracle) !=
      config.methods.end();
  std::map<std::pair<double, std::size_t>, SelectionResult> oracle_cache;
  if (want_oracle) {
    for (double s : config.s_values) {
      for (std::size_t i = 0; i < result.sigma_grid.size(); ++i) {
        const double sigma_spec = result.noise_scale_factor * result.sigma_grid[i];
        oracle_cache.emplace(std::make_pair(s, i),
                             oracle_lambda(sp, tf, sigma_spec, s, config.lambda_grid));
      }
    }
  }

  std::vector<std::vector<PracticalRow>> cell_rows(cells.size());
  parallel_for(cells.size(), config.jobs, [&](std::size_t ci) {
    const Cell cell = cells[ci];
    const double sigma_nom = result.sigma_grid[cell.sigma_idx];
    const double sigma_spec = result.noise_scale_factor * sigma_nom;
    const NoiseDraw noise = sample_noise(
        sigma_spec, sp.size(),
        derive_seed(config.master_seed, "practical/rep=" + std::to_string(cell.replicate) +
                                            "/sigma=" + std::to_string(cell.sigma_idx)));
    const ObservationCoefficients obs = observe(sp, tf, noise);

    for (SelectionMethod method : config.methods) {
      PracticalRow row;
      row.s = cell.s;
      row.sigma = sigma_nom;
      row.sigma_spectral = sigma_spec;
      row.method = method;
      row.replicate = cell.replicate;
      try {
        SelectionResult sel;
        switch (method) {
          case SelectionMethod::Oracle:
            sel = oracle_cache.at(std::make_pair(cell.s, cell.sigma_idx));
            break;
          case SelectionMethod::LCurve:
            sel = lcurve_lambda(sp, obs, cell.s, config.lambda_grid);
            break;
          case SelectionMethod::Gcv:
            sel = gcv_lambda(sp, obs, cell.s, config.lambda_grid);
            break;
        }
        row.lambda = sel.lambda_star;
        row.boundary = sel.boundary;
        row.error = realized_error(sp, tf, noise, cell.s, sel.lambda_star);
      } catch (const std::exception& e) {
        row.failed = true;
        row.failure = e.what();
      }
      cell_rows[ci].push_back(std::move(row));
    }
  });

  for (auto& rows : cell_rows) {
    for (auto& r : rows) result.rows.push_back(std::move(r));
  }
  return result;
}

PracticalChecks evaluate_practical_checks(const PracticalResult& result) {
  PracticalChecks checks;

  // Index rows by (s, sigma, method, replicate) for paired lookups.
  auto key = [](double s, double sigma, SelectionMethod m, std::size_t rep) {
    return std::make_tuple(s, sigma, static_cast<int>(m), rep);
  };
  std::map<std::tuple<double, double, int, std::size_t>, const PracticalRow*> index;
  std::vector<double> sigmas;
  std::vector<std::size_t> reps;
  for (const auto& row : result.rows) {
    index[key(row.s, row.sigma, row.method, row.replicate)] = &row;
    if (std::find(sigmas.begin(), sigmas.end(), row.sigma) == sigmas.end()) {
      sigmas.push_back(row.sigma);
    }
    if (std::find(reps.begin(), reps.end(), row.replicate) == reps.end()) {
      reps.push_back(row.replicate);
    }
  }
  std::sort(sigmas.begin(), sigmas.end());
  std::sort(reps.begin(), reps.end());

  // (a) s = 1: the L-curve error tracks the oracle error.
  checks.lcurve_tracks_oracle = true;
  for (double sigma : sigmas) {
    std::vector<double> ratios;
    for (std::size_t rep : reps) {
      auto lc = index.find(key(1.0, sigma, SelectionMethod::LCurve, rep));
      auto orc = index.find(key(1.0, sigma, SelectionMethod::Oracle, rep));
      if (lc == index.end() || orc == index.end()) continue;
      if (lc->second->failed || orc->second->failed) continue;
      if (orc->second->error > 0.0) ratios.push_back(lc->second->error / orc->second->error);
    }
    if (ratios.empty()) continue;
    PracticalChecks::PerSigma ps;
    ps.sigma = sigma;
    ps.value = median(ratios);
    ps.pass = ps.value <= 10.0;
    checks.lcurve_tracks_oracle = checks.lcurve_tracks_oracle && ps.pass;
    checks.lcurve_error_ratio.push_back(ps);
  }
  if (checks.lcurve_error_ratio.empty()) checks.lcurve_tracks_oracle = false;

  // (b) per-replicate spread of the L-curve lambda trajectory, s = 2 vs s = 1.
  auto spread_for = [&](double s) -> double {
    std::vector<double> spreads;
    for (std::size_t rep : reps) {
      double lo = 0.0, hi = 0.0;
      bool any = false;
      for (double sigma : sigmas) {
        auto it = index.find(key(s, sigma, SelectionMethod::LCurve, rep));
        if (it == index.end() || it->second->failed) continue;
        const double l = it->second->lambda;
        if (!any) {
          lo = hi = l;
          any = true;
        } else {
          lo = std::min(lo, l);
          hi = std::max(hi, l);
        }
      }
      if (any && lo > 0.0) spreads.push_back(hi / lo);
    }
    return spreads.empty() ? 0.0 : median(spreads);
  };
  checks.lambda_spread_s1 = spread_for(1.0);
  checks.lambda_spread_s2 = spread_for(2.0);
  checks.overs_smoothing_unstable =
      checks.lambda_spread_s1 > 0.0 && checks.lambda_spread_s2 > checks.lambda_spread_s1;

  // (c) s = 0: the L-curve under-selects relative to the oracle.
  checks.under_smoothing_undershoots = true;
  for (double sigma : sigmas) {
    std::vector<double> lams;
    double oracle_lam = 0.0;
    for (std::size_t rep : reps) {
      auto lc = index.find(key(0.0, sigma, SelectionMethod::LCurve, rep));
      if (lc != index.end() && !lc->second->failed) lams.push_back(lc->second->lambda);
      auto orc = index.find(key(0.0, sigma, SelectionMethod::Oracle, rep));
      if (orc != index.end() && !orc->second->failed) oracle_lam = orc->second->lambda;
    }
    if (lams.empty() || oracle_lam <= 0.0) continue;
    PracticalChecks::PerSigma ps;
    ps.sigma = sigma;
    ps.value = median(lams) / oracle_lam;
    ps.pass = ps.value <= 1.0;
    checks.under_smoothing_undershoots = checks.under_smoothing_undershoots && ps.pass;
    checks.s0_lambda_ratio.push_back(ps);
  }
  if (checks.s0_lambda_ratio.empty()) checks.under_smoothing_undershoots = false;

  return checks;
}

}  // namespace sobreg
