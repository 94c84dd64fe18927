#include "flowtrap/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "flowtrap/cf.hpp"
#include "flowtrap/error.hpp"
#include "flowtrap/gft.hpp"

namespace flowtrap {

void finalize_report(RunReport& report, const Oracle& oracle) {
  const LedgerSnapshot l = oracle.ledger();
  report.value_queries = l.value_queries;
  report.gradient_queries = l.gradient_queries;
  report.depth = l.depth_rounds;
  report.proj_grad_norm = projected_gradient_norm(oracle.function(), report.point);
  report.verified = report.proj_grad_norm <= report.claim_level;
}

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Gft:
      return "gft";
    case Algorithm::Cf:
      return "cf";
    case Algorithm::Vavasis:
      return "vavasis";
    case Algorithm::Grid:
      return "grid";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_string(const std::string& s) {
  for (Algorithm a : {Algorithm::Gft, Algorithm::Cf, Algorithm::Vavasis, Algorithm::Grid}) {
    if (s == to_string(a)) return a;
  }
  return std::nullopt;
}

RunReport run_algorithm(Algorithm algo, Oracle& oracle, double eps, const RunOptions& options) {
  switch (algo) {
    case Algorithm::Gft:
      return run_gft(oracle, eps, {options.record_audit});
    case Algorithm::Cf:
      return run_cf(oracle, eps, {options.record_audit});
    case Algorithm::Grid:
      return grid_search(oracle, eps, options.grid_cap);
    case Algorithm::Vavasis: {
      WarmStartConfig cfg = WarmStartConfig::with_default_delta(eps, oracle.dim());
      if (options.vavasis_delta) cfg.delta = *options.vavasis_delta;
      return vavasis_warm_start(oracle, cfg, options.grid_cap);
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown algorithm");
}

RunReport run_once(Algorithm algo, const std::string& function, std::size_t d, double eps, std::uint64_t seed,
                   const RunOptions& options) {
  Oracle oracle(catalog(function, d, seed));
  RunReport r = run_algorithm(algo, oracle, eps, options);
  r.function = function;
  return r;
}

LineFit fit_loglog(std::span<const double> eps, std::span<const double> queries) {
  if (eps.size() != queries.size() || eps.size() < 2) {
    fail(ErrorCode::InvalidArgument, "fit_loglog: need at least two paired points");
  }
  const auto n = static_cast<double>(eps.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    sx += std::log(1.0 / eps[i]);
    sy += std::log(queries[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double dx = std::log(1.0 / eps[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(queries[i]) - my);
  }
  if (!(sxx > 0.0)) fail(ErrorCode::InvalidArgument, "fit_loglog: eps values must differ");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

void validate(const SweepPlan& plan) {
  if (plan.algorithms.empty() || plan.eps.empty() || plan.dims.empty() || plan.functions.empty()) {
    fail(ErrorCode::InvalidArgument, "sweep: algorithm, eps, dimension and function lists must be non-empty");
  }
  for (std::size_t i = 0; i < plan.eps.size(); ++i) {
    if (!(plan.eps[i] > 0.0)) fail(ErrorCode::InvalidArgument, "sweep: eps values must be positive");
    if (i > 0 && !(plan.eps[i] < plan.eps[i - 1])) {
      fail(ErrorCode::InvalidArgument, "sweep: eps values must be strictly decreasing");
    }
  }
  for (std::size_t d : plan.dims) {
    if (d == 0) fail(ErrorCode::InvalidArgument, "sweep: dimensions must be positive");
  }
  const auto& names = catalog_names();
  for (const auto& f : plan.functions) {
    if (std::find(names.begin(), names.end(), f) == names.end()) {
      fail(ErrorCode::UnknownName, "sweep: unknown function '" + f + "'");
    }
  }
}

bool SweepResult::all_verified() const {
  return std::all_of(rows.begin(), rows.end(), [](const RunRow& r) { return r.verified(); });
}

SweepResult sweep_and_fit(const SweepPlan& plan, const RunOptions& options) {
  validate(plan);
  SweepResult out;
  for (Algorithm a : plan.algorithms) {
    for (const auto& fn : plan.functions) {
      for (std::size_t d : plan.dims) {
        std::vector<double> eps_ok, queries_ok;
        for (double eps : plan.eps) {
          RunRow row{a, fn, d, eps, std::nullopt, {}};
          try {
            row.report = run_once(a, fn, d, eps, plan.seed, options);
          } catch (const Error& e) {
            row.error = e.what();
          }
          if (row.verified()) {
            eps_ok.push_back(eps);
            queries_ok.push_back(static_cast<double>(std::max<std::uint64_t>(1, row.report->total_queries())));
          }
          out.rows.push_back(std::move(row));
        }

        SeriesFit fit{a, fn, d, std::numeric_limits<double>::quiet_NaN(), eps_ok.size(), false, {}};
        if (eps_ok.size() >= 2) fit.exponent = fit_loglog(eps_ok, queries_ok).slope;
        if (eps_ok.size() < 3) {
          fit.flagged = true;
          fit.note = "fewer than 3 successful runs";
        } else if (std::log10(eps_ok.front() / eps_ok.back()) < 2.0 - 1e-9) {
          fit.flagged = true;
          fit.note = "eps spans less than 2 decades";
        }
        out.fits.push_back(std::move(fit));
      }
    }
  }
  return out;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string to_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "algo,fn,d,eps,queries_value,queries_grad,depth,steps,proj_grad_norm,wall_ms\n";
  for (const auto& row : result.rows) {
    os << to_string(row.algorithm) << ',' << row.function << ',' << row.d << ',' << num(row.eps) << ',';
    if (row.report) {
      const RunReport& r = *row.report;
      os << r.value_queries << ',' << r.gradient_queries << ',' << r.depth << ',' << r.steps << ','
         << num(r.proj_grad_norm) << ',' << r.wall_time_ms << '\n';
    } else {
      os << ",,,,nan,\n";
    }
  }
  for (const auto& row : result.rows) {
    if (!row.report) {
      os << "# error," << to_string(row.algorithm) << ',' << row.function << ',' << row.d << ',' << num(row.eps)
         << ',' << row.error << '\n';
    } else if (!row.report->verified) {
      os << "# unverified," << to_string(row.algorithm) << ',' << row.function << ',' << row.d << ','
         << num(row.eps) << ",claim " << num(row.report->claim_level) << '\n';
    }
  }
  for (const auto& f : result.fits) {
    os << "# fit," << to_string(f.algorithm) << ',' << f.function << ',' << f.d << ",exponent=" << num(f.exponent)
       << ",points=" << f.points;
    if (f.flagged) os << ",flagged=" << f.note;
    os << '\n';
  }
  return os.str();
}

std::string to_json(const SweepResult& result) {
  using nlohmann::json;
  json runs = json::array();
  for (const auto& row : result.rows) {
    json j{{"algo", to_string(row.algorithm)}, {"fn", row.function}, {"d", row.d}, {"eps", row.eps}};
    if (row.report) {
      const RunReport& r = *row.report;
      j["queries_value"] = r.value_queries;
      j["queries_grad"] = r.gradient_queries;
      j["depth"] = r.depth;
      j["steps"] = r.steps;
      j["proj_grad_norm"] = r.proj_grad_norm;
      j["claim_level"] = r.claim_level;
      j["verified"] = r.verified;
      j["wall_ms"] = r.wall_time_ms;
      j["point"] = r.point;
    } else {
      j["verified"] = false;
      j["error"] = row.error;
    }
    runs.push_back(std::move(j));
  }
  json fits = json::array();
  for (const auto& f : result.fits) {
    json j{{"algo", to_string(f.algorithm)}, {"fn", f.function}, {"d", f.d}, {"points", f.points},
           {"flagged", f.flagged}};
    j["exponent"] = std::isfinite(f.exponent) ? json(f.exponent) : json(nullptr);
    if (f.flagged) j["note"] = f.note;
    fits.push_back(std::move(j));
  }
  json doc{{"schema_version", kJsonSchemaVersion}, {"runs", std::move(runs)}, {"fits", std::move(fits)},
           {"all_verified", result.all_verified()}};
  return doc.dump(2) + "\n";
}

}  // namespace flowtrap
