#include "flowtrap/flowtrap.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "flowtrap/audit.hpp"
#include "flowtrap/error.hpp"
#include "flowtrap/flow.hpp"
#include "flowtrap/runner.hpp"

using namespace flowtrap;

struct ft_function {
  FunctionPtr f;
};

struct ft_oracle {
  explicit ft_oracle(FunctionPtr fn) : f(fn), oracle(std::move(fn)) {}
  FunctionPtr f;
  Oracle oracle;
};

struct ft_report {
  RunReport report;
  FunctionPtr f;
};

struct ft_sweep {
  SweepResult result;
  std::vector<std::unique_ptr<ft_report>> reports;
};

namespace {

thread_local std::string g_last_error;

ft_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:
      return FT_INVALID_ARGUMENT;
    case ErrorCode::Domain:
      return FT_DOMAIN;
    case ErrorCode::Invariant:
      return FT_INVARIANT;
    case ErrorCode::Budget:
      return FT_BUDGET;
    case ErrorCode::UnknownName:
      return FT_UNKNOWN_NAME;
    case ErrorCode::Io:
      return FT_IO;
  }
  return FT_INTERNAL;
}

template <class Fn>
ft_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FT_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FT_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return FT_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ft_algorithm to_c(Algorithm a) { return static_cast<ft_algorithm>(static_cast<int>(a)); }

Algorithm from_c(ft_algorithm a) {
  switch (a) {
    case FT_ALGO_GFT:
      return Algorithm::Gft;
    case FT_ALGO_CF:
      return Algorithm::Cf;
    case FT_ALGO_VAVASIS:
      return Algorithm::Vavasis;
    case FT_ALGO_GRID:
      return Algorithm::Grid;
  }
  fail(ErrorCode::InvalidArgument, "unknown algorithm id");
}

RunOptions to_options(const ft_run_options* opts) {
  RunOptions o;
  if (!opts) return o;
  if (opts->vavasis_delta > 0.0) o.vavasis_delta = opts->vavasis_delta;
  o.record_audit = opts->record_audit != 0;
  if (opts->grid_cap > 0) o.grid_cap = opts->grid_cap;
  return o;
}

}  // namespace

extern "C" {

const char* ft_last_error(void) { return g_last_error.c_str(); }

const char* ft_status_name(ft_status s) {
  switch (s) {
    case FT_OK:
      return "ok";
    case FT_INVALID_ARGUMENT:
      return "invalid argument";
    case FT_DOMAIN:
      return "domain error";
    case FT_INVARIANT:
      return "invariant violation";
    case FT_BUDGET:
      return "budget exceeded";
    case FT_UNKNOWN_NAME:
      return "unknown name";
    case FT_IO:
      return "i/o error";
    case FT_INTERNAL:
      return "internal error";
  }
  return "?";
}

void ft_string_free(char* s) { std::free(s); }

ft_status ft_function_from_catalog(const char* name, size_t d, uint64_t seed, ft_function** out) {
  return guarded([&] {
    require(name && out, "ft_function_from_catalog: null argument");
    *out = new ft_function{catalog(name, d, seed)};
  });
}

ft_status ft_function_from_callbacks(const char* name, size_t d, double smoothness, ft_value_fn value,
                                     ft_gradient_fn gradient, void* user, ft_function** out) {
  return guarded([&] {
    require(name && value && out && d > 0, "ft_function_from_callbacks: invalid argument");
    CallableFunction::ValueFn vf = [value, user, d](std::span<const double> x) { return value(x.data(), d, user); };
    CallableFunction::GradFn gf;
    if (gradient) {
      gf = [gradient, user, d](std::span<const double> x) {
        Point g(d);
        gradient(x.data(), d, g.data(), user);
        return g;
      };
    }
    auto fn = std::make_shared<CallableFunction>(name, d, smoothness, std::move(vf), std::move(gf));
    *out = new ft_function{normalize(std::move(fn))};
  });
}

void ft_function_destroy(ft_function* f) { delete f; }

size_t ft_function_dim(const ft_function* f) { return f ? f->f->dimension() : 0; }

ft_status ft_function_value(const ft_function* f, const double* x, double* out) {
  return guarded([&] {
    require(f && x && out, "ft_function_value: null argument");
    *out = f->f->value(std::span<const double>(x, f->f->dimension()));
  });
}

ft_status ft_function_grad_norm(const ft_function* f, const double* x, double* out) {
  return guarded([&] {
    require(f && x && out, "ft_function_grad_norm: null argument");
    *out = projected_gradient_norm(*f->f, std::span<const double>(x, f->f->dimension()));
  });
}

ft_status ft_oracle_create(const ft_function* f, ft_oracle** out) {
  return guarded([&] {
    require(f && out, "ft_oracle_create: null argument");
    *out = new ft_oracle(f->f);
  });
}

void ft_oracle_destroy(ft_oracle* o) { delete o; }

ft_status ft_oracle_query(ft_oracle* o, const double* x, double* out) {
  return guarded([&] {
    require(o && x && out, "ft_oracle_query: null argument");
    *out = o->oracle.query(std::span<const double>(x, o->oracle.dim()));
  });
}

ft_status ft_oracle_batch_query(ft_oracle* o, const double* xs, size_t n, double* out) {
  return guarded([&] {
    require(o && xs && out, "ft_oracle_batch_query: null argument");
    const std::size_t d = o->oracle.dim();
    std::vector<Point> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i].assign(xs + i * d, xs + (i + 1) * d);
    const auto v = o->oracle.batch_query(pts);
    std::copy(v.begin(), v.end(), out);
  });
}

ft_status ft_oracle_gradient(ft_oracle* o, const double* x, double* grad_out) {
  return guarded([&] {
    require(o && x && grad_out, "ft_oracle_gradient: null argument");
    const Point g = o->oracle.projected_gradient(std::span<const double>(x, o->oracle.dim()));
    std::copy(g.begin(), g.end(), grad_out);
  });
}

ft_status ft_oracle_ledger(const ft_oracle* o, ft_ledger* out) {
  return guarded([&] {
    require(o && out, "ft_oracle_ledger: null argument");
    const LedgerSnapshot s = o->oracle.ledger();
    *out = {s.value_queries, s.gradient_queries, s.depth_rounds};
  });
}

void ft_run_options_init(ft_run_options* opts) {
  if (!opts) return;
  opts->vavasis_delta = 0.0;
  opts->record_audit = 0;
  opts->grid_cap = 0;
}

ft_status ft_algorithm_from_name(const char* name, ft_algorithm* out) {
  return guarded([&] {
    require(name && out, "ft_algorithm_from_name: null argument");
    const auto a = algorithm_from_string(name);
    if (!a) fail(ErrorCode::UnknownName, std::string("unknown algorithm '") + name + "'");
    *out = to_c(*a);
  });
}

const char* ft_algorithm_name(ft_algorithm a) {
  switch (a) {
    case FT_ALGO_GFT:
    case FT_ALGO_CF:
    case FT_ALGO_VAVASIS:
    case FT_ALGO_GRID:
      return to_string(from_c(a));
  }
  return "?";
}

ft_status ft_run(ft_oracle* o, ft_algorithm algo, double eps, const ft_run_options* opts, ft_report** out) {
  return guarded([&] {
    require(o && out, "ft_run: null argument");
    RunReport r = run_algorithm(from_c(algo), o->oracle, eps, to_options(opts));
    *out = new ft_report{std::move(r), o->f};
  });
}

void ft_report_destroy(ft_report* r) { delete r; }

ft_status ft_report_summary_get(const ft_report* r, ft_report_summary* out) {
  return guarded([&] {
    require(r && out, "ft_report_summary_get: null argument");
    const RunReport& x = r->report;
    const auto algo = algorithm_from_string(x.algorithm);
    require(algo.has_value(), "ft_report_summary_get: report has an unknown algorithm");
    *out = ft_report_summary{to_c(*algo),     x.d,
                             x.eps,           x.proj_grad_norm,
                             x.claim_level,   x.verified ? 1 : 0,
                             x.value_queries, x.gradient_queries,
                             x.depth,         x.steps,
                             x.wall_time_ms,  x.final_rect ? 1 : 0,
                             x.trap_level,    x.early_exit ? 1 : 0};
  });
}

ft_status ft_report_point(const ft_report* r, double* out, size_t d) {
  return guarded([&] {
    require(r && out && d == r->report.point.size(), "ft_report_point: bad argument");
    std::copy(r->report.point.begin(), r->report.point.end(), out);
  });
}

ft_status ft_report_final_rect(const ft_report* r, double* lo, double* hi, size_t d) {
  return guarded([&] {
    require(r && lo && hi, "ft_report_final_rect: null argument");
    require(r->report.final_rect.has_value(), "ft_report_final_rect: run has no final box");
    const HyperRect& b = *r->report.final_rect;
    require(d == b.dim(), "ft_report_final_rect: dimension mismatch");
    std::copy(b.lo().begin(), b.lo().end(), lo);
    std::copy(b.hi().begin(), b.hi().end(), hi);
  });
}

size_t ft_report_audit_count(const ft_report* r) { return r ? r->report.audit.size() : 0; }

ft_status ft_report_audit_line(const ft_report* r, size_t i, char** out) {
  return guarded([&] {
    require(r && out && i < r->report.audit.size(), "ft_report_audit_line: bad argument");
    *out = dup_string(audit_line(r->report.audit[i]));
  });
}

ft_status ft_report_flow(const ft_report* r, double level, ft_flow_exit* exit_event, char** csv) {
  return guarded([&] {
    require(r && r->f, "ft_report_flow: null argument");
    const RunReport& x = r->report;
    const HyperRect rect = x.final_rect ? *x.final_rect : HyperRect::unit(x.d);
    if (!(level > 0.0)) level = x.trap_level > 0.0 ? x.trap_level * (1.0 + 1e-2) : x.claim_level;
    const FlowTrace t = integrate_flow(*r->f, x.point, rect, level, default_flow_step(x.eps), 10.0);
    if (exit_event) *exit_event = static_cast<ft_flow_exit>(static_cast<int>(t.exit));
    if (csv) *csv = dup_string(trace_to_csv(t));
  });
}

ft_status ft_audit_replay(const char* line, int* ok, char** message) {
  return guarded([&] {
    require(line && ok, "ft_audit_replay: null argument");
    const ReplayResult res = replay_audit_line(line);
    *ok = res.ok ? 1 : 0;
    if (message) *message = dup_string(res.message);
  });
}

ft_status ft_fit_exponent(const double* eps, const double* queries, size_t n, double* slope) {
  return guarded([&] {
    require(eps && queries && slope, "ft_fit_exponent: null argument");
    *slope = fit_loglog(std::span<const double>(eps, n), std::span<const double>(queries, n)).slope;
  });
}

ft_status ft_sweep_run(const ft_sweep_plan* plan, const ft_run_options* opts, ft_sweep** out) {
  return guarded([&] {
    require(plan && out, "ft_sweep_run: null argument");
    SweepPlan s;
    for (std::size_t i = 0; i < plan->n_algorithms; ++i) {
      const auto a = algorithm_from_string(plan->algorithms[i]);
      if (!a) fail(ErrorCode::UnknownName, std::string("unknown algorithm '") + plan->algorithms[i] + "'");
      s.algorithms.push_back(*a);
    }
    s.eps.assign(plan->eps, plan->eps + plan->n_eps);
    s.dims.assign(plan->dims, plan->dims + plan->n_dims);
    for (std::size_t i = 0; i < plan->n_functions; ++i) s.functions.emplace_back(plan->functions[i]);
    s.seed = plan->seed;

    auto sweep = std::make_unique<ft_sweep>();
    sweep->result = sweep_and_fit(s, to_options(opts));
    for (const auto& row : sweep->result.rows) {
      if (row.report) {
        sweep->reports.push_back(
            std::make_unique<ft_report>(ft_report{*row.report, catalog(row.function, row.d, s.seed)}));
      } else {
        sweep->reports.push_back(nullptr);
      }
    }
    *out = sweep.release();
  });
}

void ft_sweep_destroy(ft_sweep* s) { delete s; }

ft_status ft_sweep_render(const ft_sweep* s, const char* format, char** out) {
  return guarded([&] {
    require(s && format && out, "ft_sweep_render: null argument");
    const std::string f = format;
    if (f == "csv") {
      *out = dup_string(to_csv(s->result));
    } else if (f == "json") {
      *out = dup_string(to_json(s->result));
    } else {
      fail(ErrorCode::InvalidArgument, "ft_sweep_render: format must be csv or json");
    }
  });
}

int ft_sweep_all_verified(const ft_sweep* s) { return s && s->result.all_verified() ? 1 : 0; }

size_t ft_sweep_run_count(const ft_sweep* s) { return s ? s->result.rows.size() : 0; }

const ft_report* ft_sweep_report(const ft_sweep* s, size_t i) {
  if (!s || i >= s->reports.size()) return nullptr;
  return s->reports[i].get();
}

ft_status ft_sweep_run_label(const ft_sweep* s, size_t i, char** out) {
  return guarded([&] {
    require(s && out && i < s->result.rows.size(), "ft_sweep_run_label: bad argument");
    const RunRow& row = s->result.rows[i];
    std::ostringstream os;
    os << to_string(row.algorithm) << '_' << row.function << "_d" << row.d << "_eps" << row.eps;
    *out = dup_string(os.str());
  });
}

ft_status ft_sweep_run_error(const ft_sweep* s, size_t i, char** out) {
  return guarded([&] {
    require(s && out && i < s->result.rows.size(), "ft_sweep_run_error: bad argument");
    *out = dup_string(s->result.rows[i].error);
  });
}

}  // extern "C"
