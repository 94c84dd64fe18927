// flowtrap-bench: runs the algorithms on catalog functions and reports query
// counts, depth and fitted scaling exponents. Uses only the C interface.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "flowtrap/flowtrap.h"

namespace {

struct CString {
  char* p = nullptr;
  ~CString() { ft_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

int report_error(ft_status st, const char* what) {
  std::cerr << "flowtrap-bench: " << what << ": " << ft_status_name(st) << ": " << ft_last_error() << '\n';
  return 2;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

int replay_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "flowtrap-bench: cannot open " << path << '\n';
    return 2;
  }
  std::string line;
  std::size_t n = 0, bad = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++n;
    int ok = 0;
    CString msg;
    const ft_status st = ft_audit_replay(line.c_str(), &ok, &msg.p);
    if (st != FT_OK) return report_error(st, "replay");
    if (!ok) {
      ++bad;
      std::cerr << "replay failure: " << msg.str() << '\n';
    }
  }
  std::cout << "replayed " << n << " records, " << bad << " failures\n";
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-complexity benchmarks for finding stationary points on the unit cube"};
  std::vector<std::string> algos{"gft"};
  std::vector<std::string> fns{"quadratic"};
  std::vector<double> eps{1e-2};
  std::vector<std::size_t> dims{2};
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;
  bool audit = false;
  bool dump_flow = false;
  double delta = 0.0;
  std::uint64_t grid_cap = 0;
  std::string replay;

  app.add_option("--algo", algos, "Algorithms: gft, cf, vavasis, grid")->delimiter(',');
  app.add_option("--fn", fns, "Functions: quadratic, trig_mix, separable_wells")->delimiter(',');
  app.add_option("--eps", eps, "Tolerances, strictly decreasing")->delimiter(',');
  app.add_option("--dim", dims, "Dimensions")->delimiter(',');
  app.add_option("--seed", seed, "Seed for the catalog functions");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out, "Output path (default stdout)");
  app.add_flag("--audit", audit, "Write the per-step certificate log as JSON lines");
  app.add_flag("--dump-flow", dump_flow, "Integrate the gradient flow from each result and dump it as CSV");
  app.add_option("--delta", delta, "Warm-start level for vavasis (default eps^(4/(d+2)))");
  app.add_option("--grid-cap", grid_cap, "Largest grid the baselines may query");
  app.add_option("--replay", replay, "Replay an audit file instead of running");
  CLI11_PARSE(app, argc, argv);

  if (!replay.empty()) return replay_file(replay);

  std::vector<const char*> algo_ptrs, fn_ptrs;
  for (const auto& a : algos) algo_ptrs.push_back(a.c_str());
  for (const auto& f : fns) fn_ptrs.push_back(f.c_str());
  const ft_sweep_plan plan{algo_ptrs.data(), algo_ptrs.size(), eps.data(), eps.size(), dims.data(), dims.size(),
                           fn_ptrs.data(),   fn_ptrs.size(),   seed};
  ft_run_options opts;
  ft_run_options_init(&opts);
  opts.vavasis_delta = delta;
  opts.record_audit = audit ? 1 : 0;
  opts.grid_cap = grid_cap;

  ft_sweep* raw = nullptr;
  const ft_status st = ft_sweep_run(&plan, &opts, &raw);
  if (st != FT_OK) return report_error(st, "sweep");
  std::unique_ptr<ft_sweep, decltype(&ft_sweep_destroy)> sweep(raw, ft_sweep_destroy);

  CString text;
  if (ft_status s = ft_sweep_render(sweep.get(), format.c_str(), &text.p); s != FT_OK) {
    return report_error(s, "render");
  }
  if (out.empty()) {
    std::cout << text.str();
  } else if (!write_file(out, text.str())) {
    std::cerr << "flowtrap-bench: cannot write " << out << '\n';
    return 2;
  }

  const std::size_t runs = ft_sweep_run_count(sweep.get());
  for (std::size_t i = 0; i < runs; ++i) {
    const ft_report* rep = ft_sweep_report(sweep.get(), i);
    if (!rep) continue;
    CString label;
    if (ft_status s = ft_sweep_run_label(sweep.get(), i, &label.p); s != FT_OK) return report_error(s, "label");

    if (audit && ft_report_audit_count(rep) > 0) {
      std::string lines;
      for (std::size_t k = 0; k < ft_report_audit_count(rep); ++k) {
        CString line;
        if (ft_status s = ft_report_audit_line(rep, k, &line.p); s != FT_OK) return report_error(s, "audit");
        lines += line.str() + '\n';
      }
      if (out.empty()) {
        std::cerr << "# audit " << label.str() << '\n' << lines;
      } else if (!write_file(out + "." + label.str() + ".audit.jsonl", lines)) {
        std::cerr << "flowtrap-bench: cannot write audit log\n";
        return 2;
      }
    }

    if (dump_flow) {
      ft_flow_exit ev;
      CString csv;
      if (ft_status s = ft_report_flow(rep, 0.0, &ev, &csv.p); s != FT_OK) return report_error(s, "flow");
      const std::string path = (out.empty() ? std::string("flow") : out) + "." + label.str() + ".flow.csv";
      if (!write_file(path, csv.str())) {
        std::cerr << "flowtrap-bench: cannot write " << path << '\n';
        return 2;
      }
    }
  }
  return ft_sweep_all_verified(sweep.get()) ? 0 : 1;
}
