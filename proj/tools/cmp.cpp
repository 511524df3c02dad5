// cmp: command line front end for the solver library.
//
// Exit codes: 0 success, 2 usage or precondition, 3 solver failure,
// 4 validation failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmp/archive.hpp"
#include "cmp/errors.hpp"
#include "cmp/io.hpp"
#include "cmp/solve.hpp"
#include "cmp/svg.hpp"
#include "cmp/transform.hpp"
#include "cmp/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 2, kSolver = 3, kInvalid = 4 };

std::mutex g_err_mutex;

void emit(const json& record) {
  std::lock_guard lock(g_err_mutex);
  std::cerr << record.dump() << '\n';
}

void message(const std::string& text) {
  std::lock_guard lock(g_err_mutex);
  std::cerr << "cmp: " << text << '\n';
}

int exit_code_of(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const cmp::ValidationError& ex) {
    message(std::string("invalid: ") + ex.what());
    return kInvalid;
  } catch (const cmp::SolverFailure& ex) {
    message(std::string("solver failure: ") + ex.what());
    return kSolver;
  } catch (const cmp::InternalError& ex) {
    message(std::string("internal error: ") + ex.what());
    return kSolver;
  } catch (const cmp::DecompositionError& ex) {
    message(std::string("decomposition failed: ") + ex.what());
    return kSolver;
  } catch (const cmp::UnsupportedInstance& ex) {
    message(std::string("unsupported instance: ") + ex.what());
    return kUsage;
  } catch (const cmp::Error& ex) {
    message(ex.what());
    return kUsage;
  } catch (const std::invalid_argument& ex) {
    message(ex.what());
    return kUsage;
  } catch (const std::exception& ex) {
    message(ex.what());
    return kUsage;
  }
}

cmp::Instance load_instance(const std::string& path) { return cmp::read_instance(cmp::read_file(path)); }

cmp::Solution load_solution(const std::string& path, const cmp::Instance& inst) {
  return cmp::read_solution(cmp::read_file(path), inst);
}

void require_feasible(const cmp::Instance& inst, const cmp::Solution& s) {
  const cmp::ValidationReport r = cmp::validate(inst, s);
  if (!r.feasible) {
    throw cmp::ValidationError("solution violates " + cmp::describe(r.violations.front()));
  }
}

// Writes the solution (stdout when `out` is empty) and reads a written file
// back through the parser and validator.
void write_checked(const cmp::Instance& inst, const cmp::Solution& s, const std::string& out,
                   const std::string& solver) {
  const std::string text = cmp::write_solution(s, {solver, std::nullopt});
  if (out.empty() || out == "-") {
    std::cout << text << '\n';
    return;
  }
  cmp::write_file_atomic(out, text);
  const cmp::Solution back = load_solution(out, inst);
  if (back != s || !cmp::validate(inst, back).feasible) {
    throw cmp::InternalError("written file " + out + " does not re-validate");
  }
}

void archive_checked(const std::string& dir, const cmp::Instance& inst, const cmp::Solution& s,
                     const std::string& solver) {
  const auto ts = std::chrono::duration_cast<std::chrono::seconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count();
  const fs::path file = cmp::archive_store(dir, s, solver, ts);
  const cmp::Solution back = load_solution(file.string(), inst);
  if (back != s || !cmp::validate(inst, back).feasible) {
    throw cmp::InternalError("archived file " + file.string() + " does not re-validate");
  }
  emit({{"event", "archived"}, {"file", file.string()}});
}

void report(const cmp::Instance& inst, const cmp::Solution& s, const std::string& solver) {
  const int lb = cmp::lower_bound(inst);
  const int m = s.makespan();
  emit({{"event", "report"},
        {"instance", inst.name()},
        {"solver", solver},
        {"makespan", m},
        {"distance_sum", cmp::distance_sum(s)},
        {"lower_bound", lb},
        {"ratio", lb > 0 ? static_cast<double>(m) / lb : 1.0}});
}

cmp::ProgressFn progress_printer(const std::string& instance) {
  return [instance](const cmp::ProgressRecord& p) {
    emit({{"event", "progress"},
          {"instance", instance},
          {"elapsed", p.elapsed},
          {"makespan", p.makespan},
          {"queue", p.queue},
          {"phase", p.phase}});
  };
}

// Runs `job(i)` for i in [0, count) on up to `jobs` threads and returns the
// largest exit code.
template <typename Job>
int fan_out(std::size_t count, int jobs, Job job) {
  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{kOk};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      int code = kOk;
      try {
        job(i);
      } catch (...) {
        code = exit_code_of(std::current_exception());
      }
      int seen = worst.load();
      while (code > seen && !worst.compare_exchange_weak(seen, code)) {
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return worst.load();
}

// Output path of input i: `out` itself for a single input, else a file
// named after the instance inside the directory `out`.
std::string output_for(const std::string& out, std::size_t inputs, const cmp::Instance& inst) {
  if (out.empty() || inputs == 1) return out;
  fs::create_directories(out);
  return (fs::path(out) / (inst.name() + ".json")).string();
}

struct SolveArgs {
  std::vector<std::string> inputs;
  std::string output;
  cmp::SolveOptions opt;
  std::string matching = "greedy";
  bool archive = false;
  std::string archive_dir = "archive";
  int jobs = 1;
};

int run_solve(const SolveArgs& a) {
  if (a.inputs.size() > 1 && (a.output.empty() || a.output == "-")) {
    throw std::invalid_argument("several inputs need -o <directory>");
  }
  cmp::SolveOptions opt = a.opt;
  opt.matching = a.matching == "exact" ? cmp::Matching::Exact : cmp::Matching::Greedy;
  return fan_out(a.inputs.size(), a.jobs, [&](std::size_t i) {
    const cmp::Instance inst = load_instance(a.inputs[i]);
    const cmp::Solution s = cmp::solve(inst, opt);
    require_feasible(inst, s);
    write_checked(inst, s, output_for(a.output, a.inputs.size(), inst), opt.strategy);
    if (a.archive) archive_checked(a.archive_dir, inst, s, opt.strategy);
    report(inst, s, opt.strategy);
  });
}

struct OptimizeArgs {
  std::string instance, solution, output;
  std::string method = "auto";
  cmp::OptimizeBudget budget;
  bool no_reset_q = false;
  bool archive = false;
  std::string archive_dir = "archive";
};

int run_optimize(const OptimizeArgs& a) {
  const cmp::Instance inst = load_instance(a.instance);
  const cmp::Solution start = load_solution(a.solution, inst);
  require_feasible(inst, start);
  cmp::OptimizeOptions opt;
  opt.method = cmp::parse_optimize_method(a.method);
  opt.conflict.reset_counts = !a.no_reset_q;
  const cmp::Solution s = cmp::optimize(inst, start, a.budget, opt, progress_printer(inst.name()));
  require_feasible(inst, s);
  const std::string solver = "optimize-" + a.method;
  write_checked(inst, s, a.output, solver);
  if (a.archive) archive_checked(a.archive_dir, inst, s, solver);
  report(inst, s, solver);
  return kOk;
}

int run_validate(const std::string& instance, const std::string& solution) {
  const cmp::Instance inst = load_instance(instance);
  const cmp::Solution s = load_solution(solution, inst);
  const cmp::ValidationReport r = cmp::validate(inst, s);
  json out{{"feasible", r.feasible}, {"makespan", r.makespan}, {"distance_sum", r.distance_sum}};
  json v = json::array();
  for (const auto& viol : r.violations) v.push_back(cmp::describe(viol));
  out["violations"] = v;
  std::cout << out.dump(2) << '\n';
  return r.feasible ? kOk : kInvalid;
}

struct TransformArgs {
  std::string instance, solution, op;
  std::string output, solution_output;
};

int run_transform(const TransformArgs& a) {
  const cmp::Transform t = cmp::parse_transform(a.op);
  const cmp::Instance inst = load_instance(a.instance);
  const cmp::Instance ti = cmp::apply_transform(inst, t);
  std::optional<cmp::Solution> ts;
  if (!a.solution.empty()) {
    const cmp::Solution s = load_solution(a.solution, inst);
    require_feasible(inst, s);
    ts = cmp::apply_transform(s, t);
    require_feasible(ti, *ts);
  }
  const std::string text = cmp::write_instance(ti);
  if (a.output.empty() || a.output == "-") {
    std::cout << text << '\n';
  } else {
    cmp::write_file_atomic(a.output, text);
    if (!(load_instance(a.output) == ti)) {
      throw cmp::InternalError("written file " + a.output + " does not read back");
    }
  }
  if (ts) {
    if (a.solution_output.empty()) throw std::invalid_argument("--solution needs --solution-out");
    write_checked(ti, *ts, a.solution_output, "transform-" + a.op);
  }
  return kOk;
}

int run_export_svg(const std::string& instance, const std::string& solution,
                   const std::string& color, const std::string& output, int cell) {
  const cmp::Instance inst = load_instance(instance);
  const cmp::Solution s = load_solution(solution, inst);
  cmp::SvgOptions opt;
  opt.color_by = color == "target" ? cmp::ColorBy::Target : cmp::ColorBy::Start;
  opt.cell = cell;
  std::string svg;
  try {
    svg = cmp::render_svg(inst, s, opt);
  } catch (const cmp::ValidationError& e) {
    // Rendering an infeasible solution is a precondition failure here.
    message(std::string("refusing to render: ") + e.what());
    return kUsage;
  }
  if (output.empty() || output == "-") {
    std::cout << svg;
  } else {
    cmp::write_file_atomic(output, svg);
  }
  return kOk;
}

struct ArchiveArgs {
  std::string dir = "archive";
  std::vector<std::string> instances;
};

class InstanceIndex {
 public:
  explicit InstanceIndex(const std::vector<std::string>& files) {
    for (const auto& f : files) {
      auto inst = std::make_unique<cmp::Instance>(load_instance(f));
      const std::string name = inst->name();
      by_name_[name] = std::move(inst);
    }
  }
  cmp::InstanceLookup lookup() const {
    if (by_name_.empty()) return {};
    return [this](const std::string& name) -> const cmp::Instance* {
      auto it = by_name_.find(name);
      return it == by_name_.end() ? nullptr : it->second.get();
    };
  }

 private:
  std::map<std::string, std::unique_ptr<cmp::Instance>> by_name_;
};

void print_entries(const std::vector<cmp::ArchiveEntry>& entries) {
  for (const auto& e : entries) {
    std::cout << e.instance << '\t' << e.makespan << '\t' << e.distance_sum << '\t' << e.solver
              << '\t' << e.timestamp << '\t' << e.file.string() << '\n';
  }
}

void print_quarantined(const std::vector<cmp::QuarantinedFile>& q) {
  for (const auto& f : q) message("quarantined " + f.file.string() + ": " + f.reason);
}

int run_archive(const std::string& action, const ArchiveArgs& a) {
  const InstanceIndex index(a.instances);
  if (action == "gc") {
    const auto removed = cmp::archive_gc(a.dir, index.lookup());
    print_entries(removed);
    print_quarantined(cmp::archive_scan(a.dir, index.lookup()).quarantined);
    return kOk;
  }
  const cmp::ArchiveListing l = cmp::archive_scan(a.dir, index.lookup());
  print_entries(action == "best" ? cmp::archive_best(l) : l.entries);
  print_quarantined(l.quarantined);
  return kOk;
}

struct GenerateArgs {
  int n = 10;
  int w = 10;
  double density = 0.0;
  std::uint64_t seed = 1;
  std::string name;
  std::string output;
};

int run_generate(const GenerateArgs& a) {
  cmp::Instance inst = cmp::generate_instance(a.n, a.w, a.density, a.seed);
  if (!a.name.empty()) {
    std::vector<cmp::Cell> starts, targets;
    for (const auto& r : inst.robots()) {
      starts.push_back(r.start);
      targets.push_back(r.target);
    }
    inst = cmp::make_instance(a.name, inst.obstacles(), starts, targets);
  }
  const std::string text = cmp::write_instance(inst);
  if (a.output.empty() || a.output == "-") {
    std::cout << text << '\n';
  } else {
    cmp::write_file_atomic(a.output, text);
  }
  return kOk;
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coordinated motion planning on the grid"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; flags take precedence");

  const std::string archive_default = env_or("CMP_ARCHIVE_DIR", "archive");
  int code = kOk;

  SolveArgs sa;
  sa.archive_dir = archive_default;
  auto* solve = app.add_subcommand("solve", "Solve instances with one strategy");
  solve->add_option("-i,--instance", sa.inputs, "Instance file(s)")->required()->check(CLI::ExistingFile);
  solve->add_option("-s,--strategy", sa.opt.strategy, "Strategy")
      ->check(CLI::IsMember({"greedy", "cross", "cootie", "dichotomy", "escape"}))
      ->capture_default_str();
  solve->add_option("--b", sa.opt.b, "Border depth (0 for the strategy default)")->check(CLI::NonNegativeNumber);
  solve->add_option("--seed", sa.opt.seed, "Seed (0 keeps id order on ties)");
  solve->add_option("--matching", sa.matching, "Storage matching")->check(CLI::IsMember({"greedy", "exact"}));
  solve->add_flag("--strict", sa.opt.strict_escape, "Escape: fail instead of falling back");
  solve->add_option("--k", sa.opt.greedy.k, "Greedy look-ahead")->check(CLI::Range(1, 4));
  solve->add_option("-o,--output", sa.output, "Output file, or directory for several inputs");
  solve->add_flag("--archive", sa.archive, "Also store a timestamped copy in the archive");
  solve->add_option("--archive-dir", sa.archive_dir, "Archive directory")->envname("CMP_ARCHIVE_DIR");
  solve->add_option("-j,--jobs", sa.jobs, "Concurrent jobs")->check(CLI::PositiveNumber);
  solve->callback([&] { code = run_solve(sa); });

  OptimizeArgs oa;
  oa.archive_dir = archive_default;
  auto* opt = app.add_subcommand("optimize", "Improve the makespan of a feasible solution");
  opt->add_option("-i,--instance", oa.instance)->required()->check(CLI::ExistingFile);
  opt->add_option("--solution", oa.solution)->required()->check(CLI::ExistingFile);
  opt->add_option("--method", oa.method)->check(CLI::IsMember({"feasible", "conflict", "auto"}));
  opt->add_option("--time-limit", oa.budget.time_limit, "Seconds")->check(CLI::PositiveNumber);
  opt->add_option("--max-steps", oa.budget.max_steps, "Re-plan or pop limit (0 for none)");
  opt->add_option("--seed", oa.budget.seed);
  opt->add_option("--target-makespan", oa.budget.target_makespan, "Stop at this makespan");
  opt->add_flag("--no-reset-q", oa.no_reset_q, "Keep pop counts across makespan targets");
  opt->add_option("-o,--output", oa.output);
  opt->add_flag("--archive", oa.archive);
  opt->add_option("--archive-dir", oa.archive_dir)->envname("CMP_ARCHIVE_DIR");
  opt->callback([&] { code = run_optimize(oa); });

  std::string v_inst, v_sol;
  auto* val = app.add_subcommand("validate", "Check a solution; exit 4 when infeasible");
  val->add_option("-i,--instance", v_inst)->required()->check(CLI::ExistingFile);
  val->add_option("--solution", v_sol)->required()->check(CLI::ExistingFile);
  val->callback([&] { code = run_validate(v_inst, v_sol); });

  std::string lb_inst;
  auto* lb = app.add_subcommand("lowerbound", "Print the distance lower bound");
  lb->add_option("-i,--instance", lb_inst)->required()->check(CLI::ExistingFile);
  lb->callback([&] {
    std::cout << cmp::lower_bound(load_instance(lb_inst)) << '\n';
    code = kOk;
  });

  TransformArgs ta;
  auto* tr = app.add_subcommand("transform", "Rotate or reverse an instance (and solution)");
  tr->add_option("-i,--instance", ta.instance)->required()->check(CLI::ExistingFile);
  tr->add_option("--solution", ta.solution)->check(CLI::ExistingFile);
  tr->add_option("--op", ta.op)->required()->check(CLI::IsMember({"rot90", "rot180", "rot270", "reverse"}));
  tr->add_option("-o,--output", ta.output, "Transformed instance");
  tr->add_option("--solution-out", ta.solution_output, "Transformed solution");
  tr->callback([&] { code = run_transform(ta); });

  std::string s_inst, s_sol, s_color = "start", s_out;
  int s_cell = 20;
  auto* svg = app.add_subcommand("export-svg", "Animated SVG of a solution");
  svg->add_option("-i,--instance", s_inst)->required()->check(CLI::ExistingFile);
  svg->add_option("--solution", s_sol)->required()->check(CLI::ExistingFile);
  svg->add_option("--color", s_color)->check(CLI::IsMember({"start", "target"}));
  svg->add_option("--cell", s_cell, "Pixels per cell")->check(CLI::Range(1, 200));
  svg->add_option("-o,--output", s_out);
  svg->callback([&] { code = run_export_svg(s_inst, s_sol, s_color, s_out, s_cell); });

  ArchiveArgs aa;
  aa.dir = archive_default;
  std::string action;
  auto* ar = app.add_subcommand("archive", "List, query or prune the solution archive");
  ar->add_option("action", action)->required()->check(CLI::IsMember({"list", "best", "gc"}));
  ar->add_option("--dir", aa.dir, "Archive directory")->envname("CMP_ARCHIVE_DIR");
  ar->add_option("--instances", aa.instances, "Instance files used to validate entries")
      ->check(CLI::ExistingFile);
  ar->callback([&] { code = run_archive(action, aa); });

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Random solvable instance");
  gen->add_option("-n,--robots", ga.n)->check(CLI::PositiveNumber);
  gen->add_option("-w,--width", ga.w)->check(CLI::PositiveNumber);
  gen->add_option("--density", ga.density)->check(CLI::Range(0.0, 0.9));
  gen->add_option("--seed", ga.seed);
  gen->add_option("--name", ga.name);
  gen->add_option("-o,--output", ga.output);
  gen->callback([&] { code = run_generate(ga); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  } catch (...) {
    return exit_code_of(std::current_exception());
  }
  return code;
}
