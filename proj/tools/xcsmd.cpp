// Command-line front end: single experiments, the benchmark suite, oracles and
// maze analysis.

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "xcsmd/corpus.hpp"
#include "xcsmd/experiment.hpp"

namespace fs = std::filesystem;
using namespace xcsmd;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCheck = 3;

// Keys the suite lets you override; the rest come from the suite table.
const std::vector<std::string> kSuiteKeys = {"runs", "seed", "learning_problems", "final_exploit_problems"};

struct Overrides {
  std::map<std::string, std::string> values;

  void attach(CLI::App& app, const std::vector<std::string>& only = {}) {
    for (const auto& e : ConfigKeys::entries()) {
      if (!only.empty() && std::find(only.begin(), only.end(), e.key) == only.end()) continue;
      if (e.key == "maze") continue;
      app.add_option_function<std::string>(
          "--" + e.key, [this, key = e.key](const std::string& v) { values[key] = v; }, "override " + e.key);
    }
  }

  void apply(ExperimentConfig& cfg) const {
    for (const auto& [k, v] : values) ConfigKeys::set(cfg, k, v);
  }
};

std::string output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("XCSMD_OUTPUT_DIR")) return env;
  return "xcsmd-out";
}

fs::path fresh_directory(const std::string& root, const std::string& stem) {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream name;
  name << stem << "-" << std::put_time(&tm, "%Y%m%d-%H%M%S");
  fs::path dir = fs::path(root) / name.str();
  for (int k = 2; fs::exists(dir); ++k) dir = fs::path(root) / (name.str() + "-" + std::to_string(k));
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot write " + p.string());
  f << text;
}

void write_experiment(const fs::path& dir, const ExperimentConfig& cfg, const std::vector<PerfSeries>& runs,
                      bool dump_population, double wall) {
  const Aggregate agg = aggregate_runs(runs);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    write_file(dir / ("curve_run" + std::to_string(r) + ".csv"), curve_csv(runs[r]));
    if (dump_population)
      write_file(dir / ("population_run" + std::to_string(r) + ".txt"), population_dump(runs[r].population));
  }
  write_file(dir / "curve.csv", aggregated_curve_csv(agg));
  write_file(dir / "asl_runs.csv", asl_csv(runs));
  write_file(dir / "asl.csv", aggregated_asl_csv(agg));
  write_file(dir / "manifest.txt", manifest(cfg, wall));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_run(const std::string& maze_arg, const std::string& config_path, const Overrides& ov, const std::string& out,
            int jobs, bool dump_population) {
  ExperimentConfig cfg;
  std::vector<std::string> from_file;
  if (!config_path.empty()) from_file = ConfigKeys::apply_file(cfg, config_path);
  if (!maze_arg.empty()) cfg.maze = maze_arg;
  // Corpus mazes default to their benchmark population size.
  const bool n_given = ov.values.count("n") || std::count(from_file.begin(), from_file.end(), "n");
  if (const CorpusMaze* cm = find_corpus_maze(cfg.maze); cm && !n_given) cfg.params.population_size = cm->population;
  ov.apply(cfg);
  cfg.validate();
  const Maze maze = resolve_maze(cfg.maze);

  const auto t0 = std::chrono::steady_clock::now();
  const auto runs = run_seeds(cfg, maze, jobs);
  const Aggregate agg = aggregate_runs(runs);
  const fs::path dir = fresh_directory(output_root(out), "run-" + fs::path(cfg.maze).stem().string());
  write_experiment(dir, cfg, runs, dump_population, seconds_since(t0));

  std::cout << cfg.maze << " " << to_string(cfg.params.mode) << " N=" << cfg.params.population_size
            << " runs=" << cfg.runs << " final mean " << fmt_num(agg.final_mean.mean, 3) << " +- "
            << fmt_num(agg.final_mean.stderr_, 3) << " (optimum " << fmt_num(optimal_average_steps(maze), 3)
            << ")\n"
            << "wrote " << dir.string() << "\n";
  return 0;
}

struct SuiteRow {
  const CorpusMaze* maze;
  double optimum;
  Aggregate xcsmd;
  Aggregate xcs;
  bool xcsmd_ok = true;
  bool xcs_ok = true;
};

int cmd_suite(const std::vector<std::string>& only, const Overrides& ov, const std::string& out, int jobs, bool check) {
  std::vector<const CorpusMaze*> selected;
  for (const auto& m : corpus())
    if (only.empty() || std::find(only.begin(), only.end(), std::string(m.name)) != only.end()) selected.push_back(&m);
  for (const auto& name : only)
    if (!find_corpus_maze(name)) throw Error(Errc::Io, "unknown maze '" + name + "'");

  const fs::path dir = fresh_directory(output_root(out), "suite");
  std::vector<SuiteRow> rows;
  int failures = 0;
  for (const CorpusMaze* cm : selected) {
    SuiteRow row{cm, 0.0, {}, {}};
    try {
      const Maze maze = load_corpus_maze(*cm);
      row.optimum = optimal_average_steps(maze);
      for (SystemMode mode : {SystemMode::Xcsmd, SystemMode::Xcs}) {
        ExperimentConfig cfg;
        cfg.maze = std::string(cm->name);
        cfg.params.population_size = cm->population;
        cfg.params.mode = mode;
        if (mode == SystemMode::Xcs) cfg.max_steps = cm->baseline_max_steps;
        ov.apply(cfg);
        cfg.validate();
        const auto t0 = std::chrono::steady_clock::now();
        const auto runs = run_seeds(cfg, maze, jobs);
        const fs::path sub = dir / (cfg.maze + "-" + to_string(mode));
        fs::create_directories(sub);
        write_experiment(sub, cfg, runs, false, seconds_since(t0));
        (mode == SystemMode::Xcsmd ? row.xcsmd : row.xcs) = aggregate_runs(runs);
      }
      row.xcsmd_ok = row.xcsmd.final_mean.mean <= cm->bound;
      row.xcs_ok = cm->baseline_bound > 0 ? row.xcs.final_mean.mean <= cm->baseline_bound
                                          : (cm->type < AliasingType::TypeII || row.xcs.final_mean.mean > 2.0 * row.optimum);
      std::cout << cm->name << ": xcsmd " << fmt_num(row.xcsmd.final_mean.mean, 3) << " xcs "
                << fmt_num(row.xcs.final_mean.mean, 3) << " optimum " << fmt_num(row.optimum, 3)
                << (row.xcsmd_ok && row.xcs_ok ? "" : "  [outside bound]") << "\n";
    } catch (const Error& e) {
      std::cerr << cm->name << ": " << e.what() << "\n";
      ++failures;
      continue;
    }
    rows.push_back(row);
  }

  std::string csv = "maze,optimum,aliasing_type,xcsmd_mean,xcsmd_stderr,xcs_mean,xcs_stderr,population,within_bound\n";
  for (const auto& r : rows)
    csv += std::string(r.maze->name) + "," + fmt_num(r.optimum, 3) + "," + to_string(r.maze->type) + "," +
           fmt_num(r.xcsmd.final_mean.mean, 3) + "," + fmt_num(r.xcsmd.final_mean.stderr_, 3) + "," +
           fmt_num(r.xcs.final_mean.mean, 3) + "," + fmt_num(r.xcs.final_mean.stderr_, 3) + "," +
           std::to_string(r.maze->population) + "," + (r.xcsmd_ok && r.xcs_ok ? "yes" : "no") + "\n";
  write_file(dir / "summary.csv", csv);
  std::cout << "wrote " << dir.string() << "\n";

  if (failures > 0) return kExitData;
  if (check)
    for (const auto& r : rows)
      if (!r.xcsmd_ok || !r.xcs_ok) return kExitCheck;
  return 0;
}

int cmd_oracle(const std::string& maze_arg) {
  std::cout << "maze,optimum,published,aliasing_type\n";
  if (!maze_arg.empty()) {
    const Maze maze = resolve_maze(maze_arg);
    const auto report = classify_aliasing(maze);
    std::cout << maze_arg << "," << fmt_num(report.optimum, 4) << ",," << to_string(report.maze_type) << "\n";
    return 0;
  }
  for (const auto& cm : corpus()) {
    const auto report = classify_aliasing(load_corpus_maze(cm));
    std::cout << cm.name << "," << fmt_num(report.optimum, 4) << "," << fmt_num(cm.published_optimum, cm.decimals)
              << "," << to_string(report.maze_type) << "\n";
  }
  return 0;
}

std::string action_list(std::uint8_t mask) {
  std::string s;
  for (int a = 0; a < kActionCount; ++a)
    if (mask & (1u << a)) s += (s.empty() ? "" : "/") + std::string(kDirectionNames[a]);
  return s;
}

int cmd_analyze(const std::string& maze_arg) {
  const Maze maze = resolve_maze(maze_arg);
  const auto report = classify_aliasing(maze);
  std::cout << maze.to_text() << "\n"
            << maze_arg << ": " << to_string(report.maze_type) << ", optimum " << fmt_num(report.optimum, 4) << ", "
            << maze.empty_cells().size() << " empty squares\n";
  int label = 0;
  std::map<const AliasingGroup*, int> labels;
  for (const AliasingGroup* g : report.aliased_groups()) {
    labels[g] = ++label;
    std::cout << "group " << label << " " << g->sensation.to_string() << " " << to_string(g->type) << "\n";
    for (const auto& sq : g->squares)
      std::cout << "  (" << sq.cell.row << "," << sq.cell.col << ") d=" << sq.distance
                << " best=" << action_list(sq.actions) << (sq.in_conglomerate ? " conglomerate" : "") << "\n";
  }
  if (label == 0) std::cout << "no aliased sensations\n";
  for (std::size_t c = 0; c < report.conglomerates.size(); ++c) {
    std::cout << "conglomerate " << c << ":";
    for (int gi : report.conglomerates[c]) std::cout << " " << labels[&report.groups[static_cast<std::size_t>(gi)]];
    std::cout << "\n";
  }
  for (const auto& [a, b] : report.clones) std::cout << "clones: conglomerates " << a << " and " << b << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XCS with a memory list and aliasing-state detection, on maze benchmarks"};
  app.require_subcommand(1);

  std::string maze_arg, config_path, out_dir;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool dump_population = false, check = false;
  std::vector<std::string> only;
  Overrides run_ov, suite_ov;

  auto* run = app.add_subcommand("run", "run one experiment (several seeded runs)");
  run->add_option("--maze", maze_arg, "corpus name or maze file");
  run->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output root (default $XCSMD_OUTPUT_DIR or ./xcsmd-out)");
  run->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
  run->add_flag("--dump-population", dump_population, "write final populations");
  run_ov.attach(*run);

  auto* suite = app.add_subcommand("suite", "run the benchmark table in both modes");
  suite->add_option("--only", only, "restrict to these mazes");
  suite->add_option("--out", out_dir, "output root");
  suite->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
  suite->add_flag("--check", check, "exit 3 when a result is outside its bound");
  suite_ov.attach(*suite, kSuiteKeys);

  auto* oracle = app.add_subcommand("oracle", "print shortest-path optima");
  oracle->add_option("--maze", maze_arg, "corpus name or maze file");

  auto* analyze = app.add_subcommand("analyze-maze", "print the aliasing report of a maze");
  analyze->add_option("--maze", maze_arg, "corpus name or maze file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return cmd_run(maze_arg, config_path, run_ov, out_dir, jobs, dump_population);
    if (*suite) return cmd_suite(only, suite_ov, out_dir, jobs, check);
    if (*oracle) return cmd_oracle(maze_arg);
    if (*analyze) return cmd_analyze(maze_arg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::InvalidConfig ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
