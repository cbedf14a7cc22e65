#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "oops/config.hpp"
#include "oops/dovetail.hpp"
#include "oops/engine.hpp"
#include "oops/frozen.hpp"
#include "oops/guess.hpp"
#include "oops/isa.hpp"
#include "oops/lsearch.hpp"
#include "oops/machine.hpp"
#include "oops/task.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCeiling = 2;
constexpr int kExitVerify = 3;

struct Common {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<uint64_t> seed;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, Common& c, bool config_required = true) {
  auto* opt = cmd->add_option("--config", c.config_path, "run config file");
  if (config_required) opt->required();
  cmd->add_option("--out", c.out_dir, "output directory");
  cmd->add_option("--seed", c.seed, "RNG seed (overrides config)");
  cmd->add_option("--workers", c.workers, "worker count (overrides config)");
}

bool load_setup(const Common& c, oops::RunSetup& setup) {
  auto r = oops::parse_config_file(c.config_path);
  if (!r.ok) {
    std::cerr << "config error: " << r.error << "\n";
    return false;
  }
  setup = std::move(r.setup);
  if (c.seed) setup.seed = *c.seed;
  if (c.workers) setup.workers = *c.workers;
  return true;
}

bool write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir + "/" + name);
  f << content;
  if (!f) {
    std::cerr << "cannot write " << dir << "/" << name << "\n";
    return false;
  }
  return true;
}

bool run_frozen_on(const std::vector<uint8_t>& program, const oops::Task& task,
                   const oops::WeightTable& table, uint64_t budget) {
  oops::MachineState st = task.initial_state(table);
  oops::Outcome o = oops::run(st, program, nullptr, budget);
  return (o == oops::Outcome::RequestToken || o == oops::Outcome::Halted) &&
         task.success(st);
}

int cmd_oops(const Common& c) {
  oops::RunSetup setup;
  if (!load_setup(c, setup)) return kExitConfig;
  if (setup.tasks.empty()) {
    std::cerr << "config error: no tasks\n";
    return kExitConfig;
  }

  oops::FrozenStore store;
  if (!setup.frozen_load.empty()) {
    std::ifstream f(setup.frozen_load);
    if (!f) {
      std::cerr << "config error: cannot open frozen store '"
                << setup.frozen_load << "'\n";
      return kExitConfig;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    auto loaded = oops::FrozenStore::from_text(buf.str());
    if (!loaded) {
      std::cerr << "config error: malformed frozen store '"
                << setup.frozen_load << "'\n";
      return kExitConfig;
    }
    store = std::move(*loaded);
  }

  oops::SearchConfig cfg;
  cfg.weights = setup.weights;
  cfg.n_factor = setup.n_factor;
  cfg.global_step_ceiling = setup.ceiling;
  oops::SolveReport report = oops::solve_sequence(setup.tasks, cfg, store);

  std::ostringstream summary;
  summary << "tasks: " << setup.tasks.size() << "\n"
          << "total steps: " << report.total_steps << "\n"
          << "frozen programs: " << store.count() << "\n";
  if (report.ceiling_exhausted)
    summary << "ceiling exhausted at task index " << report.exhausted_task
            << "\n";
  for (const auto& row : report.rows)
    summary << (row.solved ? "solved " : "UNSOLVED ") << row.task_id
            << (row.solved ? "  by " + row.program : "") << "\n";

  if (!write_file(c.out_dir, "report.tsv", report.to_tsv()) ||
      !write_file(c.out_dir, "frozen.txt", store.to_text()) ||
      !write_file(c.out_dir, "summary.txt", summary.str()))
    return kExitConfig;
  std::cout << summary.str();
  return report.ceiling_exhausted ? kExitCeiling : kExitOk;
}

int cmd_lsearch(const Common& c, bool adaptive) {
  oops::RunSetup setup;
  if (!load_setup(c, setup)) return kExitConfig;
  if (setup.tasks.empty()) {
    std::cerr << "config error: no tasks\n";
    return kExitConfig;
  }

  std::ostringstream tsv;
  tsv << "pass\tfound\tprogram\tt_program\ttotal_steps\tfinal_limit\n";
  oops::WeightTable table = setup.weights;
  bool ceiling = false;
  int passes = adaptive ? 2 : 1;
  for (int pass = 0; pass < passes; ++pass) {
    auto res = oops::lsearch(setup.tasks.front(), table, setup.ceiling);
    tsv << pass << '\t' << (res.found ? 1 : 0) << '\t'
        << oops::program_to_string(res.program) << '\t' << res.t_program
        << '\t' << res.total_steps << '\t' << res.final_limit << '\n';
    ceiling = ceiling || res.ceiling_exhausted;
    if (!res.found) break;
    if (adaptive)
      table = oops::als_update(table, res.program, setup.gamma_num,
                               setup.gamma_den);
  }
  if (!write_file(c.out_dir, adaptive ? "als.tsv" : "lsearch.tsv", tsv.str()))
    return kExitConfig;
  std::cout << tsv.str();
  return ceiling ? kExitCeiling : kExitOk;
}

int cmd_guess(const Common& c) {
  oops::RunSetup setup;
  if (!load_setup(c, setup)) return kExitConfig;
  oops::RngCoins coins(setup.seed);
  oops::Task free;
  free.id = "free";
  free.success = [](const oops::MachineState&) { return false; };
  auto tr = oops::guess_run(coins, free, setup.weights, uint64_t{1} << 20);

  std::ostringstream tsv;
  tsv << "field\tvalue\n";
  const char* end = tr.end == oops::GuessEnd::Exit     ? "exit"
                    : tr.end == oops::GuessEnd::Halted ? "halted"
                                                       : "step_cap";
  tsv << "end\t" << end << "\n";
  tsv << "flips\t" << tr.flips << "\n";
  tsv << "steps\t" << tr.steps << "\n";
  std::ostringstream bits;
  for (bool b : tr.bits) bits << (b ? '1' : '0');
  tsv << "bits\t" << bits.str() << "\n";
  tsv << "program\t" << oops::program_to_string(tr.tokens) << "\n";
  std::ostringstream out;
  for (size_t i = 0; i < tr.output.size(); ++i)
    out << (i ? " " : "") << tr.output[i];
  tsv << "output\t" << out.str() << "\n";
  if (!write_file(c.out_dir, "guess.tsv", tsv.str())) return kExitConfig;
  std::cout << tsv.str();
  return kExitOk;
}

int cmd_speedtail(const Common& c) {
  oops::RunSetup setup;
  if (!load_setup(c, setup)) return kExitConfig;
  auto rep = oops::speed_prior_tail(setup.samples, setup.seed, setup.weights,
                                    setup.workers);
  if (!write_file(c.out_dir, "speedtail.tsv", rep.to_tsv()))
    return kExitConfig;
  std::cout << rep.to_tsv();
  std::cout << "max_t_times_fraction\t" << rep.max_t_times_fraction << "\n";
  return kExitOk;
}

int cmd_dovetail(const Common& c) {
  oops::RunSetup setup;
  if (!load_setup(c, setup)) return kExitConfig;
  size_t m = setup.weights.alphabet().size();
  if ((m & (m - 1)) != 0) {
    std::cerr << "config error: dovetail needs a power-of-two alphabet size\n";
    return kExitConfig;
  }
  oops::Task free;
  free.id = "free";
  free.success = [](const oops::MachineState&) { return false; };
  auto res = oops::dovetail(free, setup.weights, setup.global_steps);

  std::ostringstream tsv;
  tsv << "phase\tprogram\tnew_output\n";
  for (const auto& ev : res.events) {
    tsv << ev.phase << '\t' << oops::program_to_string(ev.program) << '\t';
    for (size_t i = 0; i < ev.new_output.size(); ++i)
      tsv << (i ? " " : "") << ev.new_output[i];
    tsv << '\n';
  }
  if (!write_file(c.out_dir, "dovetail.tsv", tsv.str())) return kExitConfig;
  std::cout << tsv.str();
  return kExitOk;
}

int cmd_verify(const Common& c, const std::string& store_path,
               const std::string& which) {
  oops::RunSetup setup;
  if (!load_setup(c, setup)) return kExitConfig;
  std::ifstream f(store_path);
  if (!f) {
    std::cerr << "config error: cannot open store '" << store_path << "'\n";
    return kExitConfig;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  auto store = oops::FrozenStore::from_text(buf.str());
  if (!store) {
    std::cerr << "config error: malformed store '" << store_path << "'\n";
    return kExitConfig;
  }
  if (store->count() == 0) {
    std::cout << "warning: empty store, nothing to verify\n";
    return kExitOk;
  }

  std::vector<size_t> indices;
  if (which == "last") {
    indices.push_back(store->count() - 1);
  } else if (which == "all") {
    for (size_t i = 0; i < store->count(); ++i) indices.push_back(i);
  } else {
    size_t i = 0;
    try {
      i = std::stoul(which);
    } catch (...) {
      std::cerr << "config error: --program must be last, all, or an index\n";
      return kExitConfig;
    }
    if (i >= store->count()) {
      std::cerr << "config error: program index out of range\n";
      return kExitConfig;
    }
    indices.push_back(i);
  }

  bool all_ok = true;
  for (size_t i : indices) {
    const auto& prog = store->program(i);
    for (const auto& task : setup.tasks) {
      bool ok = run_frozen_on(prog, task, setup.weights, setup.ceiling);
      if (!ok) {
        all_ok = false;
        std::cout << "FAIL program " << i << " on " << task.id << "\n";
      }
    }
  }
  std::cout << (all_ok ? "verified\n" : "verification failed\n");
  return all_ok ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OOPS universal program search harness"};
  app.require_subcommand(1);

  Common c_oops, c_lsearch, c_als, c_guess, c_tail, c_dove, c_verify;
  std::string store_path, which = "last";

  auto* s_oops = app.add_subcommand("oops", "incremental OOPS solver");
  add_common(s_oops, c_oops);
  auto* s_ls = app.add_subcommand("lsearch", "phase-doubling search");
  add_common(s_ls, c_lsearch);
  auto* s_als = app.add_subcommand("als", "adaptive lsearch (reward update)");
  add_common(s_als, c_als);
  auto* s_guess = app.add_subcommand("guess-sample", "one GUESS trace");
  add_common(s_guess, c_guess);
  auto* s_tail = app.add_subcommand("speed-tail", "runtime tail estimate");
  add_common(s_tail, c_tail);
  auto* s_dove = app.add_subcommand("dovetail", "all-programs dovetailer");
  add_common(s_dove, c_dove);
  auto* s_verify = app.add_subcommand("verify", "re-run frozen programs");
  add_common(s_verify, c_verify);
  s_verify->add_option("--store", store_path, "frozen store file")->required();
  s_verify->add_option("--program", which, "last | all | <index>");
  app.add_subcommand("dump-isa", "print the instruction table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (s_oops->parsed()) return cmd_oops(c_oops);
  if (s_ls->parsed()) return cmd_lsearch(c_lsearch, false);
  if (s_als->parsed()) return cmd_lsearch(c_als, true);
  if (s_guess->parsed()) return cmd_guess(c_guess);
  if (s_tail->parsed()) return cmd_speedtail(c_tail);
  if (s_dove->parsed()) return cmd_dovetail(c_dove);
  if (s_verify->parsed()) return cmd_verify(c_verify, store_path, which);
  std::cout << oops::dump_isa();
  return kExitOk;
}
