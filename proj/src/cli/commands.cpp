#include "sklevy/cli/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sklevy/cli/config_io.hpp"
#include "sklevy/cli/csv.hpp"
#include "sklevy/decomposition.hpp"
#include "sklevy/errors.hpp"
#include "sklevy/experiments.hpp"
#include "sklevy/integrator.hpp"
#include "sklevy/kernels/kernels.hpp"

#ifndef SKLEVY_VERSION
#define SKLEVY_VERSION "unknown"
#endif

namespace sklevy::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

// Raw flag text keyed by config or experiment key; only flags that were given
// end up in the overrides.
struct FlagSet {
  std::map<std::string, std::string> text;
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, bool> switches;
  std::map<std::string, CLI::Option*> switch_options;

  void add(CLI::App& app, const std::string& flag, const std::string& key,
           const std::string& help) {
    options[key] = app.add_option(flag, text[key], help);
  }
  void add_switch(CLI::App& app, const std::string& flag, const std::string& key,
                  const std::string& help) {
    switch_options[key] = app.add_flag(flag, switches[key], help);
  }
  bool given(const std::string& key) const {
    const auto it = options.find(key);
    return it != options.end() && it->second->count() > 0;
  }
};

struct Invocation {
  std::string name;
  FlagSet model;
  FlagSet experiment;
  std::string config_file;
  std::string out_dir;
  std::size_t threads = 0;
};

struct Context {
  std::string subcommand;
  ModelConfig config;
  json experiment;  // resolved experiment parameters
  fs::path out_dir;
  ExperimentOptions opt;
  json outputs = json::array();
  json cells = json::array();
  std::ostream* out = nullptr;

  fs::path write(const std::string& name, const CsvTable& table) {
    const fs::path p = out_dir / name;
    write_csv(p, table);
    outputs.push_back(name);
    *out << "wrote " << p.string() << '\n';
    return p;
  }
  std::vector<double> list(const char* key) const {
    return experiment.at(key).get<std::vector<double>>();
  }
  std::size_t replicates() const { return experiment.at("replicates").get<std::size_t>(); }
};

void add_model_flags(CLI::App& app, FlagSet& f, bool eps_is_list) {
  if (!eps_is_list) f.add(app, "--eps", "eps", "Mass parameter eps in (0,1]");
  f.add(app, "--theta", "theta", "Noise exponent theta in [0,1)");
  f.add(app, "--alpha", "alpha", "Stability index in (1,2)");
  f.add(app, "--c", "c", "Noise intensity c > 0");
  f.add(app, "--dim", "dim", "State dimension");
  f.add(app, "--drift", "drift", "zero | linear | sine | tanh");
  f.add(app, "--drift-a", "drift_a", "Drift amplitude, or a in f(x) = a x + b");
  f.add(app, "--drift-b", "drift_b", "Offset b of the linear drift");
  f.add(app, "--u0", "u0", "Initial position, comma separated");
  f.add(app, "--v0", "v0", "Initial velocity, comma separated");
  f.add(app, "--T", "T", "Time horizon");
  f.add(app, "--n-steps", "n_steps", "Uniform steps (default: power of two >= 10 T / eps)");
  f.add(app, "--seed", "seed", "Master seed");
  f.add(app, "--noise-scale", "noise_scale", "Factor on every increment; 0 disables noise");
}

json model_overrides(const FlagSet& f) {
  json o = json::object();
  for (const auto& [key, value] : f.text) {
    if (f.given(key)) o[key] = value;
  }
  return o;
}

// Defaults, then manifest values, then flags.
json resolve_experiment(const json& defaults, const json& from_file, const FlagSet& flags,
                        const std::vector<std::string>& list_keys) {
  json e = defaults;
  for (const auto& [key, value] : from_file.items()) {
    if (!defaults.contains(key)) throw ParameterError("unknown experiment key '" + key + "'");
    e[key] = value;
  }
  for (const auto& [key, value] : flags.text) {
    if (!flags.given(key)) continue;
    const bool is_list =
        std::find(list_keys.begin(), list_keys.end(), key) != list_keys.end();
    if (is_list) {
      e[key] = parse_number_list(value);
    } else if (defaults.at(key).is_number_unsigned() || defaults.at(key).is_number_integer()) {
      const double v = parse_number(value);
      if (!(v >= 0.0) || v != std::floor(v)) {
        throw ParameterError("--" + key + " must be a nonnegative integer");
      }
      e[key] = static_cast<std::uint64_t>(v);
    } else if (defaults.at(key).is_number()) {
      e[key] = parse_number(value);
    } else {
      e[key] = value;
    }
  }
  for (const auto& [key, on] : flags.switches) {
    if (flags.switch_options.at(key)->count() > 0) e[key] = on;
  }
  for (const auto& key : list_keys) {
    if (e.contains(key) && e[key].is_string()) e[key] = parse_number_list(e[key].get<std::string>());
  }
  return e;
}

void write_manifest(Context& ctx, double total_seconds) {
  json m;
  m["tool"] = "sklevy";
  m["version"] = SKLEVY_VERSION;
  m["subcommand"] = ctx.subcommand;
  m["seed"] = ctx.config.seed;
  m["config"] = config_to_json(ctx.config);
  m["experiment"] = ctx.experiment;
  m["outputs"] = ctx.outputs;
  m["cells"] = ctx.cells;
  m["wall_seconds"] = total_seconds;
  const fs::path p = ctx.out_dir / "manifest.json";
  write_file_atomic(p, m.dump(2) + "\n");
  *ctx.out << "wrote " << p.string() << '\n';
}

void append_nodes(std::vector<std::string>& row, const GridPath& p, std::size_t k) {
  for (double v : p.node(k)) row.push_back(format_double(v));
}

void append_components(std::vector<std::string>& row, std::span<const double> v) {
  for (double x : v) row.push_back(format_double(x));
}

RandomStream single_stream(const Context& ctx) {
  return RandomStream(ctx.config.seed,
                      replicate_stream_id(0, static_cast<std::uint32_t>(
                                                 ctx.experiment.at("replicate").get<std::uint64_t>())));
}

// --- subcommands -----------------------------------------------------------

void cmd_sample(Context& ctx) {
  const ModelConfig& c = ctx.config;
  const auto start = Clock::now();
  RandomStream rng = single_stream(ctx);
  const bool split = ctx.experiment.at("split").get<bool>();
  NoiseRealization noise;
  if (split) {
    if (c.noise_scale != 1.0) throw ParameterError("split mode requires noise_scale = 1");
    noise = sample_noise_realization(c.stable, uniform_grid(c.T, c.n_steps), rng,
                                     SplitSpec{ctx.experiment.at("levy_k").get<double>()});
  } else {
    noise = sample_model_noise(c, rng);
  }
  const std::size_t d = noise.dim;
  CsvTable table;
  table.header = {"t"};
  for (auto& col : component_columns("L", d)) table.header.push_back(col);
  std::vector<double> small_cum(d, 0.0);
  if (split) {
    for (auto& col : component_columns("Lsmall", d)) table.header.push_back(col);
  }
  const auto L = noise.cumulative();
  for (std::size_t k = 0; k <= noise.steps(); ++k) {
    std::vector<std::string> row{format_double(noise.times[k])};
    append_components(row, std::span<const double>(L).subspan(k * d, d));
    if (split) {
      if (k > 0) {
        for (std::size_t i = 0; i < d; ++i) small_cum[i] += noise.small_increments[(k - 1) * d + i];
      }
      append_components(row, small_cum);
    }
    table.add_row(std::move(row));
  }
  ctx.write("noise.csv", table);
  if (split) {
    CsvTable jumps;
    jumps.header = {"t"};
    for (auto& col : component_columns("x", d)) jumps.header.push_back(col);
    for (const auto& j : noise.large_jumps) {
      std::vector<std::string> row{format_double(j.time)};
      append_components(row, j.x);
      jumps.add_row(std::move(row));
    }
    ctx.write("jumps.csv", jumps);
    *ctx.out << "large jumps: " << noise.large_jumps.size() << '\n';
  }
  ctx.cells.push_back({{"cell", 0}, {"eps", c.eps}, {"n_steps", c.n_steps},
                       {"wall_seconds", std::chrono::duration<double>(Clock::now() - start).count()}});
}

void cmd_simulate(Context& ctx) {
  const ModelConfig& c = ctx.config;
  const auto start = Clock::now();
  RandomStream rng = single_stream(ctx);
  const NoiseRealization noise = sample_model_noise(c, rng);
  CoupledOptions opts;
  opts.linear = ctx.experiment.at("linear").get<bool>();
  opts.ou = ctx.experiment.at("ou").get<bool>();
  const auto tr = simulate_coupled(c, noise, opts);
  const std::size_t d = c.stable.dim;
  CsvTable table;
  table.header = {"t"};
  const auto add_group = [&](const char* name) {
    for (auto& col : component_columns(name, d)) table.header.push_back(col);
  };
  add_group("U");
  add_group("V");
  add_group("Ubar");
  if (opts.linear) {
    add_group("ulin");
    add_group("vlin");
  }
  if (opts.ou) add_group("Z");
  for (std::size_t k = 0; k <= c.n_steps; ++k) {
    std::vector<std::string> row{format_double(noise.times[k])};
    append_nodes(row, tr.U, k);
    append_nodes(row, tr.V, k);
    append_nodes(row, tr.Ubar, k);
    if (opts.linear) {
      append_nodes(row, *tr.u_lin, k);
      append_nodes(row, *tr.v_lin, k);
    }
    if (opts.ou) append_nodes(row, *tr.Z, k);
    table.add_row(std::move(row));
  }
  ctx.write(ctx.experiment.at("out").get<std::string>(), table);
  ctx.cells.push_back({{"cell", 0}, {"eps", c.eps}, {"n_steps", c.n_steps},
                       {"wall_seconds", std::chrono::duration<double>(Clock::now() - start).count()}});
}

void cmd_decompose(Context& ctx) {
  const ModelConfig& c = ctx.config;
  const auto start = Clock::now();
  RandomStream rng = single_stream(ctx);
  const NoiseRealization noise = sample_model_noise(c, rng);
  const auto sf = integrate_slow_fast(c, noise);
  const GridPath ubar = integrate_limit(c, noise);
  const auto dec = split_velocity(c, noise, sf.U);
  const auto res = drift_residual(sf.U, ubar, dec, c, noise);
  const std::size_t d = c.stable.dim;

  CsvTable table;
  table.header = {"t"};
  for (const char* name : {"V", "V1bar", "V2bar", "V3bar", "Vrec"}) {
    for (auto& col : component_columns(name, d)) table.header.push_back(col);
  }
  CsvTable resid;
  resid.header = {"t", "I1", "I2", "I3", "I4"};
  for (std::size_t k = 0; k <= c.n_steps; ++k) {
    std::vector<std::string> row{format_double(noise.times[k])};
    append_nodes(row, sf.V, k);
    append_nodes(row, dec.V1bar, k);
    append_nodes(row, dec.V2bar, k);
    append_nodes(row, dec.V3bar, k);
    append_nodes(row, dec.V_reconstructed, k);
    table.add_row(std::move(row));
    std::vector<std::string> r{format_double(noise.times[k])};
    for (const char* key : {"I1", "I2", "I3", "I4"}) append_nodes(r, res.at(key), k);
    resid.add_row(std::move(r));
  }
  ctx.write(ctx.experiment.at("out").get<std::string>(), table);
  ctx.write(ctx.experiment.at("residuals").get<std::string>(), resid);
  *ctx.out << "max |V - Vrec| = "
           << kernels::max_abs_diff(sf.V.values(), dec.V_reconstructed.values()) << '\n';
  ctx.cells.push_back({{"cell", 0}, {"eps", c.eps}, {"n_steps", c.n_steps},
                       {"wall_seconds", std::chrono::duration<double>(Clock::now() - start).count()}});
}

std::vector<std::string> summary_cells(const EnsembleSummary& s) {
  return {format_double(s.theta),        format_double(s.eps),    std::to_string(s.n_steps),
          std::to_string(s.replicates),  format_double(s.mean),   format_double(s.ci_half_width),
          format_double(s.median),       format_double(s.trimmed_mean), format_double(s.q05),
          format_double(s.q25),          format_double(s.q75),    format_double(s.q95)};
}

void cmd_rate(Context& ctx) {
  const auto thetas = ctx.list("theta_list");
  const auto eps = ctx.list("eps_list");
  const auto sweep = run_theta_sweep(ctx.config, thetas, eps, ctx.replicates(), ctx.opt);
  CsvTable fits;
  fits.header = {"theta", "slope", "intercept", "r_squared", "median_slope"};
  CsvTable cells;
  cells.header = {"theta", "eps",  "n_steps", "replicates", "mean", "ci_half_width",
                  "median", "trimmed_mean", "q05", "q25", "q75", "q95"};
  // Rows follow the order the thetas were given in.
  for (double th : thetas) {
    const auto& r = sweep.at(th);
    fits.add_row({format_double(th), format_double(r.fit.slope), format_double(r.fit.intercept),
                  format_double(r.fit.r_squared), format_double(r.fit.median_slope)});
    for (const auto& s : r.cells) {
      cells.add_row(summary_cells(s));
      ctx.cells.push_back({{"cell", s.cell}, {"eps", s.eps}, {"theta", s.theta},
                           {"n_steps", s.n_steps}, {"wall_seconds", s.wall_seconds}});
    }
    *ctx.out << "theta " << th << ": slope " << r.fit.slope << ", R^2 " << r.fit.r_squared
             << '\n';
  }
  ctx.write("rate.csv", fits);
  ctx.write("rate_cells.csv", cells);
}

void cmd_dichotomy(Context& ctx) {
  const auto rows = run_skorokhod_dichotomy(ctx.config, ctx.list("eps_list"), ctx.replicates(),
                                            ctx.opt);
  CsvTable t;
  t.header = {"eps", "n_steps", "replicates", "median_skorokhod", "median_uniform",
              "median_largest_jump", "mean_skorokhod", "mean_uniform"};
  for (double lv : kExceedanceLevels) t.header.push_back("p_skorokhod_gt_" + format_double(lv));
  for (double lv : kExceedanceLevels) t.header.push_back("p_uniform_gt_" + format_double(lv));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::vector<std::string> row{format_double(r.eps),
                                 std::to_string(r.n_steps),
                                 std::to_string(r.replicates),
                                 format_double(r.median_skorokhod),
                                 format_double(r.median_uniform),
                                 format_double(r.median_largest_jump),
                                 format_double(r.mean_skorokhod),
                                 format_double(r.mean_uniform)};
    for (double p : r.exceed_skorokhod) row.push_back(format_double(p));
    for (double p : r.exceed_uniform) row.push_back(format_double(p));
    t.add_row(std::move(row));
    ctx.cells.push_back({{"cell", i}, {"eps", r.eps}, {"n_steps", r.n_steps},
                         {"wall_seconds", r.wall_seconds}});
  }
  ctx.write("dichotomy.csv", t);
}

void cmd_ou_floor(Context& ctx) {
  const ModelConfig& c = ctx.config;
  const auto table = run_ou_floor(ctx.list("eps_list"), c.stable, c.T, ctx.replicates(), c.seed,
                                  c.noise_scale, ctx.opt);
  CsvTable t;
  t.header = {"eps",    "n_steps",  "replicates",         "mean_sup",
              "median_sup", "ci_sup", "mean_abs_terminal", "median_abs_terminal"};
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    t.add_row({format_double(r.eps), std::to_string(r.n_steps), std::to_string(r.replicates),
               format_double(r.mean_sup), format_double(r.median_sup), format_double(r.ci_sup),
               format_double(r.mean_abs_terminal), format_double(r.median_abs_terminal)});
    ctx.cells.push_back({{"cell", i}, {"eps", r.eps}, {"n_steps", r.n_steps},
                         {"wall_seconds", r.wall_seconds}});
  }
  ctx.write("ou_floor.csv", t);
  CsvTable fit;
  fit.header = {"min_mean_sup", "terminal_slope", "terminal_intercept", "terminal_r_squared"};
  fit.add_row({format_double(table.min_mean_sup), format_double(table.terminal_scale_fit.slope),
               format_double(table.terminal_scale_fit.intercept),
               format_double(table.terminal_scale_fit.r_squared)});
  ctx.write("ou_floor_fit.csv", fit);
  *ctx.out << "terminal scale slope " << table.terminal_scale_fit.slope << '\n';
}

void cmd_moments(Context& ctx) {
  const auto table = run_moment_sweep(ctx.config, ctx.list("eps_list"), ctx.replicates(), ctx.opt);
  CsvTable t;
  t.header = {"eps", "n_steps", "replicates", "mean_sup", "median_sup", "ci_sup"};
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    t.add_row({format_double(r.eps), std::to_string(r.n_steps), std::to_string(r.replicates),
               format_double(r.mean_sup), format_double(r.median_sup), format_double(r.ci_sup)});
    ctx.cells.push_back({{"cell", i}, {"eps", r.eps}, {"n_steps", r.n_steps},
                         {"wall_seconds", r.wall_seconds}});
  }
  ctx.write("moments.csv", t);
  *ctx.out << "max/min of E sup|U| = " << table.max_mean / table.min_mean << '\n';
}

struct Command {
  const char* name;
  const char* help;
  bool eps_is_list;
  json defaults;
  std::vector<std::string> list_keys;
  std::function<void(CLI::App&, FlagSet&)> flags;
  std::function<void(Context&)> body;
};

std::vector<Command> command_table() {
  const auto replicate_flag = [](CLI::App& app, FlagSet& f) {
    f.add(app, "--replicate", "replicate", "Replicate index selecting the noise stream");
  };
  const auto list_flags = [](CLI::App& app, FlagSet& f) {
    f.add(app, "--eps", "eps_list", "eps values: b^i..b^j or a comma list");
    f.add(app, "--n", "replicates", "Replicates per cell");
  };
  return {
      {"sample", "Sample a stable noise path (optionally with explicit large jumps)", false,
       {{"replicate", 0u}, {"split", false}, {"levy_k", 1.0}}, {},
       [=](CLI::App& app, FlagSet& f) {
         replicate_flag(app, f);
         f.add_switch(app, "--split", "split", "Simulate large jumps explicitly (dim 1)");
         f.add(app, "--levy-k", "levy_k", "Levy density constant of the large jumps");
       },
       cmd_sample},
      {"simulate", "Integrate U^eps, V^eps and the limit Ubar on shared noise", false,
       {{"replicate", 0u}, {"out", "paths.csv"}, {"linear", false}, {"ou", false}}, {},
       [=](CLI::App& app, FlagSet& f) {
         replicate_flag(app, f);
         f.add(app, "--out", "out", "Path CSV file name");
         f.add_switch(app, "--linear", "linear", "Also integrate the drift-free system");
         f.add_switch(app, "--ou", "ou", "Also integrate the OU convolution Z");
       },
       cmd_simulate},
      {"decompose", "Velocity decomposition and drift residuals of one path", false,
       {{"replicate", 0u}, {"out", "decomposition.csv"}, {"residuals", "residuals.csv"}}, {},
       [=](CLI::App& app, FlagSet& f) {
         replicate_flag(app, f);
         f.add(app, "--out", "out", "Decomposition CSV file name");
         f.add(app, "--residuals", "residuals", "Residual CSV file name");
       },
       cmd_decompose},
      {"rate", "Fit the convergence rate of E sup|U - Ubar| in eps", true,
       {{"eps_list", parse_number_list("2^-3..2^-8")},
        {"theta_list", std::vector<double>{0.25, 0.5, 0.75}},
        {"replicates", 200u}},
       {"eps_list", "theta_list"},
       [=](CLI::App& app, FlagSet& f) {
         list_flags(app, f);
         f.add(app, "--theta", "theta_list", "theta values, comma separated");
       },
       cmd_rate},
      {"dichotomy", "Skorokhod versus uniform distance at theta = 0", true,
       {{"eps_list", parse_number_list("2^-3..2^-7")}, {"replicates", 200u}},
       {"eps_list"}, list_flags, cmd_dichotomy},
      {"ou-floor", "Supremum and terminal scale of the OU convolution", true,
       {{"eps_list", std::vector<double>{0.1, 0.05, 0.02, 0.01, 0.005, 0.002}},
        {"replicates", 500u}},
       {"eps_list"}, list_flags, cmd_ou_floor},
      {"moments", "E sup|U^eps| across eps", true,
       {{"eps_list", parse_number_list("2^0..2^-8")}, {"replicates", 200u}},
       {"eps_list"}, list_flags, cmd_moments},
  };
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("sklevy: Smoluchowski-Kramers limits driven by stable Levy noise");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("sklevy ") + SKLEVY_VERSION);

  auto commands = command_table();
  std::vector<Invocation> invocations(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    auto& cmd = commands[i];
    auto& inv = invocations[i];
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    inv.name = cmd.name;
    add_model_flags(*sub, inv.model, cmd.eps_is_list);
    // theta is a list for rate and is registered by the command itself.
    if (std::string(cmd.name) == "rate") {
      sub->remove_option(inv.model.options.at("theta"));
      inv.model.options.erase("theta");
      inv.model.text.erase("theta");
    }
    cmd.flags(*sub, inv.experiment);
    sub->add_option("--config", inv.config_file, "JSON config file or run manifest");
    sub->add_option("--out-dir", inv.out_dir,
                    std::string("Output directory (default: $") + kOutDirEnv + " or .)");
    sub->add_option("--threads", inv.threads, "Worker threads (0: all cores)");
    subs.push_back(sub);
  }

  std::vector<const char*> argv{"sklevy"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    std::size_t idx = 0;
    while (!subs[idx]->parsed()) ++idx;
    const Command& cmd = commands[idx];
    Invocation& inv = invocations[idx];
    const auto start = Clock::now();

    std::optional<fs::path> config_file;
    json file_experiment = json::object();
    if (!inv.config_file.empty()) {
      config_file = inv.config_file;
      std::ifstream in(inv.config_file);
      if (!in) throw ParameterError("cannot open config file " + inv.config_file);
      json whole;
      try {
        in >> whole;
      } catch (const json::parse_error& e) {
        throw ParameterError("config file " + inv.config_file + " is not valid JSON: " + e.what());
      }
      if (whole.is_object() && whole.contains("subcommand")) {
        if (whole["subcommand"] != cmd.name) {
          throw ParameterError("manifest was written by '" +
                               whole["subcommand"].get<std::string>() + "', not '" + cmd.name +
                               "'");
        }
        if (whole.contains("experiment")) file_experiment = whole["experiment"];
      }
    }

    Context ctx;
    ctx.subcommand = cmd.name;
    ctx.out = &out;
    ctx.config = load_config(config_file, model_overrides(inv.model));
    ctx.experiment = resolve_experiment(cmd.defaults, file_experiment, inv.experiment, cmd.list_keys);
    ctx.opt.threads = inv.threads;
    if (!inv.out_dir.empty()) {
      ctx.out_dir = inv.out_dir;
    } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
      ctx.out_dir = env;
    } else {
      ctx.out_dir = ".";
    }
    cmd.body(ctx);
    write_manifest(ctx, std::chrono::duration<double>(Clock::now() - start).count());
    return 0;
  } catch (const std::exception& e) {
    err << "sklevy: error: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace sklevy::cli
