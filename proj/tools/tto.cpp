// tto: build | verify | spectrum | invert
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "tto/cli.hpp"

namespace {

int write_text(const std::string& path, const std::string& text, std::string& err) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    err = "cannot write " + path;
    return tto::cli::kConfigError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Toeplitz operators on model spaces"};
  app.set_version_flag("--version", std::string("tto ") + tto::cli::kVersion);
  app.require_subcommand(1, 1);

  std::string config_path, zeros, alpha, out, plot;
  int grid = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"build", "write the basis, shifts, class shifts, TTO matrices and Clark measures"},
      {"verify", "run the verification suites and write a JSON report"},
      {"spectrum", "CSV of Clark atoms, weights and eigenvalues for the first unimodular alpha"},
      {"invert", "invert phi(S) in the class of each alpha and recover the inverse symbol"},
  };
  for (const auto& [name, about] : commands) {
    auto* sub = app.add_subcommand(name, about);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--u-zeros", zeros, "zeros of u as \"re,im,mult;...\"");
    sub->add_option("--alpha", alpha, "parameters as \"re,im;...\" (\"inf\" allowed)");
    sub->add_option("--grid", grid, "boundary grid size (power of two >= 256)");
    sub->add_option("--tol", tol, "residual tolerance");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out, "output path (default stdout)");
    if (std::string(name) == "spectrum") sub->add_option("--plot", plot, "write (angle, weight) pairs here");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tto::cli::kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommands().front();

  std::string err;
  const int code = tto::cli::guarded(
      [&]() -> int {
        using tto::json;
        json merged = tto::cli::default_config();
        if (!config_path.empty()) tto::cli::merge_into(merged, tto::cli::read_config_file(config_path));
        json flags = json::object();
        if (sub->count("--u-zeros")) {
          json u = merged.at("u");
          u["zeros"] = tto::cli::parse_zeros_flag(zeros);
          flags["u"] = u;
        }
        if (sub->count("--alpha")) flags["alpha"] = tto::cli::parse_alpha_flag(alpha);
        if (sub->count("--grid")) flags["grid"] = grid;
        if (sub->count("--tol")) flags["tol"] = tol;
        if (sub->count("--seed")) flags["seed"] = seed;
        if (sub->count("--out")) flags["out"] = out;
        if (command == "spectrum" && sub->count("--plot")) flags["plot"] = plot;
        tto::cli::merge_into(merged, flags);

        const auto cfg = tto::cli::parse_config(merged);
        const auto result = tto::cli::run_command(command, cfg);
        if (int w = write_text(cfg.out, result.text, err)) return w;
        if (!cfg.plot.empty() && !result.plot.empty())
          if (int w = write_text(cfg.plot, result.plot, err)) return w;
        return result.exit_code;
      },
      err);
  if (!err.empty()) std::cerr << "tto: " << err << "\n";
  return code;
}
