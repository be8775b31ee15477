#include "semilab/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"semilab: experiments for the semilinear Dirichlet problem Δu = 2φ(u)"};
  app.require_subcommand(1);

  for (const auto& name : semilab::command_names()) {
    auto* sub = app.add_subcommand(name);
    auto opts = std::make_shared<semilab::RunOptions>();
    auto out = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(0);
    auto tol = std::make_shared<double>(0.0);
    sub->add_option("--config", opts->config, "experiment config (JSON)")->required();
    auto* out_opt = sub->add_option("--out", *out, "output directory");
    auto* seed_opt = sub->add_option("--seed", *seed, "master seed for path simulation");
    auto* tol_opt = sub->add_option("--tol", *tol, "solver tolerance")->check(CLI::PositiveNumber);
    sub->callback([=] {
      if (out_opt->count() > 0) opts->out = *out;
      if (seed_opt->count() > 0) opts->seed = *seed;
      if (tol_opt->count() > 0) opts->tol = *tol;
      const int status = semilab::run(name, *opts);
      if (status != semilab::exit_ok)
        std::cerr << "semilab " << name << ": failed with exit status " << status << " (see report.json)\n";
      throw CLI::RuntimeError(status);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : semilab::exit_precondition;
  }
  return 0;
}
