#include <CLI11.hpp>

#include <iostream>

#include "bergtoep/config.hpp"
#include "bergtoep/errors.hpp"
#include "bergtoep/jobs.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Truncated Toeplitz products on the vector-valued Bergman space"};
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::size_t jobs = 0;
  app.add_option("command", command, "classify | berezin | a2 | cz | revholder | verify | sweep")
      ->required()
      ->check(CLI::IsMember(bergtoep::job_commands()));
  app.add_option("--config", config_path, "job config (JSON)")->required();
  app.add_option("--out", out_dir, "report directory");
  app.add_option("--jobs", jobs, "worker threads, overrides the config")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : bergtoep::kExitValidation;
  }

  try {
    bergtoep::JobConfig cfg = bergtoep::parse_config(config_path);
    if (jobs > 0) cfg.jobs = jobs;
    return bergtoep::run_job(command, cfg, out_dir, std::cout);
  } catch (const bergtoep::Error& e) {
    std::cerr << "bergtoep: " << e.what() << "\n";
    return bergtoep::exit_code_for(e);
  }
}
