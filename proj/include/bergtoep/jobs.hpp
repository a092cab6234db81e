#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "bergtoep/config.hpp"
#include "bergtoep/errors.hpp"

namespace bergtoep {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitBudget = 3,
  kExitVerifyFailed = 4,
};

const std::vector<std::string>& job_commands();

// Runs one command and writes <out>/<command>.json or .csv. Library errors are
// serialized into the report and mapped to an exit code; `log` gets one line
// per verify criterion and a summary otherwise.
int run_job(const std::string& command, const JobConfig& cfg, const std::filesystem::path& out, std::ostream& log);

int exit_code_for(const Error& e);

}  // namespace bergtoep
