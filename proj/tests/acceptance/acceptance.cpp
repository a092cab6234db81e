#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "bergtoep/verify.hpp"

// Prints one PASS/FAIL line per criterion. Optional arguments select
// criterion ids; exit status is 1 when any selected criterion fails.
int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  const bergtoep::VerifyReport report = bergtoep::run_verify_suite(ids);
  for (const auto& c : report.criteria)
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                c.detail.c_str(), c.seconds);
  std::fflush(stdout);
  return report.all_pass() ? 0 : 1;
}
