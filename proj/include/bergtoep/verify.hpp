#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bergtoep/bergman.hpp"

namespace bergtoep {

struct CorpusEntry {
  std::string name;
  PolyMatrixSymbol f;
  PolyMatrixSymbol g;
};

// Fixed symbol pairs followed by seeded random ones.
std::vector<CorpusEntry> builtin_corpus();
// Symbols with det F(z) != 0 on the closed disk.
std::vector<CorpusEntry> zero_free_corpus();

struct CriterionResult {
  int id;
  std::string title;
  bool pass;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 13;

CriterionResult run_criterion(int id, std::size_t jobs = 0);

struct VerifyReport {
  std::vector<CriterionResult> criteria;
  std::optional<double> derivative_constant;
  bool all_pass() const;
};

// ids empty runs every criterion in order.
VerifyReport run_verify_suite(const std::vector<int>& ids = {}, std::size_t jobs = 0);

}  // namespace bergtoep
