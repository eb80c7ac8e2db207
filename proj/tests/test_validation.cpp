#include <gtest/gtest.h>

#include <set>

#include "tomodyn/validation.hpp"

using namespace tomodyn;

TEST(Validate, DefaultRunPasses) {
  const ValidationReport rep = run_validation();
  EXPECT_GE(rep.checks.size(), 9u);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.max_error << " " << c.detail;
  EXPECT_TRUE(rep.residual_table.empty());
  std::set<std::string> names;
  for (const auto& c : rep.checks) names.insert(c.name);
  EXPECT_EQ(names.size(), rep.checks.size());
}

TEST(Validate, ZeroToleranceFails) {
  ValidationOptions opts;
  opts.tolerance_override = 0.0;
  const ValidationReport rep = run_validation(opts);
  EXPECT_FALSE(rep.passed());
  EXPECT_NE(format_report(rep, false).find("FAIL"), std::string::npos);
}

TEST(Validate, VerboseEmitsResidualTable) {
  ValidationOptions opts;
  opts.verbose = true;
  const ValidationReport rep = run_validation(opts);
  EXPECT_EQ(rep.residual_table.size(), 5u * 600u);
  EXPECT_NE(format_report(rep, true).find("residual table"), std::string::npos);
}
