// Acceptance run: one PASS/FAIL line per criterion at the published parameters.
//
// Exit status is 0 when the set of failing criteria equals the set given with
// --expect-fail (empty by default), so a known, documented failure does not mask new ones.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <set>
#include <string>

#include "curvex/validation.hpp"

using namespace curvex;

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> expect_fail;
  std::vector<int> only;
  app.add_option("--expect-fail", expect_fail, "criteria known to fail");
  app.add_option("--only", only, "run just these criteria");
  CLI11_PARSE(app, argc, argv);

  const RunConfig published;
  auto want = [&](int id) { return only.empty() || std::count(only.begin(), only.end(), id) > 0; };

  std::set<int> failed;
  auto report = [&](int id, const CheckResult& r, double budget_s, bool counts = true) {
    const bool in_time = r.seconds <= budget_s;
    const bool ok = r.passed && in_time;
    std::printf("criterion %d%s: %s  %s  measured=%.3e tol=%.1e  %.1f s (budget %.0f s)\n  %s\n",
                id, counts ? "" : " (companion)", ok ? "PASS" : "FAIL", r.name.c_str(),
                r.measured, r.tolerance, r.seconds, budget_s, r.detail.c_str());
    std::fflush(stdout);
    if (counts && !ok) failed.insert(id);
  };

  if (want(1)) report(1, check_weak_form(published, 20, 5), 30);
  if (want(2)) {
    report(2, check_spectral_sum_pointwise(published, 200, 10, 1e-6), 10);
    report(2, check_kernel_oracle(published, 10, 1e-6), 10, false);
  }
  if (want(3)) report(3, check_morse_poles(published, 2.0), 60);
  if (want(4)) report(4, check_uncoupled_absorption(published), 60);
  if (want(5)) {
    report(5, check_partitioning_limits(published, 0.125, 0.5), 60);
    auto weak = check_partitioning_limits(published, 1.0 / 800.0, 1.0 / 200.0);
    weak.name = "partitioning limits, weak coupling";
    report(5, weak, 60, false);
  }
  if (want(6))
    report(6,
           check_wavepacket_identity(published, acceptance_identity_options(published),
                                     {10300.0, 10900.0, 11500.0, 12100.0, 12700.0}, 0.02),
           600);
  if (want(7)) report(7, check_discrete_solve(published), 120);
  if (want(8)) report(8, check_raman_sensitivity(published, published.scan), 600);

  std::set<int> expected;
  for (int id : expect_fail)
    if (want(id)) expected.insert(id);
  std::printf("%zu criteria failed", failed.size());
  for (int id : failed) std::printf(" %d", id);
  std::printf("\n");
  if (failed != expected) {
    std::printf("unexpected outcome: expected failures");
    for (int id : expected) std::printf(" %d", id);
    std::printf("\n");
    return 1;
  }
  return 0;
}
