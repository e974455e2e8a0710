// Acceptance suite: one PASS/FAIL line per criterion. With arguments, runs
// only the listed criterion numbers. Exit status is nonzero if any fail.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ec/experiments.hpp"

using namespace ec;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<ExperimentFn> runs;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "spectral identities", {spectral_identities}},
      {2, "multiplier audit", {multiplier_audit_run}},
      {3, "nonlinearity consistency", {nonlinearity_consistency_run}},
      {4, "vector-field calculus", {vector_field_identities}},
      {5, "linear dispersive decay", {linear_decay}},
      {6, "slab concentration", {slab_profile}},
      {7, "(h,q) and (v,p) localized decay", {hq_dispersion, vp_dispersion}},
      {8, "wave packets", {wavepacket}},
      {9, "telescoping exactness", {telescope_audit}},
      {10, "finite propagation", {commutator_probe}},
      {11, "nonlinear small-data run", {nonlinear_smalldata}},
      {12, "integrator order", {integrator_order}},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  const ExperimentParams params;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    bool pass = true;
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& run : c.runs) {
      try {
        const ExperimentResult r = run(params);
        pass = pass && r.pass;
        detail += (detail.empty() ? "" : " | ") + r.name + ": " + r.summary;
      } catch (const std::exception& e) {
        pass = false;
        detail += (detail.empty() ? "" : " | ") + std::string("error: ") + e.what();
      }
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(), detail.c_str(),
                sec);
    std::fflush(stdout);
    failed += !pass;
  }
  return failed == 0 ? 0 : 1;
}
