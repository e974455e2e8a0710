#include <cmath>

#include <gtest/gtest.h>

#include "ec/solver.hpp"

using namespace ec;

namespace {

VectorField beltrami(const Grid& g, double amp) {
  InitialData d;
  d.kind = InitialKind::beltrami;
  d.amplitude = amp;
  d.band = 3.0;
  return make_initial(g, d);
}

}  // namespace

TEST(Solver, ZeroDataStaysZero) {
  const Grid g(16, 1.0);
  SolverConfig c;
  c.dt = 0.05;
  c.t_end = 0.2;
  const TrajectoryRecord r = run(c, VectorField(g, true));
  EXPECT_FALSE(r.aborted);
  for (const auto& row : r.rows) EXPECT_EQ(row.l2, 0.0);
  EXPECT_EQ(l2_norm(r.final_u), 0.0);
}

TEST(Solver, LinearProfileIsFrozen) {
  const Grid g(16, 1.0);
  const VectorField u0 = beltrami(g, 0.5);
  SolverConfig c;
  c.dt = 0.1;
  c.t_end = 1.0;
  c.linear = true;
  const TrajectoryRecord r = run(c, u0);
  const VectorProfile a = profiles_from_velocity(u0, 0.0);
  const VectorProfile b = profiles_from_velocity(r.final_u, 1.0);
  EXPECT_LT(profile_distance(a, b), 1e-13 * l2_norm(u0));
  EXPECT_LT(r.max_rel_drift, 1e-13);
}

TEST(Solver, RejectsCflViolation) {
  const Grid g(16, 1.0);
  SolverConfig c;
  c.dt = 5.0;
  c.t_end = 10.0;
  EXPECT_THROW(run(c, beltrami(g, 1.0)), std::invalid_argument);
}

TEST(Solver, FormulationsAgree) {
  const Grid g(16, 1.0);
  const VectorField u0 = beltrami(g, 0.3);
  SolverConfig a;
  a.dt = 0.02;
  a.t_end = 0.2;
  SolverConfig b = a;
  b.formulation = Formulation::velocity;
  b.integrator = Integrator::rk4_plain;
  const VectorField ua = run(a, u0).final_u, ub = run(b, u0).final_u;
  EXPECT_LT(l2_norm(ua - ub), 1e-6 * l2_norm(u0));
}

TEST(Solver, EnergyConservedNonlinear) {
  const Grid g(16, 1.0);
  InitialData d;
  d.kind = InitialKind::random_bandlimited;
  d.amplitude = 0.2;
  d.band = 3.0;
  SolverConfig c;
  c.dt = 0.02;
  c.t_end = 0.4;
  const TrajectoryRecord r = run(c, make_initial(g, d));
  EXPECT_LT(r.max_rel_drift, 1e-6);
  EXPECT_LT(r.max_div, 1e-10);
}
