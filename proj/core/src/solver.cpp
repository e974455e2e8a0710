#include "ec/solver.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "detail.hpp"

namespace ec {

namespace {

VectorField add_scaled(const VectorField& a, double s, const VectorField& b) {
  VectorField r = a;
  r.axpy(s, b);
  return r;
}

VectorProfile add_scaled(const VectorProfile& p, double s, const std::pair<VectorField, VectorField>& k, double t) {
  return {add_scaled(p.plus, s, k.first), add_scaled(p.minus, s, k.second), t};
}

double pair_norm(const std::pair<VectorField, VectorField>& k) {
  return std::hypot(l2_norm(k.first), l2_norm(k.second));
}

void truncate(VectorField& u, double band) {
  for (auto& c : u.c)
    detail::apply_symbol(c, [band](double a, double b, double d) {
      return detail::modulus(a, b, d) <= band ? 1.0 : 0.0;
    });
}

VectorField real_part(const VectorField& u) {
  VectorField out(u.grid());
  for (int i = 0; i < 3; ++i) {
    const CArray p = inverse_transform(u[i]);
    RArray r(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) r[j] = p[j].real();
    out[i] = transform(u.grid(), r);
  }
  return out;
}

void scale_to_sup(VectorField& u, double amplitude) {
  const double s = sup_norm(u);
  if (s > 0.0) u *= amplitude / s;
}

}  // namespace

VectorField make_initial(const Grid& g, const InitialData& d) {
  VectorField u(g);
  switch (d.kind) {
    case InitialKind::gaussian_smalldata: {
      const double w = d.width > 0.0 ? d.width : g.L() / 8.0;
      RArray G(g.size());
      for (std::size_t i = 0; i < G.size(); ++i) {
        const Vec3 x = g.position(i);
        G[i] = std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * w * w));
      }
      VectorField a(g);
      a[0] = transform(g, G);
      u = curl(a);
      if (d.band > 0.0) truncate(u, d.band);
      break;
    }
    case InitialKind::random_bandlimited:
    case InitialKind::beltrami: {
      const double band = d.band > 0.0 ? d.band : 4.0 / g.L();
      std::mt19937_64 rng(d.seed);
      std::normal_distribution<double> nd;
      for (auto& c : u.c)
        detail::for_modes(g, [&](std::size_t i, double a, double b, double e) {
          const double r = detail::modulus(a, b, e);
          if (r > 0.0 && r <= band) c[i] = cplx(nd(rng), nd(rng));
        });
      u = leray_project(real_part(u));
      if (d.kind == InitialKind::beltrami) u = helical_project(u, +1);
      break;
    }
  }
  for (auto& c : u.c) {
    dealias_inplace(c);
    c[0] = 0.0;
  }
  u.divergence_free = true;
  scale_to_sup(u, d.amplitude);
  return u;
}

bool cfl_ok(const Grid& g, double dt, double sup_u) { return dt * g.kmax() * sup_u <= 0.5; }

VectorField velocity_rhs(const VectorField& u, bool linear) {
  VectorField r = leray_project(cross_e3(u));
  r *= -1.0;
  if (!linear) r += euler_nonlinearity(u);
  r.divergence_free = true;
  return r;
}

VectorProfile step_profile(const VectorProfile& p, double dt, bool linear, double* dtf_norm) {
  if (linear) {
    if (dtf_norm) *dtf_norm = 0.0;
    return {p.plus, p.minus, p.time + dt};
  }
  const double t = p.time;
  const auto k1 = rhs_profile(p);
  if (dtf_norm) *dtf_norm = pair_norm(k1);
  const auto k2 = rhs_profile(add_scaled(p, dt / 2, k1, t + dt / 2));
  const auto k3 = rhs_profile(add_scaled(p, dt / 2, k2, t + dt / 2));
  const auto k4 = rhs_profile(add_scaled(p, dt, k3, t + dt));
  VectorProfile out{p.plus, p.minus, t + dt};
  for (const auto& [k, w] : {std::pair{&k1, 1.0}, {&k2, 2.0}, {&k3, 2.0}, {&k4, 1.0}}) {
    out.plus.axpy(dt * w / 6.0, k->first);
    out.minus.axpy(dt * w / 6.0, k->second);
  }
  out.plus.divergence_free = out.minus.divergence_free = true;
  return out;
}

namespace {

bool uses_profile(const SolverConfig& c) {
  return c.formulation == Formulation::profile || c.integrator == Integrator::rk4_lawson;
}

VectorField step_velocity(const VectorField& u, double dt, bool linear) {
  const VectorField k1 = velocity_rhs(u, linear);
  const VectorField k2 = velocity_rhs(add_scaled(u, dt / 2, k1), linear);
  const VectorField k3 = velocity_rhs(add_scaled(u, dt / 2, k2), linear);
  const VectorField k4 = velocity_rhs(add_scaled(u, dt, k3), linear);
  VectorField out = u;
  out.axpy(dt / 6.0, k1);
  out.axpy(dt / 3.0, k2);
  out.axpy(dt / 3.0, k3);
  out.axpy(dt / 6.0, k4);
  out = leray_project(out);
  out.divergence_free = true;
  return out;
}

}  // namespace

VectorField step(const VectorField& u, double t, const SolverConfig& cfg, double* dtf_norm) {
  if (uses_profile(cfg))
    return velocity_from_profiles(step_profile(profiles_from_velocity(u, t), cfg.dt, cfg.linear, dtf_norm));
  if (dtf_norm) *dtf_norm = std::nan("");
  return step_velocity(u, cfg.dt, cfg.linear);
}

double helicity(const VectorField& u) {
  const VectorField w = curl(u);
  double h = 0.0;
  for (int i = 0; i < 3; ++i) h += inner(u[i], w[i]).real();
  return h;
}

TrajectoryRecord run(const SolverConfig& cfg, const VectorField& u0, const RowCallback& on_row) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end >= cfg.t_start)) throw std::invalid_argument("run: need dt > 0 and t_end >= t_start");
  if (!cfg.dealias) throw std::invalid_argument("run: undealiased products are not supported");
  const Grid& g = u0.grid();
  const double sup0 = sup_norm(u0);
  if (!cfl_ok(g, cfg.dt, sup0)) {
    std::ostringstream os;
    os << "CFL violated: dt * kmax * sup|u0| = " << cfg.dt * g.kmax() * sup0 << " > 0.5";
    throw std::invalid_argument(os.str());
  }
  if (cfg.snapshot_stride > 0 && !cfg.snapshot_dir.empty()) std::filesystem::create_directories(cfg.snapshot_dir);

  TrajectoryRecord rec;
  const bool prof = uses_profile(cfg);
  const double grad0 = grad_sup(u0);
  rec.initial_l2 = l2_norm(u0);
  VectorField u = u0;
  VectorProfile p;
  if (prof) p = profiles_from_velocity(u0, cfg.t_start);
  VectorProfile scatter_ref = p;
  double scatter_t = cfg.t_start;

  const auto nsteps = std::size_t(std::llround((cfg.t_end - cfg.t_start) / cfg.dt));
  for (std::size_t s = 0;; ++s) {
    const double t = cfg.t_start + double(s) * cfg.dt;
    if (prof) u = velocity_from_profiles(p);
    const bool last = s == nsteps;
    double dtf = std::nan("");
    VectorProfile next;
    if (prof && !last) next = step_profile(p, cfg.dt, cfg.linear, &dtf);
    if (prof && last) dtf = cfg.linear ? 0.0 : pair_norm(rhs_profile(p));

    if (s % std::size_t(std::max(cfg.monitor_stride, 1)) == 0 || last) {
      TrajectoryRow row;
      row.t = t;
      row.l2 = l2_norm(u);
      row.h4 = norm(u, {NormKind::Hn, 4}).value;
      row.sup = sup_norm(u);
      row.div = divergence_residual(u);
      row.helicity = helicity(u);
      row.dtf = dtf;
      rec.rows.push_back(row);
      if (rec.initial_l2 > 0.0) rec.max_rel_drift = std::max(rec.max_rel_drift, std::fabs(row.l2 / rec.initial_l2 - 1.0));
      rec.max_div = std::max(rec.max_div, row.div);
      if (cfg.keep_snapshots) rec.snapshots.push_back({t, u});
      if (on_row) on_row(row, u);
      if (!std::isfinite(row.l2) || !std::isfinite(row.sup)) {
        rec.aborted = true;
        rec.abort_reason = "non-finite state at t = " + std::to_string(t);
        break;
      }
      if (grad0 > 0.0 && grad_sup(u) > 1e3 * grad0) {
        rec.aborted = true;
        rec.abort_reason = "sup|grad u| exceeded 1e3 times its initial value at t = " + std::to_string(t);
        break;
      }
    }
    if (cfg.snapshot_stride > 0 && !cfg.snapshot_dir.empty() && s % std::size_t(cfg.snapshot_stride) == 0) {
      std::ostringstream name;
      name << cfg.snapshot_dir << "/u_" << std::setw(6) << std::setfill('0') << s << ".ecs";
      write_snapshot(name.str(), {&u[0], &u[1], &u[2]}, "velocity", t);
    }
    if (prof && cfg.scatter_interval > 0.0 && t > scatter_t + 1e-9 &&
        std::fabs(std::remainder(t - cfg.t_start, cfg.scatter_interval)) < 1e-9 * std::max(1.0, t)) {
      rec.scatter.push_back({scatter_t, t, profile_distance(p, scatter_ref)});
      scatter_ref = p;
      scatter_t = t;
    }
    if (last) break;
    if (prof) {
      p = std::move(next);
    } else {
      u = step_velocity(u, cfg.dt, cfg.linear);
    }
    ++rec.steps;
  }
  rec.final_u = prof ? velocity_from_profiles(p) : u;
  return rec;
}

void TrajectoryRecord::write_csv(const std::string& path,
                                 const std::vector<std::pair<std::string, double>>& final_fields) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << std::setprecision(12);
  os << "time,l2,h4,sup,div,helicity,dtf";
  for (const auto& [k, v] : final_fields) os << ',' << k;
  os << '\n';
  const std::string pad(final_fields.size(), ',');
  for (const auto& r : rows)
    os << r.t << ',' << r.l2 << ',' << r.h4 << ',' << r.sup << ',' << r.div << ',' << r.helicity << ',' << r.dtf << pad
       << '\n';
  if (!final_fields.empty()) {
    os << "final,,,,,,";
    for (const auto& [k, v] : final_fields) os << ',' << v;
    os << '\n';
  }
}

std::string to_string(Formulation f) { return f == Formulation::profile ? "profile" : "velocity"; }
std::string to_string(Integrator i) { return i == Integrator::rk4_lawson ? "rk4_lawson" : "rk4_plain"; }

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::gaussian_smalldata:
      return "gaussian_smalldata";
    case InitialKind::beltrami:
      return "beltrami";
    case InitialKind::random_bandlimited:
      return "random_bandlimited";
  }
  return "?";
}

InitialKind initial_kind_from_string(const std::string& s) {
  for (auto k : {InitialKind::gaussian_smalldata, InitialKind::beltrami, InitialKind::random_bandlimited})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown initial data kind: " + s);
}

}  // namespace ec
