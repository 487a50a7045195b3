#include "fibra/numerics.hpp"

#include <cmath>
#include <limits>

#include "fibra/sampling.hpp"

namespace fibra {

std::size_t step_count(double T, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("step size must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("horizon must be non-negative");
  // Absorb the rounding in T/h for horizons that are whole multiples of h.
  const double n = std::ceil(T / h - 1e-9);
  return n > 0.0 ? static_cast<std::size_t>(n) : 0;
}

Trajectory integrate(const GlobalField& field, std::span<const double> x0, double T, double h) {
  const std::size_t d = field.dim();
  if (x0.size() != d) throw std::invalid_argument("initial state has the wrong dimension");
  const std::size_t steps = step_count(T, h);

  Trajectory traj;
  traj.h = h;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.emplace_back(x0.begin(), x0.end());

  std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
  std::vector<double> x(x0.begin(), x0.end());
  for (std::size_t s = 1; s <= steps; ++s) {
    field.evaluate(x, k1);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    field.evaluate(tmp, k2);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    field.evaluate(tmp, k3);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * k3[i];
    field.evaluate(tmp, k4);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(x[i])) throw IntegrationError("non-finite state", s);
    }
    traj.times.push_back(static_cast<double>(s) * h);
    traj.states.push_back(x);
  }
  return traj;
}

double state_distance(const StateIndex& index, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("state dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = index.is_circle(i) ? circle_distance(x[i], y[i]) : std::abs(x[i] - y[i]);
    if (std::isnan(d)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, d);
  }
  return worst;
}

namespace {

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::abs(x[i] - y[i]);
    if (std::isnan(d)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace

double verify_conjugacy_pointwise(const NetworkMap& m, const VirtualVectorField& w, std::size_t samples,
                                  std::uint64_t seed, Execution exec) {
  const PhaseSpaceMap P = phase_space_map(m);
  const GlobalField upstairs = interconnect(w);
  const GlobalField downstairs = interconnect(pullback(m, w));
  return max_over(exec, samples, [&](std::size_t i) {
    Rng rng = stream(seed, i);
    const std::vector<double> x = sample_total_state(*m.codomain, rng);
    const std::vector<double> lhs = P.differential(upstairs(x));
    const std::vector<double> rhs = downstairs(P(x));
    return max_abs_diff(lhs, rhs);
  });
}

double verify_conjugacy_flow(const NetworkMap& m, const VirtualVectorField& w, std::span<const double> x0,
                             double T, double h) {
  const PhaseSpaceMap P = phase_space_map(m);
  const GlobalField upstairs = interconnect(w);
  const GlobalField downstairs = interconnect(pullback(m, w));
  const Trajectory big = integrate(upstairs, x0, T, h);
  const Trajectory small = integrate(downstairs, P(x0), T, h);
  double worst = 0.0;
  for (std::size_t k = 0; k < big.states.size(); ++k) {
    worst = std::max(worst, state_distance(downstairs.index(), P(big.states[k]), small.states[k]));
  }
  return worst;
}

double verify_polydiagonal_invariance(const NetworkMap& m, const VirtualVectorField& w,
                                      std::span<const double> x0, double T, double h, double tol) {
  const Polydiagonal delta = polydiagonal_of(m);
  if (!delta.contains(x0, tol)) {
    throw std::invalid_argument("initial state is not on the polydiagonal (violation " +
                                std::to_string(delta.violation(x0)) + ")");
  }
  const GlobalField field = interconnect(pullback(m, w));
  const Trajectory traj = integrate(field, x0, T, h);
  double worst = 0.0;
  for (const auto& x : traj.states) worst = std::max(worst, delta.violation(x));
  return worst;
}

DrivingReport verify_driving_decomposition(const NetworkMap& m, const VirtualVectorField& w, std::size_t samples,
                                           std::uint64_t seed, double step, double tol) {
  DrivingReport report;
  const Network& big = *m.codomain;
  std::set<NodeId> image;
  for (const auto& [a, b] : m.node_map) image.insert(b);

  report.injective_fibration =
      check_network_map(m).empty() && is_injective_on_nodes(m) && check_fibration(m).is_fibration;
  report.no_feedback = true;
  for (const Edge& e : big.graph().edges) {
    if (!image.count(e.src) && image.count(e.tgt)) report.no_feedback = false;
  }

  const GlobalField field = interconnect(w);
  const StateIndex& index = field.index();
  std::vector<std::size_t> inside, outside;
  for (const NodeId& a : index.order()) {
    const Slice& s = index.slice(a);
    auto& bucket = image.count(a) ? inside : outside;
    for (std::size_t k = 0; k < s.length; ++k) bucket.push_back(s.offset + k);
  }

  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = stream(seed, i);
    std::vector<double> x = sample_total_state(big, rng);
    for (std::size_t j : outside) {
      const double keep = x[j];
      x[j] = keep + step;
      const std::vector<double> up = field(x);
      x[j] = keep - step;
      const std::vector<double> down = field(x);
      x[j] = keep;
      for (std::size_t k : inside) {
        double d = std::abs(up[k] - down[k]) / (2.0 * step);
        if (std::isnan(d)) d = std::numeric_limits<double>::infinity();
        report.fd_residual = std::max(report.fd_residual, d);
      }
    }
  }
  report.holds = report.injective_fibration && report.no_feedback && report.fd_residual < tol;
  return report;
}

std::map<NodeId, std::set<NodeId>> dependency_pattern(const GlobalField& field, std::span<const double> x,
                                                      double step, double tol) {
  const StateIndex& index = field.index();
  std::map<NodeId, std::set<NodeId>> out;
  for (const NodeId& a : index.order()) out[a];
  std::vector<double> probe(x.begin(), x.end());
  for (const NodeId& c : index.order()) {
    const Slice& cs = index.slice(c);
    for (std::size_t k = 0; k < cs.length; ++k) {
      const std::size_t j = cs.offset + k;
      const double keep = probe[j];
      probe[j] = keep + step;
      const std::vector<double> up = field(probe);
      probe[j] = keep - step;
      const std::vector<double> down = field(probe);
      probe[j] = keep;
      for (const NodeId& a : index.order()) {
        const Slice& as = index.slice(a);
        for (std::size_t i = as.offset; i < as.offset + as.length; ++i) {
          if (std::abs(up[i] - down[i]) / (2.0 * step) > tol) out[a].insert(c);
        }
      }
    }
  }
  return out;
}

}  // namespace fibra
