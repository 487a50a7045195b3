#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "fibra/dynamics.hpp"
#include "fibra/fibrations.hpp"
#include "fibra/kernels.hpp"

namespace fibra {

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// Fixed-step RK4 trajectory. Circle coordinates are stored unwrapped.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  double h = 0.0;
  const char* integrator = "rk4";
};

// ceil(T/h) classic RK4 steps from t0 = 0. Throws IntegrationError when a
// state stops being finite.
Trajectory integrate(const GlobalField& field, std::span<const double> x0, double T, double h);

std::size_t step_count(double T, double h);

// Max coordinate distance, using the S^1 metric on circle coordinates.
double state_distance(const StateIndex& index, std::span<const double> x, std::span<const double> y);

// Default tolerances.
inline constexpr double kSyncTolerance = 1e-9;
inline constexpr double kFiniteDifferenceStep = 1e-6;
inline constexpr double kDrivingTolerance = 1e-8;

struct ConjugacyReport {
  double pointwise_max_residual = 0.0;
  double flow_max_deviation = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double h = 0.0;
  double T = 0.0;
};

// Max over samples x' of |D(Pphi) X'(x') - X(Pphi x')| with X' the
// interconnection of w' and X that of phi^* w'.
double verify_conjugacy_pointwise(const NetworkMap& m, const VirtualVectorField& w, std::size_t samples,
                                  std::uint64_t seed, Execution exec = Execution::kParallel);

// Integrates both systems and returns the max over all steps of the distance
// between Pphi(x'(t)) and x(t) started at Pphi(x'0).
double verify_conjugacy_flow(const NetworkMap& m, const VirtualVectorField& w, std::span<const double> x0,
                             double T, double h);

// Max distance from the polydiagonal of the domain trajectory of
// I(phi^* w') started at x0. Throws std::invalid_argument when x0 is not on
// the polydiagonal (within tol).
double verify_polydiagonal_invariance(const NetworkMap& m, const VirtualVectorField& w,
                                      std::span<const double> x0, double T, double h,
                                      double tol = kSyncTolerance);

struct DrivingReport {
  bool injective_fibration = false;
  // No codomain edge runs from outside the image into the image.
  bool no_feedback = false;
  // Max central-difference derivative of image components with respect to
  // non-image coordinates.
  double fd_residual = 0.0;
  bool holds = false;
};

DrivingReport verify_driving_decomposition(const NetworkMap& m, const VirtualVectorField& w, std::size_t samples,
                                           std::uint64_t seed, double step = kFiniteDifferenceStep,
                                           double tol = kDrivingTolerance);

// For each node a, the nodes c whose coordinates change component a
// (central differences, threshold tol) at state x.
std::map<NodeId, std::set<NodeId>> dependency_pattern(const GlobalField& field, std::span<const double> x,
                                                      double step = kFiniteDifferenceStep, double tol = 1e-7);

}  // namespace fibra
