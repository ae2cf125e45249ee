#ifndef EEAFS_PLANT_HPP
#define EEAFS_PLANT_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace eeafs {

inline constexpr double kDefaultPlantSubstep = 1e-4;

// Polynomial coefficients in descending powers of s.
struct TransferFunction {
    std::vector<double> num;
    std::vector<double> den;
};

// Single-input single-output, A stored row-major.
struct StateSpaceModel {
    std::size_t n = 0;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;
    double d = 0.0;
};

struct PlantState {
    std::vector<double> x;
    double u_held = 0.0;
    double y = 0.0;
};

void validate(const TransferFunction& tf);

// Controllable canonical realization.
StateSpaceModel tf_to_ss(const TransferFunction& tf);

// Output for state `x` and input `u`.
double output(const StateSpaceModel& model, const std::vector<double>& x, double u);

PlantState rest_state(const StateSpaceModel& model);

// Called once per RK4 substep with (substep length, y at start, y at end).
using SubstepObserver = std::function<void(double, double, double)>;

// Advances the plant by `dt` under the held input with classical RK4,
// splitting into equal substeps no longer than `max_substep`.
// Throws SimulationError if the state stops being finite.
PlantState integrate(const StateSpaceModel& model, const PlantState& state, double dt,
                     double max_substep = kDefaultPlantSubstep,
                     const SubstepObserver& observer = {});

} // namespace eeafs

#endif
