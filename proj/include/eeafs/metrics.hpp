#ifndef EEAFS_METRICS_HPP
#define EEAFS_METRICS_HPP

#include <span>

#include "eeafs/feedback_scheduler.hpp"

namespace eeafs {

// Integral of absolute error.
struct LoopCost {
    double iae = 0.0;
};

struct EnergyAccumulator {
    double integral_e = 0.0; // integral of alpha^2 dt
    double elapsed = 0.0;

    double average() const { return elapsed > 0.0 ? integral_e / elapsed : 0.0; }
};

// Normalized energy alpha^2.
double instantaneous_energy(double alpha);

// Energy at the minimum-energy speed for the given periods.
double energy_of_periods(std::span<const TaskLoad> tasks);

// Exact for a constant-speed segment.
void accumulate(EnergyAccumulator& acc, double alpha, double dt);

// Trapezoid over one substep with |e| at both ends.
void accumulate_iae(LoopCost& cost, double e_abs_begin, double e_abs_end, double dt);

// Held absolute error over dt.
inline void accumulate_iae(LoopCost& cost, double e_abs, double dt)
{
    accumulate_iae(cost, e_abs, e_abs, dt);
}

double total_cost(std::span<const LoopCost> costs);

// Difference of two energy fractions in percentage points (91.8% - 48.0% = 43.8).
inline double percentage_point_decrease(double baseline, double other)
{
    return 100.0 * (baseline - other);
}

// Relative change of `other` against `baseline`, in percent.
inline double relative_change_percent(double baseline, double other)
{
    return 100.0 * (other - baseline) / baseline;
}

} // namespace eeafs

#endif
