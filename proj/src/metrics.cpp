#include "eeafs/metrics.hpp"

#include "eeafs/errors.hpp"

#include <stdexcept>
#include <string>

namespace eeafs {

double instantaneous_energy(double alpha)
{
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("instantaneous_energy: alpha " + std::to_string(alpha) +
                                    " outside (0, 1]");
    return alpha * alpha;
}

double energy_of_periods(std::span<const TaskLoad> tasks)
{
    double omega = 0.0;
    for (const auto& t : tasks) {
        if (!(t.period > 0.0))
            throw std::invalid_argument("energy_of_periods: period must be > 0");
        omega += t.c_nom / t.period;
    }
    if (omega > 1.0)
        throw InfeasibleError("energy_of_periods: workload exceeds 1");
    return omega * omega;
}

void accumulate(EnergyAccumulator& acc, double alpha, double dt)
{
    if (dt < 0.0)
        throw std::invalid_argument("accumulate: dt must be >= 0");
    acc.integral_e += alpha * alpha * dt;
    acc.elapsed += dt;
}

void accumulate_iae(LoopCost& cost, double e_abs_begin, double e_abs_end, double dt)
{
    if (dt < 0.0)
        throw std::invalid_argument("accumulate_iae: dt must be >= 0");
    cost.iae += 0.5 * (e_abs_begin + e_abs_end) * dt;
}

double total_cost(std::span<const LoopCost> costs)
{
    double sum = 0.0;
    for (const auto& c : costs)
        sum += c.iae;
    return sum;
}

} // namespace eeafs
