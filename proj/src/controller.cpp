#include "eeafs/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace eeafs {

void validate(const PidGains& gains)
{
    if (!std::isfinite(gains.kp) || !std::isfinite(gains.ki) || !std::isfinite(gains.kd))
        throw std::invalid_argument("PID gains must be finite");
}

PidOutput pid_step(const PidGains& gains, const PidState& state, double e, double h)
{
    if (!(h > 0.0))
        throw std::invalid_argument("pid_step: h must be > 0");
    PidOutput out;
    out.state.integral = state.integral + gains.ki * h * e;
    out.state.prev_error = e;
    out.state.prev_h = h;
    out.u = gains.kp * e + out.state.integral + gains.kd * (e - state.prev_error) / h;
    return out;
}

PidState pid_reset(double first_error)
{
    PidState s;
    s.prev_error = first_error;
    return s;
}

} // namespace eeafs
