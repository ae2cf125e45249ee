#ifndef EEAFS_CONTROLLER_HPP
#define EEAFS_CONTROLLER_HPP

namespace eeafs {

// Continuous-time PID: kp + ki/s + kd*s.
struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
};

struct PidState {
    double integral = 0.0; // ki * integral of e
    double prev_error = 0.0;
    double prev_h = 0.0;
};

struct PidOutput {
    double u = 0.0;
    PidState state;
};

void validate(const PidGains& gains);

// Backward-Euler integral and backward-difference derivative over the
// interval `h` that ended at this sample.
PidOutput pid_step(const PidGains& gains, const PidState& state, double e, double h);

// Zeroed state whose derivative term starts at 0 for `first_error`.
PidState pid_reset(double first_error);

// Signed control error r - y.
inline double sample_error(double r, double y) { return r - y; }

} // namespace eeafs

#endif
