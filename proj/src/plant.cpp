#include "eeafs/plant.hpp"

#include "eeafs/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace eeafs {

namespace {

std::vector<double> trim_leading_zeros(const std::vector<double>& p)
{
    std::size_t i = 0;
    while (i + 1 < p.size() && p[i] == 0.0)
        ++i;
    return {p.begin() + static_cast<std::ptrdiff_t>(i), p.end()};
}

void derivative(const StateSpaceModel& m, const std::vector<double>& x, double u,
                std::vector<double>& dx)
{
    for (std::size_t i = 0; i < m.n; ++i) {
        double acc = m.b[i] * u;
        const double* row = &m.a[i * m.n];
        for (std::size_t j = 0; j < m.n; ++j)
            acc += row[j] * x[j];
        dx[i] = acc;
    }
}

} // namespace

void validate(const TransferFunction& tf)
{
    if (tf.num.empty() || tf.den.empty())
        throw std::invalid_argument("transfer function needs numerator and denominator");
    for (double v : tf.num)
        if (!std::isfinite(v))
            throw std::invalid_argument("transfer function numerator not finite");
    for (double v : tf.den)
        if (!std::isfinite(v))
            throw std::invalid_argument("transfer function denominator not finite");
    const auto den = trim_leading_zeros(tf.den);
    const auto num = trim_leading_zeros(tf.num);
    if (den.front() == 0.0)
        throw std::invalid_argument("transfer function denominator is zero");
    if (den.size() < 2)
        throw std::invalid_argument("transfer function must have at least one pole");
    if (num.size() > den.size())
        throw std::invalid_argument("improper transfer function");
}

StateSpaceModel tf_to_ss(const TransferFunction& tf)
{
    validate(tf);
    const auto den = trim_leading_zeros(tf.den);
    const auto raw_num = trim_leading_zeros(tf.num);
    const std::size_t n = den.size() - 1;
    const double lead = den.front();

    // den: s^n + a1 s^(n-1) + ... + an, num padded to n+1 coefficients.
    std::vector<double> a(n + 1), num(n + 1, 0.0);
    for (std::size_t k = 0; k <= n; ++k)
        a[k] = den[k] / lead;
    for (std::size_t k = 0; k < raw_num.size(); ++k)
        num[n + 1 - raw_num.size() + k] = raw_num[k] / lead;

    StateSpaceModel m;
    m.n = n;
    m.a.assign(n * n, 0.0);
    m.b.assign(n, 0.0);
    m.c.assign(n, 0.0);
    m.d = num[0];
    for (std::size_t j = 0; j < n; ++j)
        m.a[j] = -a[j + 1];
    for (std::size_t i = 1; i < n; ++i)
        m.a[i * n + (i - 1)] = 1.0;
    m.b[0] = 1.0;
    for (std::size_t j = 0; j < n; ++j)
        m.c[j] = num[j + 1] - num[0] * a[j + 1];
    return m;
}

double output(const StateSpaceModel& model, const std::vector<double>& x, double u)
{
    double y = model.d * u;
    for (std::size_t i = 0; i < model.n; ++i)
        y += model.c[i] * x[i];
    return y;
}

PlantState rest_state(const StateSpaceModel& model)
{
    PlantState s;
    s.x.assign(model.n, 0.0);
    return s;
}

PlantState integrate(const StateSpaceModel& model, const PlantState& state, double dt,
                     double max_substep, const SubstepObserver& observer)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("integrate: dt must be > 0");
    if (!(max_substep > 0.0))
        throw std::invalid_argument("integrate: substep must be > 0");

    const std::size_t n = model.n;
    const auto steps = static_cast<std::size_t>(std::ceil(dt / max_substep - 1e-9));
    const std::size_t count = steps == 0 ? 1 : steps;
    const double h = dt / static_cast<double>(count);
    const double u = state.u_held;

    PlantState next = state;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    double y_prev = output(model, next.x, u);

    for (std::size_t s = 0; s < count; ++s) {
        auto& x = next.x;
        derivative(model, x, u, k1);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + 0.5 * h * k1[i];
        derivative(model, tmp, u, k2);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + 0.5 * h * k2[i];
        derivative(model, tmp, u, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + h * k3[i];
        derivative(model, tmp, u, k4);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(x[i]))
                throw SimulationError("plant state became non-finite");
        }
        const double y = output(model, x, u);
        if (observer)
            observer(h, y_prev, y);
        y_prev = y;
    }
    next.y = y_prev;
    return next;
}

} // namespace eeafs
