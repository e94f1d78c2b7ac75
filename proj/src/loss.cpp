#include "hvdc/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace hvdc {

double true_loss_unchecked(const QuadraticLossModel& m, double flow_mw) {
    const double f = std::abs(flow_mw);
    return m.a0_mw + m.b * f + m.c_per_mw * f * f;
}

double eval_true_loss(const QuadraticLossModel& m, double flow_mw) {
    if (std::abs(flow_mw) > m.p_max_mw) {
        throw std::domain_error("eval_true_loss: |flow| exceeds rated p_max");
    }
    return true_loss_unchecked(m, flow_mw);
}

double true_variable_loss(const QuadraticLossModel& m, double flow_mw) {
    const double f = std::abs(flow_mw);
    return m.b * f + m.c_per_mw * f * f;
}

LinearLossFactor linearize_secant(const QuadraticLossModel& m) {
    if (m.p_max_mw <= 0.0) {
        throw std::invalid_argument("linearize_secant: p_max must be positive");
    }
    return LinearLossFactor{m.b + m.c_per_mw * m.p_max_mw};
}

PwlLossModel build_pwl(const QuadraticLossModel& m, int segments) {
    if (segments < 1) {
        throw std::invalid_argument("build_pwl: need at least one segment");
    }
    if (m.p_max_mw <= 0.0) {
        throw std::invalid_argument("build_pwl: p_max must be positive");
    }
    PwlLossModel pwl;
    pwl.breakpoints.reserve(static_cast<std::size_t>(segments) + 1);
    pwl.slopes.reserve(static_cast<std::size_t>(segments));
    const double width = m.p_max_mw / segments;
    pwl.breakpoints.push_back(0.0);
    for (int k = 1; k <= segments; ++k) {
        const double x_lo = width * (k - 1);
        const double x_hi = (k == segments) ? m.p_max_mw : width * k;
        pwl.breakpoints.push_back(x_hi);
        // secant of b*f + c*f^2 over [x_lo, x_hi]
        pwl.slopes.push_back(m.b + m.c_per_mw * (x_lo + x_hi));
    }
    return pwl;
}

double eval_pwl(const PwlLossModel& model, double flow_mw) {
    if (model.breakpoints.size() < 2 || model.slopes.size() + 1 != model.breakpoints.size()) {
        throw std::invalid_argument("eval_pwl: malformed model");
    }
    const double f = std::abs(flow_mw);
    if (f > model.breakpoints.back()) {
        throw std::domain_error("eval_pwl: |flow| beyond last breakpoint");
    }
    double loss = 0.0;
    for (std::size_t k = 0; k < model.slopes.size(); ++k) {
        const double lo = model.breakpoints[k];
        const double hi = model.breakpoints[k + 1];
        if (f <= lo) {
            break;
        }
        const double occupied = std::min(f, hi) - lo;
        loss += model.slopes[k] * occupied;
    }
    return loss;
}

std::vector<LossSegment> segments_up_to(const PwlLossModel& model, double bound_mw) {
    std::vector<LossSegment> out;
    for (std::size_t k = 0; k < model.slopes.size(); ++k) {
        const double lo = model.breakpoints[k];
        const double hi = model.breakpoints[k + 1];
        if (bound_mw <= lo) {
            break;
        }
        out.push_back(LossSegment{std::min(bound_mw, hi) - lo, model.slopes[k]});
    }
    return out;
}

}  // namespace hvdc
