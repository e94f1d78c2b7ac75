#pragma once

#include "hvdc/network.hpp"

#include <vector>

namespace hvdc {

/// Linear market loss factor: modeled loss = gamma * |flow|, applied
/// symmetrically to both directions. 0 <= gamma < 1.
struct LinearLossFactor {
    double gamma = 0.0;
};

/// Convex piecewise-linear approximation of the flow-variable loss.
/// breakpoints[0] = 0, breakpoints[N] = p_max; slopes[k] covers
/// (breakpoints[k], breakpoints[k+1]]. Slopes are non-decreasing.
struct PwlLossModel {
    std::vector<double> breakpoints;
    std::vector<double> slopes;
};

/// One segment of a direction-symmetric loss approximation, as used by the
/// market LP: a flow part of at most width_mw burning slope MW per MW.
struct LossSegment {
    double width_mw = 0.0;
    double slope = 0.0;
};

/// True loss a0 + b*|f| + c*f^2. Rejects |f| > p_max.
double eval_true_loss(const QuadraticLossModel& model, double flow_mw);

/// Flow-variable part b*|f| + c*f^2 of the true loss (no a0, no rating check).
double true_variable_loss(const QuadraticLossModel& model, double flow_mw);

/// True loss formula evaluated without the rating check. Flows beyond p_max
/// extrapolate the quadratic; used when settling pinned exchanges.
double true_loss_unchecked(const QuadraticLossModel& model, double flow_mw);

/// Secant of the flow-variable loss through the rated point:
/// gamma = b + c * p_max. The constant a0 is excluded from market factors.
LinearLossFactor linearize_secant(const QuadraticLossModel& model);

/// Equal-width segmentation with secant slopes over each segment:
/// s_k = b + c * (x_{k-1} + x_k). Matches the flow-variable true loss
/// exactly at every breakpoint.
PwlLossModel build_pwl(const QuadraticLossModel& model, int segments);

/// Piecewise-linear loss at signed flow f: sum of slope * occupied width
/// over |f|. Continuous, convex, even. Rejects |f| beyond the last breakpoint.
double eval_pwl(const PwlLossModel& model, double flow_mw);

/// Segment list of the approximation truncated at `bound_mw` (e.g. the ATC
/// of one direction). Segments keep their slopes; the one containing the
/// bound is shortened, later ones are dropped.
std::vector<LossSegment> segments_up_to(const PwlLossModel& model, double bound_mw);

}  // namespace hvdc
