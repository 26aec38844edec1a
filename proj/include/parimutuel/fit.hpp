#pragma once

#include <map>
#include <span>

#include <Eigen/Core>

#include "parimutuel/distributions.hpp"

namespace parimutuel {

struct SeriesPoint {
    double t = 0.0;
    double value = 0.0;
};

/// Exponential-polynomial regression F(t) ~ exp(c0 + c1 t [+ c2 t^2 + c3 t^3]).
struct FitResult {
    Eigen::VectorXd coefficients;  // c0..c_order
    double residual_sum = 0.0;     // sum of squared residuals of log F
    int model_order = 1;

    double evaluate(double t) const;
};

/// Least squares on log F against a polynomial in t of degree `order` (1 or 3).
/// Throws DomainError for F <= 0 and SingularSystemError for a rank-deficient design.
FitResult fit_accumulation(std::span<const SeriesPoint> series, int order);
FitResult fit_accumulation(const std::map<int, double>& series, int order);
FitResult fit_accumulation(const AccumulationSchedule& schedule, int order);

}  // namespace parimutuel
