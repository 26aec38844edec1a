#include "parimutuel/fit.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "parimutuel/error.hpp"

namespace parimutuel {

double FitResult::evaluate(double t) const {
    double exponent = 0.0;
    for (Eigen::Index k = coefficients.size() - 1; k >= 0; --k) exponent = exponent * t + coefficients[k];
    return std::exp(exponent);
}

FitResult fit_accumulation(std::span<const SeriesPoint> series, int order) {
    if (order != 1 && order != 3) {
        throw ValidationError("fit order must be 1 or 3, got " + std::to_string(order));
    }
    const auto rows = static_cast<Eigen::Index>(series.size());
    if (rows < order + 2) {
        throw ValidationError("order-" + std::to_string(order) + " fit needs at least " +
                              std::to_string(order + 2) + " points, got " + std::to_string(rows));
    }

    Eigen::MatrixXd design(rows, order + 1);
    Eigen::VectorXd target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& point = series[static_cast<std::size_t>(r)];
        if (!(point.value > 0.0)) {
            throw DomainError("log undefined: F(" + std::to_string(point.t) + ") = " +
                              std::to_string(point.value) + " is not positive");
        }
        double power = 1.0;
        for (int c = 0; c <= order; ++c) {
            design(r, c) = power;
            power *= point.t;
        }
        target[r] = std::log(point.value);
    }

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < order + 1) {
        throw SingularSystemError("design matrix has rank " + std::to_string(qr.rank()) + " < " +
                                  std::to_string(order + 1) + "; need distinct t values");
    }

    FitResult out;
    out.model_order = order;
    out.coefficients = qr.solve(target);
    out.residual_sum = (design * out.coefficients - target).squaredNorm();
    return out;
}

FitResult fit_accumulation(const std::map<int, double>& series, int order) {
    std::vector<SeriesPoint> points;
    points.reserve(series.size());
    for (const auto& [t, value] : series) points.push_back({static_cast<double>(t), value});
    return fit_accumulation(std::span<const SeriesPoint>(points), order);
}

FitResult fit_accumulation(const AccumulationSchedule& schedule, int order) {
    std::vector<SeriesPoint> points;
    const auto& table = schedule.cumulative_table();
    for (int i = 0; i < static_cast<int>(table.size()); ++i) {
        points.push_back({static_cast<double>(kFirstMinute + i), table[i]});
    }
    return fit_accumulation(std::span<const SeriesPoint>(points), order);
}

}  // namespace parimutuel
