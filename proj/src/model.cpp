#include "qpart/model.hpp"

#include "qpart/errors.hpp"

namespace qpart {

std::vector<double> SystemModel::exact_solution(std::span<const double>, double) const {
    throw NumericError(std::string(name()) + ": no closed-form solution");
}

double SystemModel::exact_average(std::span<const double>) const {
    throw NumericError(std::string(name()) + ": no closed-form time-average");
}

std::unique_ptr<SystemModel> SystemModel::with_phases(std::span<const double>) const {
    throw ValidationError(std::string(name()) + ": phase override unsupported");
}

void SystemModel::precompute_time_samples(std::span<const double>) const {}

} // namespace qpart
