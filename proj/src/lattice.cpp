#include "acoelab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace acoelab {

namespace {

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

Lattice::Lattice(double x_min, double x_max, double step)
    : x_min_(x_min), x_max_(x_max), step_(step) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(step))
        raise(ErrorCode::invalid_argument, "lattice bounds and step must be finite");
    if (!(step > 0.0))
        raise(ErrorCode::invalid_argument, "lattice step must be positive");
    if (!(x_min < x_max))
        raise(ErrorCode::invalid_argument, "lattice needs x_min < x_max");
    const double span = (x_max - x_min) / step;
    n_ = static_cast<std::int64_t>(std::llround(span)) + 1;
    if (n_ < 2 || !nearly_equal(x_min + step * static_cast<double>(n_ - 1), x_max))
        raise(ErrorCode::invalid_argument,
              "lattice endpoints are not separated by a whole number of steps");
}

std::int64_t Lattice::index_of(double value) const {
    const double rel = (value - x_min_) / step_;
    const std::int64_t i = static_cast<std::int64_t>(std::llround(rel));
    if (i < 0 || i >= n_ || !nearly_equal(x(i), value))
        raise(ErrorCode::invalid_argument,
              "value " + std::to_string(value) + " is not a lattice point");
    return i;
}

std::int64_t Lattice::offset_of(double delta) const {
    const double rel = delta / step_;
    const std::int64_t k = static_cast<std::int64_t>(std::llround(rel));
    if (!nearly_equal(step_ * static_cast<double>(k), delta))
        raise(ErrorCode::invalid_argument,
              "delta " + std::to_string(delta) + " is not a whole number of lattice steps");
    return k;
}

bool Lattice::contains(double value) const noexcept {
    const double rel = (value - x_min_) / step_;
    const std::int64_t i = static_cast<std::int64_t>(std::llround(rel));
    return i >= 0 && i < n_ && nearly_equal(x(i), value);
}

bool Lattice::operator==(const Lattice& other) const noexcept {
    return nearly_equal(x_min_, other.x_min_) && nearly_equal(x_max_, other.x_max_) &&
           nearly_equal(step_, other.step_) && n_ == other.n_;
}

ValueTable::ValueTable(Lattice lattice, std::vector<double> values,
                       std::optional<LinearTail> below_grid)
    : lattice_(lattice), values_(std::move(values)), below_grid_(below_grid) {
    if (static_cast<std::int64_t>(values_.size()) != lattice_.size())
        raise(ErrorCode::invalid_argument, "value table length does not match the lattice");
    validate();
}

ValueTable ValueTable::zeros(const Lattice& lattice) {
    return ValueTable(lattice, std::vector<double>(static_cast<std::size_t>(lattice.size()), 0.0));
}

void ValueTable::anchor_below_grid(double slope) {
    below_grid_ = LinearTail{slope, values_.front() - slope * lattice_.x_min()};
}

double ValueTable::at_extended(std::int64_t i) const {
    if (i >= size())
        raise(ErrorCode::invalid_argument, "value table queried above the lattice top");
    if (i >= 0)
        return values_[static_cast<std::size_t>(i)];
    if (!below_grid_)
        raise(ErrorCode::truncation_underflow,
              "transition mass escapes below x_min and the table has no below-grid extension");
    return (*below_grid_)(lattice_.x(i));
}

double ValueTable::min() const {
    return values_[static_cast<std::size_t>(argmin())];
}

std::int64_t ValueTable::argmin() const {
    std::int64_t best = 0;
    for (std::int64_t i = 1; i < size(); ++i)
        if (values_[static_cast<std::size_t>(i)] < values_[static_cast<std::size_t>(best)])
            best = i;
    return best;
}

void ValueTable::validate() const {
    if (values_.empty())
        raise(ErrorCode::invalid_argument, "value table is empty");
    for (double v : values_)
        if (!std::isfinite(v))
            raise(ErrorCode::invalid_argument, "value table contains non-finite entries");
    if (below_grid_ && (!std::isfinite(below_grid_->slope) || !std::isfinite(below_grid_->intercept)))
        raise(ErrorCode::invalid_argument, "below-grid tail has non-finite coefficients");
}

TabularPolicy::TabularPolicy(Lattice lattice, std::vector<double> orders)
    : lattice_(lattice), orders_(std::move(orders)) {
    if (static_cast<std::int64_t>(orders_.size()) != lattice_.size())
        raise(ErrorCode::invalid_argument, "policy length does not match the lattice");
    steps_.reserve(orders_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        const double a = orders_[i];
        if (!std::isfinite(a) || a < 0.0)
            raise(ErrorCode::invalid_argument, "policy orders must be finite and nonnegative");
        const std::int64_t k = lattice_.offset_of(a);
        if (static_cast<std::int64_t>(i) + k >= lattice_.size())
            raise(ErrorCode::invalid_argument, "policy order exceeds the lattice upper edge");
        steps_.push_back(k);
    }
}

} // namespace acoelab
