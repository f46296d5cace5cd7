#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acoelab/errors.hpp"

namespace acoelab {

/// Uniform one-dimensional grid x_i = x_min + i * step, i = 0 .. size()-1.
/// x(i) is defined for any integer i so callers can address virtual points
/// below x_min or above x_max when extending tables.
class Lattice {
public:
    Lattice(double x_min, double x_max, double step);

    std::int64_t size() const noexcept { return n_; }
    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    double step() const noexcept { return step_; }

    double x(std::int64_t i) const noexcept { return x_min_ + step_ * static_cast<double>(i); }

    /// Index of a lattice point; rejects values that are off-grid or outside
    /// [x_min, x_max].
    std::int64_t index_of(double value) const;

    /// Number of steps spanned by `delta`; rejects deltas that are not a whole
    /// multiple of the step.
    std::int64_t offset_of(double delta) const;

    bool contains(double value) const noexcept;

    bool operator==(const Lattice& other) const noexcept;

private:
    double x_min_;
    double x_max_;
    double step_;
    std::int64_t n_;
};

/// Affine extension value(x) = intercept + slope * x, used to continue a table
/// below its grid.
struct LinearTail {
    double slope = 0.0;
    double intercept = 0.0;

    double operator()(double x) const noexcept { return intercept + slope * x; }
};

/// Finite table of real values over a Lattice, with an optional affine
/// continuation below x_min. Above-grid access is always an error.
class ValueTable {
public:
    /// Placeholder two-point zero table; assign a real one before use.
    ValueTable() : ValueTable(Lattice(0.0, 1.0, 1.0), {0.0, 0.0}) {}

    ValueTable(Lattice lattice, std::vector<double> values,
               std::optional<LinearTail> below_grid = std::nullopt);

    static ValueTable zeros(const Lattice& lattice);

    const Lattice& lattice() const noexcept { return lattice_; }
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(values_.size()); }

    double operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }
    double& operator[](std::int64_t i) { return values_[static_cast<std::size_t>(i)]; }

    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    const std::optional<LinearTail>& below_grid() const noexcept { return below_grid_; }
    void set_below_grid(std::optional<LinearTail> tail) { below_grid_ = tail; }

    /// Installs the tail with the given slope passing through (x_min, v[0]).
    void anchor_below_grid(double slope);

    /// Value at lattice index i, where negative i falls back to the below-grid
    /// tail. Raises truncation_underflow when no tail is installed.
    double at_extended(std::int64_t i) const;

    double min() const;
    /// Smallest index attaining the minimum.
    std::int64_t argmin() const;

    /// Rejects non-finite entries and empty tables.
    void validate() const;

private:
    Lattice lattice_;
    std::vector<double> values_;
    std::optional<LinearTail> below_grid_;
};

/// Order quantities (in units, nonnegative lattice multiples) per lattice
/// state. Orders may not push the state above x_max.
class TabularPolicy {
public:
    TabularPolicy(Lattice lattice, std::vector<double> orders);

    const Lattice& lattice() const noexcept { return lattice_; }
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(orders_.size()); }

    double order(std::int64_t i) const { return orders_[static_cast<std::size_t>(i)]; }
    std::int64_t order_steps(std::int64_t i) const { return steps_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& orders() const noexcept { return orders_; }

private:
    Lattice lattice_;
    std::vector<double> orders_;
    std::vector<std::int64_t> steps_;
};

} // namespace acoelab
