#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace mcf {

/// Uniform node set r_i = i * dr on [0, 1].
class RadialGrid {
 public:
  static constexpr std::size_t kMinNodes = 11;

  /// Throws ConfigError when n_nodes < kMinNodes.
  explicit RadialGrid(std::size_t n_nodes);

  std::size_t size() const { return nodes_.size(); }
  double dr() const { return dr_; }
  double r(std::size_t i) const { return nodes_[i]; }
  std::span<const double> nodes() const { return nodes_; }

  bool operator==(const RadialGrid& other) const { return size() == other.size(); }

 private:
  double dr_;
  std::vector<double> nodes_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr build_grid(std::size_t n_nodes);

/// Finite node values on a shared grid.
class ScalarField {
 public:
  ScalarField(GridPtr grid, std::vector<double> values);
  /// Samples f(r) at every node.
  template <class F>
  static ScalarField sample(GridPtr grid, F&& f) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->r(i));
    return ScalarField(std::move(grid), std::move(v));
  }

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

  bool same_grid(const ScalarField& other) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

enum class Form { U, V };

const char* to_string(Form form);

/// One time slice of the solution, either u or v = ln u.
class FlowState {
 public:
  /// Throws ConfigError on t < 0, dim < 1 or non-positive u-form values.
  FlowState(ScalarField field, double t, Form form, int dim);

  const ScalarField& field() const { return field_; }
  const RadialGrid& grid() const { return field_.grid(); }
  double t() const { return t_; }
  Form form() const { return form_; }
  int dim() const { return dim_; }

  /// ln u at node i regardless of form.
  double log_u(std::size_t i) const;
  /// Same state in the other representation (u <-> ln u).
  FlowState converted(Form target) const;

 private:
  ScalarField field_;
  double t_;
  Form form_;
  int dim_;
};

/// (t, value) samples with strictly increasing t.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::vector<double> t, std::vector<double> values);

  /// Throws std::invalid_argument if t does not exceed the last stamp or value is not finite.
  void push(double t, double value);

  std::size_t size() const { return t_.size(); }
  bool empty() const { return t_.empty(); }
  std::span<const double> times() const { return t_; }
  std::span<const double> values() const { return v_; }
  double t(std::size_t i) const { return t_[i]; }
  double value(std::size_t i) const { return v_[i]; }

  /// Linear interpolation; clamps outside the sampled range.
  double at(double t) const;

 private:
  std::vector<double> t_;
  std::vector<double> v_;
};

}  // namespace mcf
