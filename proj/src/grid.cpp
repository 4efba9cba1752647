#include "mcf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mcf/errors.hpp"

namespace mcf {

RadialGrid::RadialGrid(std::size_t n_nodes) {
  if (n_nodes < kMinNodes) {
    throw ConfigError("grid needs at least " + std::to_string(kMinNodes) + " nodes, got " +
                      std::to_string(n_nodes));
  }
  const auto intervals = static_cast<double>(n_nodes - 1);
  dr_ = 1.0 / intervals;
  nodes_.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) nodes_[i] = static_cast<double>(i) / intervals;
  nodes_.back() = 1.0;
}

GridPtr build_grid(std::size_t n_nodes) { return std::make_shared<const RadialGrid>(n_nodes); }

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("ScalarField: null grid");
  if (values_.size() != grid_->size()) {
    throw MismatchError("ScalarField: " + std::to_string(values_.size()) + " values for " +
                        std::to_string(grid_->size()) + " nodes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("ScalarField: non-finite value at node " + std::to_string(i));
    }
  }
}

bool ScalarField::same_grid(const ScalarField& other) const {
  return grid_ == other.grid_ || *grid_ == *other.grid_;
}

const char* to_string(Form form) { return form == Form::U ? "u" : "v"; }

FlowState::FlowState(ScalarField field, double t, Form form, int dim)
    : field_(std::move(field)), t_(t), form_(form), dim_(dim) {
  if (!(t_ >= 0.0)) throw ConfigError("FlowState: negative time");
  if (dim_ < 1) throw ConfigError("FlowState: dimension must be >= 1");
  if (form_ == Form::U) {
    const auto v = field_.values();
    if (std::any_of(v.begin(), v.end(), [](double x) { return x <= 0.0; })) {
      throw ConfigError("FlowState: u-form values must be strictly positive");
    }
  }
}

double FlowState::log_u(std::size_t i) const {
  return form_ == Form::V ? field_[i] : std::log(field_[i]);
}

FlowState FlowState::converted(Form target) const {
  if (target == form_) return *this;
  std::vector<double> out(field_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = target == Form::V ? std::log(field_[i]) : std::exp(field_[i]);
  }
  return FlowState(ScalarField(field_.grid_ptr(), std::move(out)), t_, target, dim_);
}

TimeSeries::TimeSeries(std::vector<double> t, std::vector<double> values) {
  if (t.size() != values.size()) throw std::invalid_argument("TimeSeries: length mismatch");
  for (std::size_t i = 0; i < t.size(); ++i) push(t[i], values[i]);
}

void TimeSeries::push(double t, double value) {
  if (!t_.empty() && !(t > t_.back())) {
    throw std::invalid_argument("TimeSeries: time stamps must be strictly increasing");
  }
  if (!std::isfinite(value) || !std::isfinite(t)) {
    throw std::invalid_argument("TimeSeries: non-finite sample");
  }
  t_.push_back(t);
  v_.push_back(value);
}

double TimeSeries::at(double t) const {
  if (t_.empty()) throw std::out_of_range("TimeSeries::at on empty series");
  if (t <= t_.front()) return v_.front();
  if (t >= t_.back()) return v_.back();
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const auto j = static_cast<std::size_t>(it - t_.begin());
  const double w = (t - t_[j - 1]) / (t_[j] - t_[j - 1]);
  return (1.0 - w) * v_[j - 1] + w * v_[j];
}

}  // namespace mcf
