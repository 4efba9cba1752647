#pragma once

#include "mcf/grid.hpp"
#include "mcf/kernels.hpp"

namespace mcf {

/// Second-order central differences inside, second-order one-sided stencils at r = 0 and r = 1.
ScalarField derivative(const ScalarField& f);

/// max_i |f_i - g_i|. Throws MismatchError on different grids.
double sup_distance(const ScalarField& f, const ScalarField& g);

/// The identity profile r on the grid.
ScalarField identity_field(GridPtr grid);

/// Discrete defect of the flow equation between two states δ apart:
/// (later - earlier)/δ - L[later] at nodes 0..n-2, and the boundary defect
/// f_r(1) - g at the last node (g = u(1) or the fixed slope; 1 in v-form).
ScalarField pde_residual(const FlowState& earlier, const FlowState& later,
                         BoundaryCondition bc = BoundaryCondition::robin(),
                         Operator op = Operator::Full);

}  // namespace mcf
