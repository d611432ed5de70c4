#pragma once

#include <cstdint>
#include <vector>

#include "feec/forms.hpp"
#include "feec/mesh.hpp"

namespace feec {

/// Smooth k-forms on R^2 with analytic exterior derivative. Coefficients are
/// products phi * sin(a x + b y + c); phi = prod over the listed faces of the
/// face distance (x+1, 1-x, y+1, 1-y) to the power `order`, so the form and
/// its derivative have vanishing trace on those faces when order >= 1.
FormField trig_form(int k, std::uint64_t seed, const std::vector<BoxFace>& vanish_on = {}, int order = 1);

/// x dy.
FormField x_dy_form();

/// scale * sin(pi (x+1)/2) sin(pi (y+1)/2): the first Dirichlet eigenfunction
/// of the square, with eigenvalue pi^2/2. Carries its derivative.
FormField sine_product_form(double scale = 1.0);

}  // namespace feec
