#pragma once

#include <string>
#include <vector>

#include "ct/fields.hpp"
#include "ct/geometry.hpp"

namespace ct {

// Closed catalog of scalar expressions over a torus model: sums, products,
// differences, unary minus, numeric constants, parentheses, and the periodic
// basis functions
//   cos2pix, sin2pix, cos2piy, sin2piy, cos2piz, sin2piz
// (aliases cos2pix1..cos2pix3 / sin2pix1..sin2pix3), each meaning
// cos/sin(2 pi * coordinate / period). The result carries an analytic
// gradient assembled by sum and product rules. This is deliberately not a
// general expression language; anything outside the catalog is rejected
// with ConfigInvalid.
ScalarField parse_scalar_field(const std::string& text, const ContactModel& model);

// Comma-separated list of catalog expressions (commas inside parentheses
// do not split).
std::vector<ScalarField> parse_observables(const std::string& text, const ContactModel& model);

}  // namespace ct
