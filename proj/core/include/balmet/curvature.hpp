// curvature.hpp - Chern curvature contraction and the A_1 coefficient
#pragma once

#include "balmet/fields.hpp"
#include "balmet/model.hpp"

namespace balmet {

// (i/2pi) Lambda F_h for the twisted bundle E(k): constant a_i + k on the
// split FS metric.  Output is h-self-adjoint (symmetrized after the stencil
// evaluation).
EndoField lambda_curvature(const Model& model, const MetricField& h);

// Untwisted (i/2pi) Lambda F_{(E,h)} = twisted - k Id.
EndoField lambda_curvature_untwisted(const Model& model, const MetricField& h);

// A_1(h) = (i/2pi) Lambda F_{(E,h)} + (1/2) S(omega) Id  (untwisted).
EndoField a1_endomorphism(const Model& model, const MetricField& h);

// A_1 tilde = A_1 - (1/(rV)) int tr(A_1) Id; its trace integrates to zero.
EndoField a1_reduced(const Model& model, const MetricField& h);

}  // namespace balmet
