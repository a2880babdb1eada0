// perturb.hpp - seeded smooth perturbations of the split FS reference
#pragma once

#include <cstdint>

#include "balmet/fields.hpp"
#include "balmet/model.hpp"

namespace balmet {

// Smooth Hermitian-matrix-valued field built from low even Fourier modes of
// the sphere: combinations of 1, v, v^2 and u(1-u)e^{+-2i theta} with seeded
// coefficients, rescaled so sup_p ||A(p)||_2 = amplitude.  Same seed gives a
// bit-identical field.  Even modes keep every radial profile polynomial in
// the compactified coordinate, which the grid derivatives rely on.
std::vector<Mat> seeded_hermitian_field(const Model& model, std::uint64_t seed,
                                        double amplitude);

// h = exp(A) h_FS in the normalized frame: G = R exp(A) R.
MetricField seeded_metric(const Model& model, std::uint64_t seed, double amplitude);

// The same field packaged as an endomorphism, self-adjoint w.r.t. the given
// metric (FS by default gives exact pointwise Hermitian values).
EndoField seeded_endo(const Model& model, std::uint64_t seed, double amplitude,
                      const MetricField& h);

}  // namespace balmet
