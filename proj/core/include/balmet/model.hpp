// model.hpp - bundle of everything the operators need about one model
#pragma once

#include <memory>

#include "balmet/basis.hpp"
#include "balmet/diffops.hpp"
#include "balmet/grid.hpp"

namespace balmet {

// One polarized split-bundle model at a fixed twist level: the quadrature
// grid, the evaluated section basis, and the derivative operators.
struct Model {
    ModelConfig cfg;
    QuadratureGrid grid;
    SectionBasis basis;
    std::shared_ptr<const DiffOps> ops;

    int rank() const { return cfg.rank(); }
    int section_count() const { return cfg.section_count(); }
    double nk_over_rv() const {
        return static_cast<double>(cfg.section_count()) / (cfg.rank() * kVolume);
    }
};

Model make_model(const ModelConfig& cfg);

// FS split reference metric as a MetricField (the phi_map fixed point for
// equal-degree splittings).
MetricField fs_metric(const Model& model);

}  // namespace balmet
