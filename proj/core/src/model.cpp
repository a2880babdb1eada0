#include "balmet/model.hpp"

#include "balmet/fields.hpp"

namespace balmet {

Model make_model(const ModelConfig& cfg) {
    cfg.validate();
    Model m;
    m.cfg = cfg;
    m.grid = build_grid(cfg.n_theta, cfg.n_phi);
    m.basis = build_section_basis(cfg, m.grid);
    m.ops = std::make_shared<DiffOps>(m.grid);
    return m;
}

MetricField fs_metric(const Model& model) {
    return reference_metric(model.basis);
}

}  // namespace balmet
