#include "balmet/perturb.hpp"

#include <cmath>
#include <random>

namespace balmet {

namespace {

double unit_interval(std::mt19937_64& rng) {
    // Top 53 bits -> [-1, 1); avoids distribution-implementation variance.
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

cxd unit_complex(std::mt19937_64& rng) {
    const double re = unit_interval(rng);
    const double im = unit_interval(rng);
    return cxd(re, im);
}

// max over [0,1] of u^{a}(1-u)^{b}.
double power_bound(double a, double b) {
    if (a + b == 0.0) return 1.0;
    const double u = a / (a + b);
    return std::pow(u, a) * std::pow(1.0 - u, b);
}

}  // namespace

// Entries are built from global sections: the (i,j) entry couples summands
// whose twisted degrees differ by Delta = m_i - m_j, and a smooth coupling is
// z^t (t = 0..Delta) times smooth scalar functions.  In the normalized frame
// z^t reads u^{t/2} (1-u)^{(Delta-t)/2} e^{i t theta}; restricting to even t
// (and even Delta) keeps every radial profile polynomial in u, which the
// structured-grid stencils rely on.  Summand pairs with odd degree
// difference get no coupling.
std::vector<Mat> seeded_hermitian_field(const Model& model, std::uint64_t seed,
                                        double amplitude) {
    const int r = model.rank();
    const int npts = model.grid.size();
    std::mt19937_64 rng(seed);

    struct Term {
        int i, j;        // entry (i,j), i <= j; Hermitian partner implied
        int t;           // monomial power (0 for diagonal scalars)
        int delta;       // m_i - m_j >= 0
        int scalar_kind; // 0: 1, 1: v, 2: v^2 (diagonal only)
        cxd coeff;
    };
    std::vector<Term> terms;
    double bound_sum = 0.0;

    for (int i = 0; i < r; ++i) {
        // Diagonal entry: real combination of 1, v, v^2, Re zeta, Im zeta
        // with zeta = z^2/(1+|z|^2)^2.
        for (int s = 0; s <= 4; ++s) {
            Term t{i, i, 0, 0, s, cxd(unit_interval(rng), 0.0)};
            terms.push_back(t);
            bound_sum += std::abs(t.coeff.real()) * (s >= 3 ? 0.25 : 1.0);
        }
    }
    for (int i = 0; i < r; ++i) {
        for (int j = i + 1; j < r; ++j) {
            const int mi = model.cfg.degrees[static_cast<std::size_t>(i)] + model.cfg.k;
            const int mj = model.cfg.degrees[static_cast<std::size_t>(j)] + model.cfg.k;
            const int delta = mi - mj;
            if (delta % 2 != 0) continue;  // no even-mode smooth coupling
            const int ad = std::abs(delta);
            for (int t = 0; t <= ad; t += 2) {
                for (int s = 0; s <= 1; ++s) {
                    Term tm{i, j, t, delta, s, unit_complex(rng)};
                    terms.push_back(tm);
                    // Hermitian pair contributes twice the off-diagonal bound.
                    bound_sum += 2.0 * std::abs(tm.coeff) *
                                 power_bound(0.5 * t, 0.5 * (ad - t));
                }
            }
        }
    }
    const double scale = bound_sum > 0.0 ? amplitude / bound_sum : 0.0;

    std::vector<Mat> field(static_cast<std::size_t>(npts), Mat::Zero(r, r));
    for (int p = 0; p < npts; ++p) {
        const double u = model.grid.u[static_cast<std::size_t>(model.grid.radial_index(p))];
        const double v = 1.0 - 2.0 * u;
        const double th = model.grid.theta[static_cast<std::size_t>(model.grid.angle_index(p))];
        const cxd zeta = u * (1.0 - u) * std::polar(1.0, 2.0 * th);
        Mat& a = field[static_cast<std::size_t>(p)];
        for (const Term& tm : terms) {
            double sv = 1.0;
            switch (tm.scalar_kind) {
                case 1: sv = v; break;
                case 2: sv = v * v; break;
                case 3: sv = zeta.real(); break;
                case 4: sv = zeta.imag(); break;
                default: break;
            }
            if (tm.i == tm.j) {
                a(tm.i, tm.i) += scale * tm.coeff.real() * sv;
                continue;
            }
            const int ad = std::abs(tm.delta);
            const double prof = std::pow(u, 0.5 * tm.t) * std::pow(1.0 - u, 0.5 * (ad - tm.t));
            cxd val = scale * tm.coeff * sv * prof * std::polar(1.0, tm.t * th);
            if (tm.delta < 0) val = std::conj(val);
            a(tm.i, tm.j) += val;
            a(tm.j, tm.i) += std::conj(val);
        }
    }
    return field;
}

MetricField seeded_metric(const Model& model, std::uint64_t seed, double amplitude) {
    const auto field = seeded_hermitian_field(model, seed, amplitude);
    MetricField m;
    m.rank = model.rank();
    m.values.resize(field.size());
    for (std::size_t p = 0; p < field.size(); ++p) m.values[p] = herm_exp(field[p]);
    return from_normalized(m, model.basis);
}

EndoField seeded_endo(const Model& model, std::uint64_t seed, double amplitude,
                      const MetricField& h) {
    const auto field = seeded_hermitian_field(model, seed, amplitude);
    EndoField psi;
    psi.rank = model.rank();
    psi.hermitian_flag = true;
    psi.values = field;
    EndoField phi = endo_from_normalized(psi, model.basis);
    return self_adjoint_part(phi, h);
}

}  // namespace balmet
