#include "cmg/expectation.hpp"

namespace cmg {

namespace {

double draw_uniform(Rng& rng, double center, double half_range) {
    if (half_range == 0.0) return center;
    std::uniform_real_distribution<double> dist(center - half_range, center + half_range);
    return dist(rng);
}

}  // namespace

std::vector<CouplingCoefficients> sample_couplings(const CouplingSpec& spec, int n_agents, Rng& rng_b1,
                                                   Rng& rng_b2) {
    std::vector<CouplingCoefficients> out(static_cast<std::size_t>(n_agents));
    if (const auto* h = std::get_if<Homogeneous>(&spec)) {
        for (auto& c : out) c = CouplingCoefficients{h->b1, h->b2};
        return out;
    }
    const auto& u = std::get<Uniform>(spec);
    for (auto& c : out) c.b1 = draw_uniform(rng_b1, u.c1, u.delta1);
    for (auto& c : out) c.b2 = draw_uniform(rng_b2, u.c2, u.delta2);
    return out;
}

double coupling_center(const CouplingSpec& spec, std::size_t stock) noexcept {
    if (const auto* h = std::get_if<Homogeneous>(&spec)) return stock == 0 ? h->b1 : h->b2;
    const auto& u = std::get<Uniform>(spec);
    return stock == 0 ? u.c1 : u.c2;
}

}  // namespace cmg
