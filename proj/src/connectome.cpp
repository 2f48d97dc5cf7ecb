#include "anisonet/connectome.hpp"

#include <algorithm>
#include <cmath>

#include "anisonet/errors.hpp"
#include "anisonet/rng.hpp"

namespace anisonet {

namespace {

using Adjacency = std::vector<std::vector<std::pair<NeuronIndex, int32_t>>>;

// Per-source duplicate tracking without clearing a flag array 4500 times.
struct EpochSet {
    explicit EpochSet(int n) : stamp(n, 0) {}
    void reset() { ++epoch; }
    bool insert(NeuronIndex i) {
        if (stamp[i] == epoch) return false;
        stamp[i] = epoch;
        return true;
    }
    std::vector<uint32_t> stamp;
    uint32_t epoch = 0;
};

// Draws `count` distinct targets from an isotropic Gaussian profile around
// `center` (excitatory-frame coordinates), rounded to the requested lattice.
// exc lattice: integer coords, side 60. inh lattice: odd coords 2k+1, side 30.
template <typename CandidateFn>
void sample_gaussian_targets(Rng& rng, double sigma, RadialProfile profile, GridCoord center,
                             int count, NeuronIndex exclude, EpochSet& seen,
                             std::vector<NeuronIndex>& out, CandidateFn candidate) {
    seen.reset();
    const long max_attempts = 4000L * count;
    long attempts = 0;
    int found = 0;
    while (found < count) {
        if (++attempts > max_attempts)
            throw ConfigError("gaussian sigma too small to reach the exact out-degree");
        double dx, dy;
        if (profile == RadialProfile::polar_radius) {
            const double radius = sigma * rng.gaussian();
            const double angle = rng.uniform() * 6.283185307179586476925286766559;
            dx = radius * std::cos(angle);
            dy = radius * std::sin(angle);
        } else {
            dx = sigma * rng.gaussian();
            dy = sigma * rng.gaussian();
        }
        const NeuronIndex t = candidate(center.x + dx, center.y + dy);
        if (t == exclude) continue;
        if (!seen.insert(t)) continue;
        out.push_back(t);
        ++found;
    }
}

void sample_uniform_targets(Rng& rng, int population, int count, NeuronIndex exclude,
                            EpochSet& seen, std::vector<NeuronIndex>& out) {
    seen.reset();
    int found = 0;
    while (found < count) {
        const NeuronIndex t = static_cast<NeuronIndex>(rng.uniform_int(population));
        if (t == exclude) continue;
        if (!seen.insert(t)) continue;
        out.push_back(t);
        ++found;
    }
}

Connectome build_recurrent(const GridSpec& spec, const DirectionLandscape* landscape,
                           const ConnectivityParams& params, uint64_t seed) {
    spec.validate();
    if (params.sigma_exc <= 0.0 || params.sigma_inh <= 0.0)
        throw ConfigError("gaussian sigma must be positive");

    const int n_exc = spec.exc_count();
    const int n_inh = spec.inh_count();
    const int deg_e = params.exc_out_degree(spec);
    const int deg_i = params.inh_out_degree(spec);
    const bool aniso = landscape != nullptr;

    Connectome net;
    net.spec = spec;
    net.params = params;
    net.seed = seed;
    net.anisotropic = aniso;

    Rng rng(seed);
    EpochSet seen_exc(n_exc), seen_inh(n_inh);
    Adjacency adj(static_cast<size_t>(n_exc) + n_inh);

    auto exc_candidate = [&](double cx, double cy) {
        const int x = wrap(static_cast<int>(std::llround(cx)), spec.exc_side);
        const int y = wrap(static_cast<int>(std::llround(cy)), spec.exc_side);
        return spec.exc_index({x, y});
    };
    auto inh_candidate = [&](double cx, double cy) {
        // nearest inhibitory lattice point; the inhibitory grid sits at odd
        // excitatory-frame coordinates (2k+1, 2k+1)
        const int x = wrap(static_cast<int>(std::llround((cx - 1.0) / 2.0)), spec.inh_side);
        const int y = wrap(static_cast<int>(std::llround((cy - 1.0) / 2.0)), spec.inh_side);
        return spec.inh_index({x, y});
    };

    std::vector<NeuronIndex> targets;
    targets.reserve(deg_e);

    for (NeuronIndex src = 0; src < n_exc; ++src) {
        const GridCoord pos = spec.exc_coord(src);
        GridCoord e_center = pos;
        if (aniso) {
            const GridCoord d = landscape->shift_of(src);
            e_center = {pos.x + params.n_shift * d.x, pos.y + params.n_shift * d.y};
        }
        targets.clear();
        if (aniso)
            sample_gaussian_targets(rng, params.sigma_exc, params.profile, e_center, deg_e, src,
                                    seen_exc, targets, exc_candidate);
        else
            sample_uniform_targets(rng, n_exc, deg_e, src, seen_exc, targets);
        if (aniso)
            sample_gaussian_targets(rng,
                                    params.sigma_e2i > 0.0 ? params.sigma_e2i : params.sigma_exc,
                                    params.profile, pos, deg_i, -1, seen_inh, targets,
                                    inh_candidate);
        else
            sample_uniform_targets(rng, n_inh, deg_i, -1, seen_inh, targets);

        auto& row = adj[src];
        row.reserve(targets.size());
        for (int k = 0; k < deg_e; ++k)
            row.emplace_back(targets[k], params.j_exc);
        for (int k = deg_e; k < deg_e + deg_i; ++k)
            row.emplace_back(static_cast<NeuronIndex>(n_exc) + targets[k], params.j_exc);
    }

    for (NeuronIndex inh = 0; inh < n_inh; ++inh) {
        const NeuronIndex src = static_cast<NeuronIndex>(n_exc) + inh;
        const GridCoord pos = spec.inh_to_exc_frame(spec.inh_coord(inh));
        targets.clear();
        if (aniso) {
            sample_gaussian_targets(rng, params.sigma_inh, params.profile, pos, deg_e, -1, seen_exc,
                                    targets, exc_candidate);
            sample_gaussian_targets(rng, params.sigma_inh, params.profile, pos, deg_i, inh, seen_inh,
                                    targets, inh_candidate);
        } else {
            sample_uniform_targets(rng, n_exc, deg_e, -1, seen_exc, targets);
            sample_uniform_targets(rng, n_inh, deg_i, inh, seen_inh, targets);
        }

        auto& row = adj[src];
        row.reserve(targets.size());
        for (int k = 0; k < deg_e; ++k)
            row.emplace_back(targets[k], -params.j_inh);
        for (int k = deg_e; k < deg_e + deg_i; ++k)
            row.emplace_back(static_cast<NeuronIndex>(n_exc) + targets[k], -params.j_inh);
    }

    net.assemble(adj);
    return net;
}

} // namespace

void Connectome::assemble(Adjacency& adjacency) {
    const size_t n = adjacency.size();
    offsets_.assign(n + 1, 0);
    size_t total = 0;
    for (size_t i = 0; i < n; ++i) {
        offsets_[i] = total;
        total += adjacency[i].size();
    }
    offsets_[n] = total;
    targets_.resize(total);
    weights_.resize(total);
    for (size_t i = 0; i < n; ++i) {
        auto& row = adjacency[i];
        std::sort(row.begin(), row.end());
        size_t at = offsets_[i];
        for (const auto& [target, weight] : row) {
            targets_[at] = target;
            weights_[at] = weight;
            ++at;
        }
    }
}

void Connectome::for_each_edge(
    const std::function<void(NeuronIndex, NeuronIndex, int32_t)>& fn) const {
    for (size_t src = 0; src + 1 < offsets_.size(); ++src) {
        for (size_t k = offsets_[src]; k < offsets_[src + 1]; ++k)
            fn(static_cast<NeuronIndex>(src), targets_[k], weights_[k]);
    }
}

Connectome build_anisotropic(const GridSpec& spec, const DirectionLandscape& landscape,
                             const ConnectivityParams& params, uint64_t seed) {
    if (landscape.direction.size() != static_cast<size_t>(spec.exc_count()))
        throw ConfigError("landscape size does not match the excitatory population");
    return build_recurrent(spec, &landscape, params, seed);
}

Connectome build_random_control(const GridSpec& spec, const ConnectivityParams& params,
                                uint64_t seed) {
    return build_recurrent(spec, nullptr, params, seed);
}

PoolingLayout build_pooling_layout(const GridSpec& spec) {
    PoolingLayout layout;
    if (spec.exc_side % layout.window != 0)
        throw ConfigError("excitatory side must be divisible by the pooling window");
    const int tiles = spec.exc_side / layout.window; // 6 per axis
    layout.origins.reserve(static_cast<size_t>(2 * tiles * tiles));
    for (int grid = 0; grid < 2; ++grid) {
        const int off = grid * layout.stride;
        for (int r = 0; r < tiles; ++r)
            for (int c = 0; c < tiles; ++c)
                layout.origins.push_back(
                    {wrap(c * layout.window + off, spec.exc_side),
                     wrap(r * layout.window + off, spec.exc_side)});
    }
    return layout;
}

std::vector<NeuronIndex> patch_members(const GridSpec& spec, GridCoord origin, int window) {
    std::vector<NeuronIndex> members;
    members.reserve(static_cast<size_t>(window) * window);
    for (int dy = 0; dy < window; ++dy)
        for (int dx = 0; dx < window; ++dx)
            members.push_back(spec.exc_index(
                {wrap(origin.x + dx, spec.exc_side), wrap(origin.y + dy, spec.exc_side)}));
    std::sort(members.begin(), members.end());
    return members;
}

std::vector<NeuronIndex> select_input_patch(const GridSpec& spec, GridCoord origin) {
    return patch_members(spec, origin, 5);
}

void attach_pooling(Connectome& net) {
    const PoolingLayout layout = build_pooling_layout(net.spec);
    const NeuronIndex base = static_cast<NeuronIndex>(net.spec.exc_count() + net.spec.inh_count());

    // Rebuild adjacency with pooling rows appended, then re-assemble.
    Adjacency adj(static_cast<size_t>(base) + layout.neuron_count());
    net.for_each_edge([&](NeuronIndex s, NeuronIndex t, int32_t w) { adj[s].emplace_back(t, w); });
    for (int p = 0; p < layout.neuron_count(); ++p) {
        for (NeuronIndex member : patch_members(net.spec, layout.origins[p], layout.window))
            adj[member].emplace_back(base + p, net.params.j_pool);
    }
    net.pooling = layout;
    net.assemble(adj);
}

void set_input_patch(Connectome& net, GridCoord origin) {
    net.input_origin = origin;
    net.input_patch = select_input_patch(net.spec, origin);
}

} // namespace anisonet
