#include <doctest.h>

#include <cmath>
#include <limits>

#include "anisonet/rng.hpp"
#include "anisonet/simulator.hpp"

using namespace anisonet;

namespace {

// Tiny 5-neuron scaffold (4 excitatory + 1 inhibitory slot) with hand-wired
// edges, enough for single-synapse and chain oracles.
Connectome make_tiny_net(const std::vector<std::tuple<NeuronIndex, NeuronIndex, int32_t>>& edges) {
    Connectome net;
    net.spec = GridSpec{2, 1};
    std::vector<std::vector<std::pair<NeuronIndex, int32_t>>> adj(net.neuron_count());
    for (const auto& [s, t, w] : edges) adj[s].emplace_back(t, w);
    net.assemble(adj);
    return net;
}

NeuronParams default_params() { return NeuronParams{}; }

} // namespace

TEST_CASE("zero state and zero input stay at the fixed point") {
    Connectome net = make_tiny_net({{0, 1, 12}});
    Simulator sim(net, default_params());
    SpikeRaster raster = sim.run({}, 20);
    CHECK(raster.total_count(net.neuron_count()) == 0);
    for (const auto& state : sim.states()) {
        CHECK(state.v == 0.0);
        CHECK(state.current == 0.0);
    }
}

TEST_CASE("single synaptic event follows the hand-computed recurrence") {
    Connectome net = make_tiny_net({{0, 1, 12}});
    NeuronParams params = default_params();
    Simulator sim(net, params);
    sim.reset();

    // Force neuron 0 to spike at step 0; its spike reaches neuron 1 at step 1.
    sim.advance(1, inject_pulse(std::vector<NeuronIndex>{0}, 0, params.v_th));
    sim.advance(1);
    auto states = sim.states();
    CHECK(states[1].current == doctest::Approx(768.0).epsilon(1e-12));
    CHECK(states[1].v == doctest::Approx(768.0).epsilon(1e-12));

    sim.advance(1);
    states = sim.states();
    const double i2 = 768.0 * (4096.0 - 380.0) / 4096.0;
    const double v2 = 768.0 * (4096.0 - 400.0) / 4096.0 + i2;
    CHECK(states[1].current == doctest::Approx(i2).epsilon(1e-12));
    CHECK(states[1].v == doctest::Approx(v2).epsilon(1e-12));
    CHECK(i2 == doctest::Approx(696.75).epsilon(1e-4));
    CHECK(v2 == doctest::Approx(1389.75).epsilon(1e-4));
}

TEST_CASE("constant suprathreshold injection spikes every t_ref + 1 steps") {
    Connectome net = make_tiny_net({});
    NeuronParams params = default_params();
    InjectionPlan plan;
    for (int s = 0; s < 30; ++s) plan.push_back({s, 0, static_cast<double>(params.v_th)});
    Simulator sim(net, params);
    const SpikeRaster raster = sim.run(plan, 30);
    for (int s = 0; s < 30; ++s) CHECK(raster.get(s, 0) == (s % 3 == 0));
}

TEST_CASE("free decay matches the closed form") {
    Connectome net = make_tiny_net({});
    NeuronParams params = default_params();
    Simulator sim(net, params);
    sim.reset();
    const double v0 = 12345.0;
    sim.advance(1, {{0, 0, v0}});
    const double lambda = (4096.0 - 400.0) / 4096.0;
    for (int t = 1; t <= 200; ++t) {
        sim.advance(1);
        const double expected = v0 * std::pow(lambda, t);
        CHECK(sim.states()[0].v == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("delay: a spike influences the target exactly one step later") {
    Connectome net = make_tiny_net({{0, 1, 12}, {1, 2, 12}});
    NeuronParams params = default_params();
    Simulator sim(net, params);
    sim.reset();
    sim.advance(1, inject_pulse(std::vector<NeuronIndex>{0}, 0, params.v_th));
    CHECK(sim.states()[1].current == 0.0); // nothing arrives within the emitting step
    sim.advance(1);
    CHECK(sim.states()[1].current == doctest::Approx(768.0));
    CHECK(sim.states()[2].current == 0.0); // two-hop neuron is still untouched
}

TEST_CASE("superposition holds with spiking disabled") {
    Connectome net = make_tiny_net({{0, 1, 12}, {1, 0, -48}});
    NeuronParams params = default_params();
    params.v_th = std::numeric_limits<int32_t>::max();

    Rng rng(3);
    InjectionPlan plan_a, plan_b, plan_sum;
    for (int s = 0; s < 40; ++s) {
        for (NeuronIndex n = 0; n < 2; ++n) {
            const double a = 1000.0 * rng.uniform();
            const double b = 500.0 * rng.uniform();
            plan_a.push_back({s, n, a});
            plan_b.push_back({s, n, b});
            plan_sum.push_back({s, n, a + b});
        }
    }
    auto response = [&](const InjectionPlan& plan) {
        Simulator sim(net, params);
        sim.run(plan, 40);
        std::vector<double> vs;
        for (const auto& st : sim.states()) vs.push_back(st.v);
        return vs;
    };
    const auto va = response(plan_a);
    const auto vb = response(plan_b);
    const auto vs = response(plan_sum);
    for (size_t i = 0; i < vs.size(); ++i)
        CHECK(vs[i] == doctest::Approx(va[i] + vb[i]).epsilon(1e-9));
}

TEST_CASE("reset clears state and the spike pipeline") {
    Connectome net = make_tiny_net({{0, 1, 12}, {1, 0, 12}});
    NeuronParams params = default_params();
    Simulator sim(net, params);
    sim.reset();
    sim.advance(1, inject_pulse(std::vector<NeuronIndex>{0, 1}, 0, 2.0 * params.v_th));
    sim.reset();
    for (const auto& st : sim.states()) {
        CHECK(st.v == 0.0);
        CHECK(st.current == 0.0);
        CHECK(st.refractory_remaining == 0);
    }
    // After reset the network stays silent: in-flight spikes were dropped.
    SpikeRaster raster(30, net.neuron_count());
    sim.advance(30, {}, &raster, 0);
    CHECK(raster.total_count(net.neuron_count()) == 0);
}

TEST_CASE("inject_pulse forces one spike per patch neuron") {
    Connectome net = make_tiny_net({});
    NeuronParams params = default_params();
    const std::vector<NeuronIndex> patch{0, 1, 2};
    Simulator sim(net, params);
    const SpikeRaster raster = sim.run(inject_pulse(patch, 0, params.v_th), 5);
    CHECK(raster.population_count(0, net.neuron_count()) == 3);
    for (NeuronIndex n : patch) {
        CHECK(raster.get(0, n));
        CHECK_FALSE(raster.get(1, n));
        CHECK_FALSE(raster.get(2, n)); // refractory for t_ref = 2 steps
    }
    CHECK(inject_pulse({}, 0, params.v_th).empty());
}

TEST_CASE("refractory period bounds the inter-spike interval") {
    Connectome net = make_tiny_net({{0, 1, 200}, {1, 0, 200}, {0, 2, 200}, {2, 0, 200}});
    NeuronParams params = default_params();
    Rng rng(9);
    InjectionPlan plan;
    for (int s = 0; s < 120; ++s)
        for (NeuronIndex n = 0; n < 3; ++n)
            if (rng.uniform() < 0.7) plan.push_back({s, n, params.v_th * 1.5});
    Simulator sim(net, params);
    const SpikeRaster raster = sim.run(plan, 120);
    for (int n = 0; n < net.neuron_count(); ++n) {
        int last = -10;
        for (int s = 0; s < raster.steps(); ++s) {
            if (!raster.get(s, n)) continue;
            if (last >= 0) CHECK(s - last >= params.t_ref + 1);
            last = s;
        }
    }
}

TEST_CASE("runs are bit-deterministic") {
    Connectome net = make_tiny_net({{0, 1, 12}, {1, 2, 12}, {2, 0, 12}, {3, 4, -48}});
    NeuronParams params = default_params();
    InjectionPlan plan = inject_pulse(std::vector<NeuronIndex>{0, 3}, 0, params.v_th);
    Simulator sim_a(net, params);
    Simulator sim_b(net, params);
    CHECK(sim_a.run(plan, 100) == sim_b.run(plan, 100));
}

TEST_CASE("run validates the horizon") {
    Connectome net = make_tiny_net({});
    Simulator sim(net, default_params());
    CHECK_THROWS(sim.run({}, 0));
}

TEST_CASE("neuron parameter validation") {
    NeuronParams params;
    params.decay_current = 5000;
    CHECK_THROWS(params.validate());
    params = NeuronParams{};
    params.v_th = 0;
    CHECK_THROWS(params.validate());
    params = NeuronParams{};
    CHECK(params.current_factor() == doctest::Approx((4096.0 - 380.0) / 4096.0));
    params.decay_mode = DecayMode::tau_steps;
    CHECK(params.current_factor() == doctest::Approx(std::exp(-1.0 / 380.0)));
}
