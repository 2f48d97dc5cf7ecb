#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "anisonet/artifacts.hpp"
#include "anisonet/config.hpp"
#include "anisonet/errors.hpp"

using namespace anisonet;

namespace {

std::string temp_file(const std::string& stem, const std::string& content) {
    const std::string path = (std::filesystem::temp_directory_path() / stem).string();
    std::ofstream out(path);
    out << content;
    return path;
}

const char* kBaseConfig = R"(# test config
[network]
seed = 9
sigma_exc = 12
kind = both

[loihi]
weight_multiplier = 100

[protocol]
record_steps = 215
)";

} // namespace

TEST_CASE("config parsing fills fields and validates") {
    const std::string path = temp_file("anisonet_cfg_ok.ini", kBaseConfig);
    const RunConfig cfg = RunConfig::from_file(path);
    CHECK(cfg.seed == 9);
    CHECK(cfg.neuron.weight_multiplier == 100);
    CHECK(cfg.network == NetworkChoice::both);
    CHECK(cfg.grid.exc_side == 60);
    CHECK(cfg.trajectories.size() == 7);
    std::filesystem::remove(path);
}

TEST_CASE("unknown keys are rejected") {
    const std::string path =
        temp_file("anisonet_cfg_unknown.ini", "[network]\nseed = 1\nsgima_exc = 12\n");
    CHECK_THROWS_AS(RunConfig::from_file(path), ConfigError);
    std::filesystem::remove(path);
}

TEST_CASE("invalid values name the field") {
    const std::string path =
        temp_file("anisonet_cfg_sigma.ini", "[network]\nsigma_exc = -3\n");
    try {
        RunConfig::from_file(path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("sigma_exc") != std::string::npos);
    }
    std::filesystem::remove(path);

    const std::string bad_value =
        temp_file("anisonet_cfg_badvalue.ini", "[loihi]\nv_th = sixty\n");
    CHECK_THROWS_AS(RunConfig::from_file(bad_value), ConfigError);
    std::filesystem::remove(bad_value);
}

TEST_CASE("config hash ignores formatting but tracks parameters") {
    const std::string a = temp_file("anisonet_cfg_a.ini", kBaseConfig);
    const std::string b = temp_file("anisonet_cfg_b.ini",
                                    "[network]\nkind=both\nsigma_exc=12\nseed=9\n"
                                    "[loihi]\nweight_multiplier = 100   ; comment\n");
    const std::string c = temp_file("anisonet_cfg_c.ini",
                                    "[network]\nseed = 10\n[loihi]\nweight_multiplier = 100\n");
    CHECK(RunConfig::from_file(a).config_hash() == RunConfig::from_file(b).config_hash());
    CHECK(RunConfig::from_file(a).config_hash() != RunConfig::from_file(c).config_hash());
    std::filesystem::remove(a);
    std::filesystem::remove(b);
    std::filesystem::remove(c);
}

TEST_CASE("connectome files round-trip") {
    GridSpec spec{20, 10};
    const auto landscape = build_landscape(spec, 2, 3);
    ConnectivityParams params;
    params.sigma_exc = 4.0;
    params.sigma_inh = 3.0;
    Connectome net = build_anisotropic(spec, landscape, params, 3);
    attach_pooling(net);
    set_input_patch(net, {7, 7});

    const std::string path =
        (std::filesystem::temp_directory_path() / "anisonet_connectome.csv").string();
    save_connectome(path, net);
    const Connectome loaded = load_connectome(path);

    CHECK(loaded.spec.exc_side == 20);
    CHECK(loaded.anisotropic == net.anisotropic);
    CHECK(loaded.seed == net.seed);
    CHECK(loaded.edge_count() == net.edge_count());
    CHECK(loaded.pool_count() == net.pool_count());
    CHECK(loaded.input_patch == net.input_patch);

    bool same = true;
    for (NeuronIndex src = 0; src < net.neuron_count(); ++src) {
        const auto ta = net.targets_of(src), tb = loaded.targets_of(src);
        const auto wa = net.weights_of(src), wb = loaded.weights_of(src);
        if (!std::equal(ta.begin(), ta.end(), tb.begin(), tb.end()) ||
            !std::equal(wa.begin(), wa.end(), wb.begin(), wb.end()))
            same = false;
    }
    CHECK(same);
    std::filesystem::remove(path);
}

TEST_CASE("event files round-trip") {
    std::vector<SpikeRaster> rasters(2, SpikeRaster(50, 30));
    rasters[0].set(0, 5);
    rasters[0].set(49, 29);
    rasters[1].set(10, 0);
    const std::string path =
        (std::filesystem::temp_directory_path() / "anisonet_events.csv").string();
    save_events(path, rasters);
    const auto loaded = load_events(path, 2, 50, 30);
    CHECK(loaded[0] == rasters[0]);
    CHECK(loaded[1] == rasters[1]);
    std::filesystem::remove(path);
}

TEST_CASE("resolve_output_dir precedence") {
    RunConfig cfg = RunConfig::defaults();
    CHECK(resolve_output_dir(cfg, "cli_dir") == "cli_dir");
    cfg.output_dir = "cfg_dir";
    CHECK(resolve_output_dir(cfg, "") == "cfg_dir");
    cfg.output_dir.clear();
    setenv("ANISONET_OUT", "env_dir", 1);
    CHECK(resolve_output_dir(cfg, "") == "env_dir");
    unsetenv("ANISONET_OUT");
    CHECK(resolve_output_dir(cfg, "") == "out");
}
