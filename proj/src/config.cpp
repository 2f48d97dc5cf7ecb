#include "anisonet/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "anisonet/errors.hpp"

namespace anisonet {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

struct IniData {
    std::map<std::string, std::string> values; // "section.key" -> value
};

IniData parse_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    IniData data;
    std::string line, section;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(path + ":" + std::to_string(row) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(row) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(row) + ": empty key");
        data.values[section + "." + key] = value;
    }
    return data;
}

class IniReader {
public:
    explicit IniReader(IniData data) : data_(std::move(data)) {}

    bool has(const std::string& key) const { return data_.values.count(key) > 0; }

    std::string raw(const std::string& key) {
        used_.insert(key);
        return data_.values.at(key);
    }

    template <typename T>
    void read(const std::string& key, T& out) {
        if (!has(key)) return;
        std::stringstream ss(raw(key));
        T value{};
        ss >> value;
        if (ss.fail() || !(ss >> std::ws).eof())
            throw ConfigError("config field '" + key + "': cannot parse value '" +
                              data_.values.at(key) + "'");
        out = value;
    }

    void read(const std::string& key, std::string& out) {
        if (has(key)) out = raw(key);
    }

    void check_unknown() const {
        for (const auto& [key, value] : data_.values)
            if (!used_.count(key)) throw ConfigError("unknown config field '" + key + "'");
    }

private:
    IniData data_;
    std::set<std::string> used_;
};

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

RunConfig RunConfig::defaults() {
    RunConfig cfg;
    cfg.trajectories = {"hide",          "unhide",     "move_down", "move_up",
                        "pick_and_place", "put_on_top", "take_down"};
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    IniReader ini(parse_ini(path));
    RunConfig cfg = defaults();

    ini.read("network.exc_side", cfg.grid.exc_side);
    ini.read("network.inh_side", cfg.grid.inh_side);
    ini.read("network.p_conn", cfg.connectivity.p_conn);
    ini.read("network.sigma_exc", cfg.connectivity.sigma_exc);
    ini.read("network.sigma_inh", cfg.connectivity.sigma_inh);
    ini.read("network.n_shift", cfg.connectivity.n_shift);
    ini.read("network.j_exc", cfg.connectivity.j_exc);
    ini.read("network.j_inh", cfg.connectivity.j_inh);
    ini.read("network.j_pool", cfg.connectivity.j_pool);
    ini.read("network.perlin_scale", cfg.perlin_scale);
    ini.read("network.seed", cfg.seed);
    if (ini.has("network.shift_mode")) {
        const std::string mode = ini.raw("network.shift_mode");
        if (mode == "perlin") cfg.shift_mode = ShiftMode::perlin;
        else if (mode == "homogeneous") cfg.shift_mode = ShiftMode::homogeneous;
        else if (mode == "random") cfg.shift_mode = ShiftMode::random;
        else throw ConfigError("config field 'network.shift_mode': unknown mode '" + mode + "'");
    }
    if (ini.has("network.kind")) {
        const std::string kind = ini.raw("network.kind");
        if (kind == "anisotropic") cfg.network = NetworkChoice::anisotropic;
        else if (kind == "random") cfg.network = NetworkChoice::random;
        else if (kind == "both") cfg.network = NetworkChoice::both;
        else throw ConfigError("config field 'network.kind': unknown kind '" + kind + "'");
    }
    if (ini.has("network.input_origin")) {
        const auto parts = split_list(ini.raw("network.input_origin"));
        if (parts.size() != 2)
            throw ConfigError("config field 'network.input_origin': expected 'x,y'");
        cfg.input_origin = {std::stoi(parts[0]), std::stoi(parts[1])};
    }

    ini.read("loihi.v_th", cfg.neuron.v_th);
    ini.read("loihi.current_decay", cfg.neuron.decay_current);
    ini.read("loihi.voltage_decay", cfg.neuron.decay_voltage);
    ini.read("loihi.t_ref", cfg.neuron.t_ref);
    ini.read("loihi.i_bias", cfg.neuron.i_bias);
    ini.read("loihi.weight_multiplier", cfg.neuron.weight_multiplier);
    ini.read("loihi.weight_multiplier_random", cfg.weight_multiplier_random);
    if (ini.has("loihi.decay_mode")) {
        const std::string mode = ini.raw("loihi.decay_mode");
        if (mode == "loihi") cfg.neuron.decay_mode = DecayMode::loihi;
        else if (mode == "tau_steps") cfg.neuron.decay_mode = DecayMode::tau_steps;
        else throw ConfigError("config field 'loihi.decay_mode': unknown mode '" + mode + "'");
    }

    ini.read("protocol.record_steps", cfg.record_steps);
    ini.read("protocol.gap_steps", cfg.gap_steps);
    ini.read("protocol.drop_head", cfg.drop_head);
    ini.read("protocol.bin_width", cfg.bin_width);
    ini.read("protocol.samples_per_trial", cfg.samples_per_trial);

    if (ini.has("readout.source")) {
        const std::string source = ini.raw("readout.source");
        if (source == "pooling") cfg.readout_source = ReadoutSource::pooling;
        else if (source == "excitatory") cfg.readout_source = ReadoutSource::excitatory;
        else throw ConfigError("config field 'readout.source': unknown source '" + source + "'");
    }
    ini.read("readout.alpha", cfg.elastic.alpha);
    ini.read("readout.l1_ratio", cfg.elastic.l1_ratio);
    ini.read("readout.max_iter", cfg.elastic.max_iter);
    ini.read("readout.tol", cfg.elastic.tol);
    ini.read("readout.savgol_window", cfg.smoothing.window);
    ini.read("readout.savgol_polyorder", cfg.smoothing.polyorder);

    if (ini.has("tasks.trajectories")) cfg.trajectories = split_list(ini.raw("tasks.trajectories"));
    ini.read("tasks.representation_test_trial", cfg.representation_test_trial);
    ini.read("tasks.generalisation_test_trial", cfg.generalisation_test_trial);
    ini.read("tasks.trajectory_jitter_seed", cfg.trajectory_jitter_seed);
    ini.read("tasks.trajectory_jitter_amplitude", cfg.trajectory_jitter_amplitude);

    ini.read("analysis.plateau_begin", cfg.plateau_begin);
    ini.read("output.dir", cfg.output_dir);

    ini.check_unknown();
    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    grid.validate();
    neuron.validate();
    elastic.validate();
    if (connectivity.p_conn <= 0.0 || connectivity.p_conn > 1.0)
        throw ConfigError("config field 'network.p_conn': must be in (0, 1]");
    if (connectivity.sigma_exc <= 0.0)
        throw ConfigError("config field 'network.sigma_exc': must be positive");
    if (connectivity.sigma_inh <= 0.0)
        throw ConfigError("config field 'network.sigma_inh': must be positive");
    if (connectivity.n_shift < 0)
        throw ConfigError("config field 'network.n_shift': must be >= 0");
    if (perlin_scale < 1)
        throw ConfigError("config field 'network.perlin_scale': must be >= 1");
    if (weight_multiplier_random <= 0)
        throw ConfigError("config field 'loihi.weight_multiplier_random': must be positive");
    if (record_steps < drop_head + bin_width + samples_per_trial - 1)
        throw ConfigError("config field 'protocol.record_steps': too short for the binning");
    if (gap_steps < 0) throw ConfigError("config field 'protocol.gap_steps': must be >= 0");
    if (input_origin.x < 0 || input_origin.x >= grid.exc_side || input_origin.y < 0 ||
        input_origin.y >= grid.exc_side)
        throw ConfigError("config field 'network.input_origin': outside the excitatory grid");
    if (plateau_begin < 0 || plateau_begin >= record_steps)
        throw ConfigError("config field 'analysis.plateau_begin': outside the recording window");
    if (trajectories.empty())
        throw ConfigError("config field 'tasks.trajectories': must name at least one trajectory");
    if (smoothing.window % 2 == 0 || smoothing.window <= smoothing.polyorder)
        throw ConfigError("config field 'readout.savgol_window': must be odd and exceed the order");
}

std::string RunConfig::canonical_text() const {
    std::ostringstream out;
    out << "network.exc_side=" << grid.exc_side << '\n'
        << "network.inh_side=" << grid.inh_side << '\n'
        << "network.p_conn=" << connectivity.p_conn << '\n'
        << "network.sigma_exc=" << connectivity.sigma_exc << '\n'
        << "network.sigma_inh=" << connectivity.sigma_inh << '\n'
        << "network.n_shift=" << connectivity.n_shift << '\n'
        << "network.j_exc=" << connectivity.j_exc << '\n'
        << "network.j_inh=" << connectivity.j_inh << '\n'
        << "network.j_pool=" << connectivity.j_pool << '\n'
        << "network.perlin_scale=" << perlin_scale << '\n'
        << "network.shift_mode=" << static_cast<int>(shift_mode) << '\n'
        << "network.kind=" << static_cast<int>(network) << '\n'
        << "network.input_origin=" << input_origin.x << ',' << input_origin.y << '\n'
        << "network.seed=" << seed << '\n'
        << "loihi.v_th=" << neuron.v_th << '\n'
        << "loihi.current_decay=" << neuron.decay_current << '\n'
        << "loihi.voltage_decay=" << neuron.decay_voltage << '\n'
        << "loihi.t_ref=" << neuron.t_ref << '\n'
        << "loihi.i_bias=" << neuron.i_bias << '\n'
        << "loihi.weight_multiplier=" << neuron.weight_multiplier << '\n'
        << "loihi.weight_multiplier_random=" << weight_multiplier_random << '\n'
        << "loihi.decay_mode=" << static_cast<int>(neuron.decay_mode) << '\n'
        << "protocol.record_steps=" << record_steps << '\n'
        << "protocol.gap_steps=" << gap_steps << '\n'
        << "protocol.drop_head=" << drop_head << '\n'
        << "protocol.bin_width=" << bin_width << '\n'
        << "protocol.samples_per_trial=" << samples_per_trial << '\n'
        << "readout.source=" << static_cast<int>(readout_source) << '\n'
        << "readout.alpha=" << elastic.alpha << '\n'
        << "readout.l1_ratio=" << elastic.l1_ratio << '\n'
        << "readout.max_iter=" << elastic.max_iter << '\n'
        << "readout.tol=" << elastic.tol << '\n'
        << "readout.savgol_window=" << smoothing.window << '\n'
        << "readout.savgol_polyorder=" << smoothing.polyorder << '\n';
    out << "tasks.trajectories=";
    for (size_t i = 0; i < trajectories.size(); ++i)
        out << (i ? "," : "") << trajectories[i];
    out << '\n'
        << "tasks.representation_test_trial=" << representation_test_trial << '\n'
        << "tasks.generalisation_test_trial=" << generalisation_test_trial << '\n'
        << "tasks.trajectory_jitter_seed=" << trajectory_jitter_seed << '\n'
        << "tasks.trajectory_jitter_amplitude=" << trajectory_jitter_amplitude << '\n'
        << "analysis.plateau_begin=" << plateau_begin << '\n';
    return out.str();
}

uint64_t fnv1a_hash(const std::string& text) {
    uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

uint64_t RunConfig::config_hash() const { return fnv1a_hash(canonical_text()); }

std::string resolve_output_dir(const RunConfig& cfg, const std::string& cli_override) {
    if (!cli_override.empty()) return cli_override;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    if (const char* env = std::getenv("ANISONET_OUT")) return env;
    return "out";
}

} // namespace anisonet
