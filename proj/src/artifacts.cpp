#include "anisonet/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "anisonet/errors.hpp"

namespace anisonet {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file '" + path + "'");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file '" + path + "'");
    return in;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    open_out(path) << content;
}

void save_connectome(const std::string& path, const Connectome& net) {
    auto out = open_out(path);
    out << "# anisonet connectome v1\n";
    out << "# exc_side = " << net.spec.exc_side << "\n";
    out << "# inh_side = " << net.spec.inh_side << "\n";
    out << "# kind = " << (net.anisotropic ? "anisotropic" : "random") << "\n";
    out << "# seed = " << net.seed << "\n";
    out << "# p_conn = " << format_double(net.params.p_conn) << "\n";
    out << "# sigma_exc = " << format_double(net.params.sigma_exc) << "\n";
    out << "# sigma_inh = " << format_double(net.params.sigma_inh) << "\n";
    out << "# n_shift = " << net.params.n_shift << "\n";
    out << "# j_exc = " << net.params.j_exc << "\n";
    out << "# j_inh = " << net.params.j_inh << "\n";
    out << "# j_pool = " << net.params.j_pool << "\n";
    out << "# pooling = " << (net.pool_count() > 0 ? 1 : 0) << "\n";
    out << "# input_origin = " << net.input_origin.x << "," << net.input_origin.y << "\n";
    out << "# edges = " << net.edge_count() << "\n";
    out << "source,target,weight,delay\n";
    std::string chunk;
    chunk.reserve(1 << 20);
    char buf[64];
    net.for_each_edge([&](NeuronIndex s, NeuronIndex t, int32_t w) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,1\n", s, t, w);
        chunk += buf;
        if (chunk.size() > (1 << 20) - 64) {
            out << chunk;
            chunk.clear();
        }
    });
    out << chunk;
}

Connectome load_connectome(const std::string& path) {
    auto in = open_in(path);
    std::map<std::string, std::string> meta;
    std::string line;
    size_t header_edges = 0;

    while (in.peek() == '#') {
        std::getline(in, line);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(1, eq - 1);
        std::string value = line.substr(eq + 1);
        const auto strip = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t\r");
            s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
        };
        strip(key);
        strip(value);
        meta[key] = value;
    }
    std::getline(in, line); // column header

    auto require = [&](const std::string& key) -> const std::string& {
        const auto it = meta.find(key);
        if (it == meta.end()) throw IoError(path + ": missing metadata field '" + key + "'");
        return it->second;
    };

    Connectome net;
    net.spec.exc_side = std::stoi(require("exc_side"));
    net.spec.inh_side = std::stoi(require("inh_side"));
    net.spec.validate();
    net.anisotropic = require("kind") == "anisotropic";
    net.seed = std::stoull(require("seed"));
    net.params.p_conn = std::stod(require("p_conn"));
    net.params.sigma_exc = std::stod(require("sigma_exc"));
    net.params.sigma_inh = std::stod(require("sigma_inh"));
    net.params.n_shift = std::stoi(require("n_shift"));
    net.params.j_exc = std::stoi(require("j_exc"));
    net.params.j_inh = std::stoi(require("j_inh"));
    net.params.j_pool = std::stoi(require("j_pool"));
    header_edges = std::stoull(require("edges"));
    const bool has_pooling = require("pooling") == "1";
    if (has_pooling) net.pooling = build_pooling_layout(net.spec);
    {
        const std::string origin = require("input_origin");
        const auto comma = origin.find(',');
        if (comma == std::string::npos) throw IoError(path + ": malformed input_origin");
        const GridCoord o{std::stoi(origin.substr(0, comma)), std::stoi(origin.substr(comma + 1))};
        net.input_origin = o;
        net.input_patch = select_input_patch(net.spec, o);
    }

    std::vector<std::vector<std::pair<NeuronIndex, int32_t>>> adj(net.neuron_count());
    size_t count = 0;
    int source, target, weight, delay;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (std::sscanf(line.c_str(), "%d,%d,%d,%d", &source, &target, &weight, &delay) != 4)
            throw IoError(path + ": malformed edge row '" + line + "'");
        if (source < 0 || source >= net.neuron_count() || target < 0 ||
            target >= net.neuron_count())
            throw IoError(path + ": edge endpoint out of range in row '" + line + "'");
        adj[source].emplace_back(target, weight);
        ++count;
    }
    if (count != header_edges)
        throw IoError(path + ": edge count mismatch (header says " + std::to_string(header_edges) +
                      ", file has " + std::to_string(count) + ")");
    net.assemble(adj);
    return net;
}

void save_landscape(const std::string& path, const DirectionLandscape& landscape) {
    auto out = open_out(path);
    out << "neuron,dx,dy\n";
    for (size_t n = 0; n < landscape.direction.size(); ++n) {
        const GridCoord d = kShiftDirections[landscape.direction[n]];
        out << n << ',' << d.x << ',' << d.y << '\n';
    }
}

void save_events(const std::string& path, std::span<const SpikeRaster> rasters) {
    auto out = open_out(path);
    out << "trial,step,neuron\n";
    std::string chunk;
    chunk.reserve(1 << 20);
    char buf[48];
    for (size_t trial = 0; trial < rasters.size(); ++trial) {
        const auto& raster = rasters[trial];
        for (int s = 0; s < raster.steps(); ++s) {
            const auto words = raster.row(s);
            for (size_t w = 0; w < words.size(); ++w) {
                uint64_t bits = words[w];
                while (bits) {
                    const int n = static_cast<int>(w) * 64 + std::countr_zero(bits);
                    bits &= bits - 1;
                    std::snprintf(buf, sizeof(buf), "%zu,%d,%d\n", trial, s, n);
                    chunk += buf;
                    if (chunk.size() > (1 << 20) - 48) {
                        out << chunk;
                        chunk.clear();
                    }
                }
            }
        }
    }
    out << chunk;
}

std::vector<SpikeRaster> load_events(const std::string& path, int trials, int steps, int neurons) {
    auto in = open_in(path);
    std::vector<SpikeRaster> rasters(trials, SpikeRaster(steps, neurons));
    std::string line;
    std::getline(in, line); // header
    int trial, step, neuron;
    size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        if (std::sscanf(line.c_str(), "%d,%d,%d", &trial, &step, &neuron) != 3)
            throw IoError(path + ": malformed event row " + std::to_string(row));
        if (trial < 0 || trial >= trials || step < 0 || step >= steps || neuron < 0 ||
            neuron >= neurons)
            throw IoError(path + ": event out of range at row " + std::to_string(row));
        rasters[trial].set(step, neuron);
    }
    return rasters;
}

void save_binned(const std::string& path, std::span<const Eigen::MatrixXd> binned) {
    auto out = open_out(path);
    out << "trial,row,unit,count\n";
    std::string chunk;
    chunk.reserve(1 << 20);
    char buf[64];
    for (size_t trial = 0; trial < binned.size(); ++trial) {
        const auto& m = binned[trial];
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index u = 0; u < m.cols(); ++u) {
                if (m(r, u) == 0.0) continue;
                std::snprintf(buf, sizeof(buf), "%zu,%ld,%ld,%d\n", trial, static_cast<long>(r),
                              static_cast<long>(u), static_cast<int>(m(r, u)));
                chunk += buf;
                if (chunk.size() > (1 << 20) - 64) {
                    out << chunk;
                    chunk.clear();
                }
            }
        }
    }
    out << chunk;
}

void save_model(const std::string& path, const ReadoutModel& model, const std::string& source) {
    auto out = open_out(path);
    out << "# source = " << source << "\n";
    out << "# rank_deficient = " << (model.rank_deficient ? 1 : 0) << "\n";
    out << "# converged = " << (model.converged ? 1 : 0) << "\n";
    out << "term,dim0,dim1,dim2\n";
    out << "intercept";
    for (Eigen::Index d = 0; d < model.intercept.size(); ++d)
        out << ',' << format_double(model.intercept[d]);
    out << '\n';
    for (Eigen::Index j = 0; j < model.weights.rows(); ++j) {
        out << 'w' << j;
        for (Eigen::Index d = 0; d < model.weights.cols(); ++d)
            out << ',' << format_double(model.weights(j, d));
        out << '\n';
    }
}

void save_pairwise_diff(const std::string& path, const PairwiseDifferences& diff) {
    auto out = open_out(path);
    out << "step,mean,std\n";
    for (size_t s = 0; s < diff.mean.size(); ++s)
        out << s << ',' << format_double(diff.mean[s]) << ',' << format_double(diff.std[s]) << '\n';
}

void save_pca_projections(const std::string& path, std::span<const Eigen::MatrixXd> projections) {
    auto out = open_out(path);
    out << "trial,row";
    const Eigen::Index k = projections.empty() ? 0 : projections[0].cols();
    for (Eigen::Index c = 0; c < k; ++c) out << ",pc" << (c + 1);
    out << '\n';
    for (size_t trial = 0; trial < projections.size(); ++trial) {
        const auto& m = projections[trial];
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            out << trial << ',' << r;
            for (Eigen::Index c = 0; c < m.cols(); ++c) out << ',' << format_double(m(r, c));
            out << '\n';
        }
    }
}

void save_group_rates(const std::string& path, std::span<const double> rates) {
    auto out = open_out(path);
    out << "group,rate\n";
    for (size_t g = 0; g < rates.size(); ++g)
        out << g << ',' << format_double(rates[g]) << '\n';
}

void save_raster_svg(const std::string& path, const SpikeRaster& raster, int neuron_end) {
    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << raster.steps() << "\" height=\""
        << neuron_end << "\" viewBox=\"0 0 " << raster.steps() << ' ' << neuron_end << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int s = 0; s < raster.steps(); ++s) {
        const auto words = raster.row(s);
        for (size_t w = 0; w < words.size(); ++w) {
            uint64_t bits = words[w];
            while (bits) {
                const int n = static_cast<int>(w) * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                if (n >= neuron_end) break;
                out << "<rect x=\"" << s << "\" y=\"" << n << "\" width=\"1\" height=\"1\"/>\n";
            }
        }
    }
    out << "</svg>\n";
}

} // namespace anisonet
