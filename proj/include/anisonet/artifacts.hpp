#pragma once

#include <string>
#include <vector>

#include "anisonet/config.hpp"
#include "anisonet/connectome.hpp"
#include "anisonet/landscape.hpp"
#include "anisonet/protocol.hpp"
#include "anisonet/raster.hpp"
#include "anisonet/regression.hpp"
#include "anisonet/stats.hpp"
#include "anisonet/tasks.hpp"

namespace anisonet {

// Columnar edge list (source,target,weight,delay) with a '#'-prefixed
// metadata header carrying the network configuration and seed.
void save_connectome(const std::string& path, const Connectome& net);
Connectome load_connectome(const std::string& path);

// (neuron, dx, dy) rows.
void save_landscape(const std::string& path, const DirectionLandscape& landscape);

// (trial, step, neuron) spike events.
void save_events(const std::string& path, std::span<const SpikeRaster> rasters);
std::vector<SpikeRaster> load_events(const std::string& path, int trials, int steps, int neurons);

// (trial, row, unit, count), zero counts omitted.
void save_binned(const std::string& path, std::span<const Eigen::MatrixXd> binned);

// (source, intercepts, weights) columnar readout model.
void save_model(const std::string& path, const ReadoutModel& model, const std::string& source);

// step, mean, std rows.
void save_pairwise_diff(const std::string& path, const PairwiseDifferences& diff);

// (trial, row, pc1, pc2, ...) rows.
void save_pca_projections(const std::string& path, std::span<const Eigen::MatrixXd> projections);

// group, rate rows (one file per trial set, mean over trials).
void save_group_rates(const std::string& path, std::span<const double> rates);

// Minimal SVG spike raster (one 1x1 rect per spike), excitatory rows only.
void save_raster_svg(const std::string& path, const SpikeRaster& raster, int neuron_end);

void write_text_file(const std::string& path, const std::string& content);
std::string format_double(double v);

} // namespace anisonet
