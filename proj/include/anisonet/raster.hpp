#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace anisonet {

// Binary spike matrix, steps x neurons, bit-packed per step row.
class SpikeRaster {
public:
    SpikeRaster() = default;
    SpikeRaster(int steps, int neurons)
        : steps_(steps), neurons_(neurons), words_((neurons + 63) / 64),
          bits_(static_cast<size_t>(steps) * words_, 0) {}

    int steps() const { return steps_; }
    int neurons() const { return neurons_; }

    void set(int step, int neuron) {
        bits_[static_cast<size_t>(step) * words_ + neuron / 64] |= 1ull << (neuron % 64);
    }
    bool get(int step, int neuron) const {
        return (bits_[static_cast<size_t>(step) * words_ + neuron / 64] >> (neuron % 64)) & 1ull;
    }

    std::span<const uint64_t> row(int step) const {
        return {bits_.data() + static_cast<size_t>(step) * words_, static_cast<size_t>(words_)};
    }

    // Spikes at `step` among neurons [0, n_end).
    int population_count(int step, int n_end) const {
        const uint64_t* w = bits_.data() + static_cast<size_t>(step) * words_;
        int c = 0;
        const int full = n_end / 64;
        for (int i = 0; i < full; ++i) c += std::popcount(w[i]);
        if (n_end % 64) c += std::popcount(w[full] & ((1ull << (n_end % 64)) - 1));
        return c;
    }

    int64_t total_count(int n_end) const {
        int64_t c = 0;
        for (int s = 0; s < steps_; ++s) c += population_count(s, n_end);
        return c;
    }

    int neuron_spike_count(int neuron) const {
        int c = 0;
        for (int s = 0; s < steps_; ++s) c += get(s, neuron);
        return c;
    }

    bool operator==(const SpikeRaster& other) const = default;

private:
    int steps_ = 0;
    int neurons_ = 0;
    int words_ = 0;
    std::vector<uint64_t> bits_;
};

// Number of neurons in [0, n_end) whose spike bit differs between the two
// rows. Rasters must share the step/neuron layout.
inline int hamming_at_step(const SpikeRaster& a, const SpikeRaster& b, int step, int n_end) {
    const auto ra = a.row(step);
    const auto rb = b.row(step);
    int c = 0;
    const int full = n_end / 64;
    for (int i = 0; i < full; ++i) c += std::popcount(ra[i] ^ rb[i]);
    if (n_end % 64) c += std::popcount((ra[full] ^ rb[full]) & ((1ull << (n_end % 64)) - 1));
    return c;
}

} // namespace anisonet
