#pragma once

#include "ddsp/equalization.hpp"
#include "ddsp/estimation.hpp"
#include "ddsp/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace ddsp {

// Receiver architectures under test, plus two transmit-only schemes used by
// the PAPR experiment.
enum class Pipeline {
    TmFullMmse,
    PropCeFullMmse,
    PerfectCsiFullMmse,
    TmSingleTap,
    EpSingleTap,
    PropCeImfc,
    SpPaprOnly,
    EpPaprOnly,
};

const char* pipeline_name(Pipeline p);
std::optional<Pipeline> pipeline_from_name(std::string_view name);
bool pipeline_is_tx_only(Pipeline p);

enum class ChannelKind { Integer, Fractional };
const char* channel_kind_name(ChannelKind k);

struct ExperimentConfig {
    FrameConfig frame;
    std::vector<Pipeline> pipelines{Pipeline::PropCeImfc};
    int order = 4;
    std::vector<double> snr_db{15.0};
    std::vector<double> pdr_db{30.0};
    std::vector<double> v_max_kmh{1000.0};
    ChannelKind channel_kind = ChannelKind::Fractional;
    int trials = 200;
    std::uint64_t base_seed = 1;
    int threads = 1;
    int pilot_m_p = 0;  // SP pilot placement
    int pilot_n_p = 0;
    EpPilotConfig ep;
    CeConfig ce;
    EqualizerConfig eq;

    void validate() const;
};

// One Cartesian sweep point: (pipeline, snr, pdr, v_max).
struct SweepPoint {
    Pipeline pipeline;
    double snr_db;
    double pdr_db;
    double v_max_kmh;
};

struct TrialResult {
    double ber = 0.0;
    double nmse_db = kNmseFloorDb;
    double papr_db = 0.0;
};

// Documented 64-bit mix (splitmix64 finalizer chain) used to derive one RNG
// stream per (base_seed, point, trial).
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t point_index,
                          std::uint64_t trial_index);

// End-to-end single trial: channel draw, frame build, ICI-aware propagation,
// noise, estimation, equalization, demapping. Deterministic given
// (base_seed, point_index, trial_index).
TrialResult run_trial(const ExperimentConfig& cfg, const SweepPoint& point,
                      std::size_t point_index, int trial_index);

// All sweep points in deterministic order (pipelines x snr x pdr x v_max),
// trials parallelized over cfg.threads, aggregated as mean BER, mean
// effective throughput, median NMSE, mean PAPR.
std::vector<MetricsRecord> run_sweep(const ExperimentConfig& cfg);

std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg);

}  // namespace ddsp
