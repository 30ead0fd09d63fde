#include "ddsp/harness.hpp"

#include "ddsp/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace ddsp {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct NamedPipeline {
    Pipeline pipeline;
    const char* name;
};

constexpr NamedPipeline kPipelines[] = {
    {Pipeline::TmFullMmse, "TM+FullMMSE"},
    {Pipeline::PropCeFullMmse, "PropCE+FullMMSE"},
    {Pipeline::PerfectCsiFullMmse, "PerfCSI+FullMMSE"},
    {Pipeline::TmSingleTap, "TM+SingleTap"},
    {Pipeline::EpSingleTap, "EP+SingleTap"},
    {Pipeline::PropCeImfc, "PropCE+IMFC"},
    {Pipeline::SpPaprOnly, "SP-PAPR"},
    {Pipeline::EpPaprOnly, "EP-PAPR"},
};

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 0) {
        const double lo = *std::max_element(values.begin(), values.begin() + mid);
        return 0.5 * (lo + hi);
    }
    return hi;
}

// Extracts off-mask entries column-major, matching build_ep_grid's fill order.
Vector data_entries(const Matrix& grid, const PilotMask& mask) {
    Vector out(grid.size() - mask.count());
    Eigen::Index next = 0;
    for (Eigen::Index n = 0; n < grid.cols(); ++n)
        for (Eigen::Index m = 0; m < grid.rows(); ++m)
            if (!mask(m, n)) out(next++) = grid(m, n);
    return out;
}

}  // namespace

const char* pipeline_name(Pipeline p) {
    for (const auto& np : kPipelines)
        if (np.pipeline == p) return np.name;
    return "?";
}

std::optional<Pipeline> pipeline_from_name(std::string_view name) {
    for (const auto& np : kPipelines)
        if (name == np.name) return np.pipeline;
    return std::nullopt;
}

bool pipeline_is_tx_only(Pipeline p) {
    return p == Pipeline::SpPaprOnly || p == Pipeline::EpPaprOnly;
}

const char* channel_kind_name(ChannelKind k) {
    return k == ChannelKind::Integer ? "integer" : "fractional";
}

void ExperimentConfig::validate() const {
    frame.validate();
    ce.validate();
    eq.validate();
    ep.validate(frame.M, frame.N);
    bits_per_symbol(order);
    if (pipelines.empty()) throw std::invalid_argument("config: no pipelines selected");
    if (snr_db.empty() || pdr_db.empty() || v_max_kmh.empty())
        throw std::invalid_argument("config: every swept list must be nonempty");
    if (trials < 1) throw std::invalid_argument("config: trials >= 1");
    if (threads < 1) throw std::invalid_argument("config: threads >= 1");
    if (pilot_m_p < 0 || pilot_m_p >= frame.M || pilot_n_p < 0 || pilot_n_p >= frame.N)
        throw std::invalid_argument("config: SP pilot index out of range");
    for (double v : v_max_kmh)
        if (v < 0.0) throw std::invalid_argument("config: v_max >= 0");
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t point_index,
                          std::uint64_t trial_index) {
    return mix64(mix64(mix64(base_seed) ^ point_index) ^ trial_index);
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg) {
    std::vector<SweepPoint> points;
    for (Pipeline p : cfg.pipelines)
        for (double snr : cfg.snr_db)
            for (double pdr : cfg.pdr_db)
                for (double v : cfg.v_max_kmh) points.push_back({p, snr, pdr, v});
    return points;
}

TrialResult run_trial(const ExperimentConfig& cfg, const SweepPoint& point,
                      std::size_t point_index, int trial_index) {
    const FrameConfig& frame = cfg.frame;
    const int M = frame.M;
    const int N = frame.N;
    const int bps = bits_per_symbol(cfg.order);
    const double snr_lin = std::pow(10.0, point.snr_db / 10.0);
    std::mt19937_64 rng(derive_seed(cfg.base_seed, point_index,
                                    static_cast<std::uint64_t>(trial_index)));
    TrialResult res;

    if (point.pipeline == Pipeline::SpPaprOnly) {
        SpPilotConfig sp{cfg.pilot_m_p, cfg.pilot_n_p, 1.0,
                         std::sqrt(std::pow(10.0, point.pdr_db / 10.0))};
        const Bits bits = random_bits(static_cast<std::size_t>(M) * N * bps, rng);
        const ComplexGrid x = build_sp_grid(qam_map(bits, cfg.order, M, N), sp);
        res.papr_db = papr_db(modulate(x));
        return res;
    }
    if (point.pipeline == Pipeline::EpPaprOnly) {
        const Eigen::Index count =
            static_cast<Eigen::Index>(M) * N - ep_pilot_count(cfg.ep, M, N);
        const Bits bits = random_bits(static_cast<std::size_t>(count) * bps, rng);
        const EpFrame ep = build_ep_grid(qam_map_vector(bits, cfg.order, count), cfg.ep, M, N);
        res.papr_db = papr_db(modulate(ep.grid));
        return res;
    }

    ChannelRealization ch = draw_channel(frame, point.v_max_kmh, rng);
    if (cfg.channel_kind == ChannelKind::Integer) ch = quantize_integer(ch, frame);
    const Matrix h_tf_true = tf_channel_matrix(ch.paths, frame);

    if (point.pipeline == Pipeline::EpSingleTap) {
        const double amp = std::sqrt(snr_lin);  // sigma2 = 1
        const Eigen::Index count =
            static_cast<Eigen::Index>(M) * N - ep_pilot_count(cfg.ep, M, N);
        const Bits bits = random_bits(static_cast<std::size_t>(count) * bps, rng);
        EpFrame ep = build_ep_grid(qam_map_vector(bits, cfg.order, count), cfg.ep, M, N);
        ep.grid.m *= amp;
        res.papr_db = papr_db(modulate(ep.grid));

        const ComplexGrid r =
            add_noise(apply_channel(ep.grid, ch.paths, frame), NoiseConfig{1.0}, rng);
        const ComplexGrid y(dft_cols(r.m), Domain::FreqTime);
        const EstimatedChannel est = ep_estimate(y, ep.grid, ep.mask);
        res.nmse_db = nmse_db(est.h_tf, h_tf_true);

        const Matrix x_hat = single_tap_mmse(y.m, est.h_tf, snr_lin);
        const Bits bits_hat = qam_demap(Vector(data_entries(x_hat, ep.mask) / amp), cfg.order);
        res.ber = ber(bits, bits_hat);
        return res;
    }

    // SP pipelines.
    const PowerAllocation alloc = sigma_from_snr(point.snr_db, point.pdr_db, frame);
    const SpPilotConfig sp{cfg.pilot_m_p, cfg.pilot_n_p, alloc.sigma_d, alloc.sigma_p};
    const Bits bits = random_bits(static_cast<std::size_t>(M) * N * bps, rng);
    const ComplexGrid x = build_sp_grid(qam_map(bits, cfg.order, M, N), sp);
    res.papr_db = papr_db(modulate(x));

    const ComplexGrid r =
        add_noise(apply_channel(x, ch.paths, frame), NoiseConfig{alloc.sigma2}, rng);

    Matrix x_hat = Matrix::Zero(M, N);
    switch (point.pipeline) {
        case Pipeline::TmSingleTap: {
            const EstimatedChannel est =
                tm_estimate(dd_from_delay_time(r), sp, alloc.sigma2, frame);
            const Matrix h_hat = reconstruct_tf(est, frame);
            res.nmse_db = nmse_db(h_hat, h_tf_true);
            x_hat = single_tap_mmse(dft_cols(r.m), h_hat, snr_lin);
            break;
        }
        case Pipeline::TmFullMmse: {
            const EstimatedChannel est =
                tm_estimate(dd_from_delay_time(r), sp, alloc.sigma2, frame);
            res.nmse_db = nmse_db(reconstruct_tf(est, frame), h_tf_true);
            if (!est.paths.empty())
                x_hat = full_mmse(r, est.path_list(), frame, snr_lin);
            break;
        }
        case Pipeline::PropCeFullMmse: {
            const EstimatedChannel est =
                fractional_ce(dd_from_delay_time(r), sp, frame, cfg.ce);
            res.nmse_db = nmse_db(reconstruct_tf(est, frame), h_tf_true);
            if (!est.paths.empty())
                x_hat = full_mmse(r, est.path_list(), frame, snr_lin);
            break;
        }
        case Pipeline::PropCeImfc: {
            const EstimatedChannel est =
                fractional_ce(dd_from_delay_time(r), sp, frame, cfg.ce);
            res.nmse_db = nmse_db(reconstruct_tf(est, frame), h_tf_true);
            if (!est.paths.empty()) {
                EqualizerConfig eq = cfg.eq;
                eq.snr_linear = snr_lin;
                x_hat = imfc_landweber(r, est.path_list(), frame, eq);
            }
            break;
        }
        case Pipeline::PerfectCsiFullMmse: {
            res.nmse_db = kNmseFloorDb;
            x_hat = full_mmse(r, ch.paths, frame, snr_lin);
            break;
        }
        default:
            throw std::logic_error("run_trial: unhandled pipeline");
    }

    const DetectionResult det = remove_pilot_and_demap(x_hat, sp, cfg.order);
    res.ber = ber(bits, det.bits);
    return res;
}

std::vector<MetricsRecord> run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<SweepPoint> points = sweep_points(cfg);
    std::vector<MetricsRecord> records;
    records.reserve(points.size());

    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        const SweepPoint& point = points[pi];
        std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));

        const int workers = std::min(cfg.threads, cfg.trials);
        if (workers <= 1) {
            for (int t = 0; t < cfg.trials; ++t) results[t] = run_trial(cfg, point, pi, t);
        } else {
            std::atomic<int> next{0};
            std::exception_ptr error;
            std::mutex error_mutex;
            auto worker = [&] {
                for (;;) {
                    const int t = next.fetch_add(1);
                    if (t >= cfg.trials) return;
                    try {
                        results[t] = run_trial(cfg, point, pi, t);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!error) error = std::current_exception();
                        return;
                    }
                }
            };
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
            if (error) std::rethrow_exception(error);
        }

        const double density = point.pipeline == Pipeline::EpSingleTap
                                   ? data_density(PilotScheme::Embedded, cfg.ep.K_f, cfg.ep.K_t)
                                   : data_density(PilotScheme::Superimposed);
        MetricsRecord rec;
        rec.scheme = pipeline_name(point.pipeline);
        rec.order = cfg.order;
        rec.snr_db = point.snr_db;
        rec.pdr_db = point.pdr_db;
        rec.v_max_kmh = point.v_max_kmh;
        rec.channel_kind = channel_kind_name(cfg.channel_kind);
        rec.trials = cfg.trials;
        double ber_sum = 0.0, eff_sum = 0.0, papr_sum = 0.0;
        std::vector<double> nmse_values;
        nmse_values.reserve(results.size());
        const bool tx_only = pipeline_is_tx_only(point.pipeline);
        for (const TrialResult& tr : results) {
            ber_sum += tr.ber;
            eff_sum += tx_only ? 0.0 : effective_throughput(tr.ber, density, cfg.order);
            papr_sum += tr.papr_db;
            nmse_values.push_back(tr.nmse_db);
        }
        rec.ber = ber_sum / cfg.trials;
        rec.eff_throughput = eff_sum / cfg.trials;
        rec.papr_db = papr_sum / cfg.trials;
        rec.nmse_db = median(std::move(nmse_values));
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace ddsp
