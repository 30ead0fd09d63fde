#include "ddsp/config.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ddsp {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known)
            throw std::invalid_argument("config: unknown key '" + section + key + "'");
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<Pipeline> all_receivers() {
    return {Pipeline::TmFullMmse,  Pipeline::PropCeFullMmse, Pipeline::PerfectCsiFullMmse,
            Pipeline::TmSingleTap, Pipeline::EpSingleTap,    Pipeline::PropCeImfc};
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = text.empty() ? json::object() : json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");

    ExperimentConfig cfg;
    check_keys(root, "",
               {"frame", "pipelines", "order", "snr_db", "pdr_db", "v_max_kmh", "channel",
                "trials", "seed", "threads", "sp_pilot", "ep", "ce", "eq"});

    if (root.contains("frame")) {
        const json& f = root.at("frame");
        check_keys(f, "frame.", {"M", "N", "delta_f_hz", "t_cp_s", "f_c_hz"});
        read(f, "M", cfg.frame.M);
        read(f, "N", cfg.frame.N);
        read(f, "delta_f_hz", cfg.frame.delta_f);
        read(f, "t_cp_s", cfg.frame.t_cp);
        read(f, "f_c_hz", cfg.frame.f_c);
    }
    if (root.contains("pipelines")) {
        cfg.pipelines.clear();
        for (const auto& name : root.at("pipelines")) {
            const auto p = pipeline_from_name(name.get<std::string>());
            if (!p)
                throw std::invalid_argument("config: unknown pipeline '" +
                                            name.get<std::string>() + "'");
            cfg.pipelines.push_back(*p);
        }
    }
    read(root, "order", cfg.order);
    read(root, "snr_db", cfg.snr_db);
    read(root, "pdr_db", cfg.pdr_db);
    read(root, "v_max_kmh", cfg.v_max_kmh);
    if (root.contains("channel")) {
        const std::string kind = root.at("channel").get<std::string>();
        if (kind == "integer")
            cfg.channel_kind = ChannelKind::Integer;
        else if (kind == "fractional")
            cfg.channel_kind = ChannelKind::Fractional;
        else
            throw std::invalid_argument("config: channel must be 'integer' or 'fractional'");
    }
    read(root, "trials", cfg.trials);
    read(root, "seed", cfg.base_seed);
    read(root, "threads", cfg.threads);
    if (root.contains("sp_pilot")) {
        const json& sp = root.at("sp_pilot");
        check_keys(sp, "sp_pilot.", {"m_p", "n_p"});
        read(sp, "m_p", cfg.pilot_m_p);
        read(sp, "n_p", cfg.pilot_n_p);
    }
    if (root.contains("ep")) {
        const json& ep = root.at("ep");
        check_keys(ep, "ep.", {"K_f", "K_t"});
        read(ep, "K_f", cfg.ep.K_f);
        read(ep, "K_t", cfg.ep.K_t);
    }
    if (root.contains("ce")) {
        const json& ce = root.at("ce");
        check_keys(ce, "ce.", {"p_max", "epsilon", "refine_window", "refine_stages",
                               "refine_points"});
        read(ce, "p_max", cfg.ce.p_max);
        read(ce, "epsilon", cfg.ce.epsilon);
        read(ce, "refine_window", cfg.ce.refine_window);
        read(ce, "refine_stages", cfg.ce.refine_stages);
        read(ce, "refine_points", cfg.ce.refine_points);
    }
    if (root.contains("eq")) {
        const json& eq = root.at("eq");
        check_keys(eq, "eq.", {"max_iters", "eta"});
        read(eq, "max_iters", cfg.eq.max_iters);
        if (eq.contains("eta") && !eq.at("eta").is_null())
            cfg.eq.eta = eq.at("eta").get<double>();
    }

    cfg.validate();
    // The fixed channel delay spread must fit in the CP.
    if (cfg.frame.t_cp < 4e-6)
        throw std::invalid_argument(
            "config: frame.t_cp_s shorter than the 4 us channel delay spread");
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    json root;
    root["frame"] = {{"M", cfg.frame.M},
                     {"N", cfg.frame.N},
                     {"delta_f_hz", cfg.frame.delta_f},
                     {"t_cp_s", cfg.frame.t_cp},
                     {"f_c_hz", cfg.frame.f_c}};
    json pipelines = json::array();
    for (Pipeline p : cfg.pipelines) pipelines.push_back(pipeline_name(p));
    root["pipelines"] = std::move(pipelines);
    root["order"] = cfg.order;
    root["snr_db"] = cfg.snr_db;
    root["pdr_db"] = cfg.pdr_db;
    root["v_max_kmh"] = cfg.v_max_kmh;
    root["channel"] = channel_kind_name(cfg.channel_kind);
    root["trials"] = cfg.trials;
    root["seed"] = cfg.base_seed;
    root["threads"] = cfg.threads;
    root["sp_pilot"] = {{"m_p", cfg.pilot_m_p}, {"n_p", cfg.pilot_n_p}};
    root["ep"] = {{"K_f", cfg.ep.K_f}, {"K_t", cfg.ep.K_t}};
    root["ce"] = {{"p_max", cfg.ce.p_max},
                  {"epsilon", cfg.ce.epsilon},
                  {"refine_window", cfg.ce.refine_window},
                  {"refine_stages", cfg.ce.refine_stages},
                  {"refine_points", cfg.ce.refine_points}};
    json eq = {{"max_iters", cfg.eq.max_iters}};
    eq["eta"] = cfg.eq.eta ? json(*cfg.eq.eta) : json(nullptr);
    root["eq"] = std::move(eq);
    return root.dump(2);
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig cfg;  // default frame parameters
    if (name == "papr") {
        cfg.pipelines = {Pipeline::SpPaprOnly, Pipeline::EpPaprOnly};
        cfg.snr_db = {15.0};
        cfg.pdr_db.clear();
        for (int pdr = 0; pdr <= 40; pdr += 2) cfg.pdr_db.push_back(pdr);
        cfg.v_max_kmh = {0.0};
        cfg.trials = 10000;
    } else if (name == "pdr-sweep") {
        cfg.pipelines = all_receivers();
        cfg.snr_db = {15.0};
        cfg.pdr_db = {15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
        cfg.v_max_kmh = {1000.0};
        cfg.trials = 200;
    } else if (name == "snr-sweep") {
        cfg.pipelines = all_receivers();
        cfg.snr_db = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
        cfg.pdr_db = {30.0};
        cfg.v_max_kmh = {100.0, 1000.0};
        cfg.trials = 200;
    } else if (name == "speed-sweep") {
        cfg.pipelines = all_receivers();
        cfg.snr_db = {15.0};
        cfg.pdr_db = {30.0};
        cfg.v_max_kmh = {0.0, 100.0, 250.0, 500.0, 750.0, 1000.0};
        cfg.trials = 200;
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return cfg;
}

std::string csv_text(const std::vector<MetricsRecord>& records) {
    std::string out =
        "scheme,Q,snr_db,pdr_db,vmax_kmh,channel,trials,ber,eff_throughput,nmse_db,papr_db\n";
    for (const MetricsRecord& r : records) {
        out += r.scheme;
        out += ',' + std::to_string(r.order);
        out += ',' + format_double(r.snr_db);
        out += ',' + format_double(r.pdr_db);
        out += ',' + format_double(r.v_max_kmh);
        out += ',' + r.channel_kind;
        out += ',' + std::to_string(r.trials);
        out += ',' + format_double(r.ber);
        out += ',' + format_double(r.eff_throughput);
        out += ',' + format_double(r.nmse_db);
        out += ',' + format_double(r.papr_db);
        out += '\n';
    }
    return out;
}

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

void emit_csv(const std::vector<MetricsRecord>& records, const std::filesystem::path& path) {
    atomic_write(path, csv_text(records));
}

void write_manifest(const ExperimentConfig& cfg, const std::filesystem::path& csv_path) {
    json manifest;
    manifest["version"] = kArtifactVersion;
    const auto now = std::chrono::system_clock::now();
    manifest["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    manifest["output"] = csv_path.string();
    manifest["config"] = json::parse(serialize_config(cfg));
    atomic_write(csv_path.string() + ".manifest.json", manifest.dump(2) + "\n");
}

}  // namespace ddsp
