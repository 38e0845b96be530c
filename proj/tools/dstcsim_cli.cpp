// Command-line front end for the buffer-aided DSTC link simulator.
//
//   dstcsim ber          BER/delay statistics over an SNR sweep
//   dstcsim buffer-sweep BER against buffer size at fixed SNR, paired seeds
//   dstcsim delay        delay statistics against delivered packet count
//
// Options mirror the key = value config file; flags override file values.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dstcsim/config.hpp"
#include "dstcsim/harness.hpp"
#include "dstcsim/report.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string snr;
    std::string buffer_mode;
    std::string selection;
    std::string relay_detector;
    std::string dest_detector;
    std::string channel_law;
    std::vector<std::pair<std::string, std::string>> overrides;
};

void add_common_options(CLI::App* cmd, CliOptions& opts) {
    const auto track = [&opts](const std::string& key) {
        return [&opts, key](const std::string& value) { opts.overrides.emplace_back(key, value); };
    };
    cmd->add_option("--config", opts.config_path, "key = value config file");
    cmd->add_option_function<std::string>("--users", track("users"), "number of users K");
    cmd->add_option_function<std::string>("--relays", track("relays"), "number of relays L");
    cmd->add_option_function<std::string>("--chips", track("chips"), "spreading length N");
    cmd->add_option_function<std::string>("--symbols", track("symbols"), "symbols per packet M");
    cmd->add_option_function<std::string>("--buffer-size", track("buffer-size"),
                                          "buffer capacity J");
    cmd->add_option_function<std::string>("--buffer-mode", track("buffer-mode"),
                                          "fixed | snr | power");
    cmd->add_option_function<std::string>("--buffer-jmin", track("buffer.Jmin"), "minimum J");
    cmd->add_option_function<std::string>("--buffer-jmax", track("buffer.Jmax"), "maximum J");
    cmd->add_option_function<std::string>("--buffer-gamma", track("buffer.gamma"),
                                          "channel power threshold");
    cmd->add_option_function<std::string>("--buffer-d1", track("buffer.d1"), "SNR step (dB)");
    cmd->add_option_function<std::string>("--buffer-d2", track("buffer.d2"), "size step (SNR rule)");
    cmd->add_option_function<std::string>("--buffer-d3", track("buffer.d3"),
                                          "size step (power rule)");
    cmd->add_option_function<std::string>("--buffers", track("buffers"),
                                          "on | off (off = non-buffered baseline)");
    cmd->add_option_function<std::string>("--selection", track("selection"),
                                          "exhaustive | greedy | random | none");
    cmd->add_option_function<std::string>("--relay-detector", track("relay-detector"),
                                          "rake | mmse | perfect");
    cmd->add_option_function<std::string>("--dest-detector", track("dest-detector"),
                                          "rake | mmse | ml");
    cmd->add_option_function<std::string>("--channel-law", track("channel-law"),
                                          "uniform | rayleigh");
    cmd->add_option_function<std::string>("--snr", track("snr"), "min:max:step or single dB value");
    cmd->add_option_function<std::string>("--packets", track("packets"),
                                          "delivered packets per point");
    cmd->add_option_function<std::string>("--seed", track("seed"), "RNG seed");
    cmd->add_option_function<std::string>("--channel-estimation", track("channel-estimation"),
                                          "on | off");
    cmd->add_option_function<std::string>("--pilots", track("pilots"), "pilot symbols per link");
    cmd->add_option_function<std::string>("--out", track("out"), "CSV output path");
    cmd->add_option_function<std::string>("--svg", track("svg"), "SVG plot path (optional)");
    cmd->add_option_function<std::string>("--threads", track("threads"),
                                          "worker threads (0 = auto, 1 = serial)");
}

dstcsim::SimConfig build_config(const CliOptions& opts) {
    dstcsim::SimConfig cfg;
    if (!opts.config_path.empty())
        dstcsim::apply_config_file(cfg, opts.config_path);
    for (const auto& [key, value] : opts.overrides)
        dstcsim::apply_key(cfg, key, value);
    cfg.validate();
    return cfg;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ','))
        out.push_back(static_cast<int>(dstcsim::parse_long("list", dstcsim::trim(item))));
    if (out.empty())
        throw dstcsim::ConfigError("expected a comma-separated list of integers");
    return out;
}

std::vector<long> parse_long_list(const std::string& text) {
    std::vector<long> out;
    for (int v : parse_int_list(text))
        out.push_back(v);
    return out;
}

void print_summary(const dstcsim::ExperimentResult& result, const dstcsim::SimConfig& cfg) {
    std::printf("%s\n", dstcsim::kCsvHeader);
    for (const dstcsim::PointResult& r : result.rows)
        std::printf("%g,%g,%g,%g,%g,%g,%lld\n", r.snr_db, r.ber, r.avg_delay_epochs,
                    r.mean_buffer_size, r.pairs_examined_mean, r.idle_epoch_fraction,
                    r.symbols_counted);
    std::printf("wrote %s\n", cfg.out.c_str());
    if (!cfg.svg.empty())
        std::printf("wrote %s\n", cfg.svg.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Buffer-aided distributed space-time coding link simulator"};
    app.require_subcommand(1);

    CliOptions ber_opts;
    CLI::App* ber = app.add_subcommand("ber", "BER over an SNR sweep");
    add_common_options(ber, ber_opts);

    CliOptions sweep_opts;
    std::string sizes_text = "1,2,4,6,8";
    CLI::App* sweep = app.add_subcommand("buffer-sweep", "BER against buffer size at fixed SNR");
    add_common_options(sweep, sweep_opts);
    sweep->add_option("--sizes", sizes_text, "comma-separated J list");

    CliOptions delay_opts;
    std::string counts_text = "200,400,800,1600";
    CLI::App* delay = app.add_subcommand("delay", "delay against delivered packet count");
    add_common_options(delay, delay_opts);
    delay->add_option("--packet-counts", counts_text, "comma-separated packet targets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ber->parsed()) {
            const dstcsim::SimConfig cfg = build_config(ber_opts);
            const dstcsim::ExperimentResult result = dstcsim::run_ber_sweep(cfg);
            dstcsim::emit_results(result, cfg);
            print_summary(result, cfg);
        } else if (sweep->parsed()) {
            const dstcsim::SimConfig cfg = build_config(sweep_opts);
            const dstcsim::ExperimentResult result =
                dstcsim::run_buffer_size_sweep(cfg, parse_int_list(sizes_text));
            dstcsim::emit_results(result, cfg);
            print_summary(result, cfg);
        } else if (delay->parsed()) {
            const dstcsim::SimConfig cfg = build_config(delay_opts);
            const dstcsim::ExperimentResult result =
                dstcsim::run_delay_experiment(cfg, parse_long_list(counts_text));
            dstcsim::emit_results(result, cfg);
            print_summary(result, cfg);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
