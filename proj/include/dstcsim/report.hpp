#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "dstcsim/common.hpp"
#include "dstcsim/harness.hpp"

namespace dstcsim {

inline constexpr const char* kCsvHeader =
    "snr_db,ber,avg_delay_epochs,mean_buffer_size,pairs_examined_mean,"
    "idle_epoch_fraction,symbols_counted";

// Fixed-format doubles so that reruns with the same seed emit identical bytes.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline std::string to_csv(const ExperimentResult& result) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const PointResult& r : result.rows) {
        out += format_double(r.snr_db);
        out += ',';
        out += format_double(r.ber);
        out += ',';
        out += format_double(r.avg_delay_epochs);
        out += ',';
        out += format_double(r.mean_buffer_size);
        out += ',';
        out += format_double(r.pairs_examined_mean);
        out += ',';
        out += format_double(r.idle_epoch_fraction);
        out += ',';
        out += std::to_string(r.symbols_counted);
        out += '\n';
    }
    return out;
}

inline void write_file(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open '" + path + "' for writing");
    out << text;
    if (!out)
        throw ConfigError("write failed for '" + path + "'");
}

inline void write_csv(const ExperimentResult& result, const std::string& path) {
    write_file(to_csv(result), path);
}

// Self-contained SVG line plot: log10(BER) against SNR. Rows without counted
// symbols are skipped.
inline std::string to_svg(const ExperimentResult& result, const std::string& title = "BER") {
    const double width = 640.0;
    const double height = 480.0;
    const double margin = 60.0;

    std::vector<std::pair<double, double>> pts;  // (snr, log10 ber)
    for (const PointResult& r : result.rows) {
        if (r.symbols_counted <= 0 || !(r.ber == r.ber))
            continue;
        const double floor_ber = 0.5 / static_cast<double>(r.symbols_counted);
        pts.emplace_back(r.snr_db, std::log10(std::max(r.ber, floor_ber)));
    }

    double x_lo = 0.0, x_hi = 1.0, y_lo = -4.0, y_hi = 0.0;
    if (!pts.empty()) {
        x_lo = x_hi = pts.front().first;
        y_lo = y_hi = pts.front().second;
        for (const auto& [x, y] : pts) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
        if (x_hi == x_lo) x_hi = x_lo + 1.0;
        if (y_hi == y_lo) y_hi = y_lo + 1.0;
    }
    const auto sx = [&](double x) {
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin);
    };
    const auto sy = [&](double y) {
        return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin);
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(width) +
           "\" height=\"" + format_double(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + format_double(width / 2) + "\" y=\"24\" text-anchor=\"middle\">" +
           title + "</text>\n";
    svg += "<line x1=\"" + format_double(margin) + "\" y1=\"" + format_double(height - margin) +
           "\" x2=\"" + format_double(width - margin) + "\" y2=\"" +
           format_double(height - margin) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + format_double(margin) + "\" y1=\"" + format_double(margin) +
           "\" x2=\"" + format_double(margin) + "\" y2=\"" + format_double(height - margin) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + format_double(width / 2) + "\" y=\"" + format_double(height - 16) +
           "\" text-anchor=\"middle\">snr_db</text>\n";
    svg += "<text x=\"18\" y=\"" + format_double(height / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + format_double(height / 2) +
           ")\">log10(ber)</text>\n";
    if (!pts.empty()) {
        svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) svg += ' ';
            svg += format_double(sx(pts[i].first)) + "," + format_double(sy(pts[i].second));
        }
        svg += "\"/>\n";
        for (const auto& [x, y] : pts)
            svg += "<circle cx=\"" + format_double(sx(x)) + "\" cy=\"" + format_double(sy(y)) +
                   "\" r=\"3\" fill=\"steelblue\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

inline void write_svg(const ExperimentResult& result, const std::string& path,
                      const std::string& title = "BER") {
    write_file(to_svg(result, title), path);
}

// CSV always; SVG when the config names a plot path.
inline void emit_results(const ExperimentResult& result, const SimConfig& cfg) {
    write_csv(result, cfg.out);
    if (!cfg.svg.empty())
        write_svg(result, cfg.svg);
}

}  // namespace dstcsim
