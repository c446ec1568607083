#include "icebreaker/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace icebreaker {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string Csv::str() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

Csv mds_report_csv(const std::vector<DependenceReport>& reports) {
    Csv csv;
    csv.header = {"test", "window_from", "window_to", "statistic", "chosen_lag", "p_value"};
    for (const auto& r : reports) {
        csv.add_row({mds_test_name(r.test), std::to_string(r.window_from),
                     std::to_string(r.window_to), format_double(r.statistic),
                     r.chosen_lag > 0 ? std::to_string(r.chosen_lag) : std::string(),
                     format_double(r.p_value)});
    }
    return csv;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string fnv1a64_hex(const std::string& content) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xF];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

SvgFigure::SvgFigure(double width, double height) : width_(width), height_(height) {}

namespace {

double map_x(const SvgFigure::Viewport& vp, double x) {
    const double span = vp.x_max - vp.x_min;
    const double f = span != 0.0 ? (x - vp.x_min) / span : 0.5;
    return vp.x + f * vp.w;
}

double map_y(const SvgFigure::Viewport& vp, double y) {
    const double span = vp.y_max - vp.y_min;
    const double f = span != 0.0 ? (y - vp.y_min) / span : 0.5;
    return vp.y + vp.h - f * vp.h;
}

} // namespace

void SvgFigure::frame(const Viewport& vp) {
    body_ += "<rect x=\"" + format_double(vp.x) + "\" y=\"" + format_double(vp.y) + "\" width=\"" +
             format_double(vp.w) + "\" height=\"" + format_double(vp.h) +
             "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
}

void SvgFigure::polyline(const Viewport& vp, const std::vector<double>& xs,
                         const std::vector<double>& ys, const std::string& stroke,
                         double stroke_width, const std::string& dash) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isnan(ys[i])) continue;
        pts += format_double(map_x(vp, xs[i]));
        pts += ',';
        pts += format_double(map_y(vp, ys[i]));
        pts += ' ';
    }
    if (pts.empty()) return;
    pts.pop_back();
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
             format_double(stroke_width) + "\"";
    if (!dash.empty()) body_ += " stroke-dasharray=\"" + dash + "\"";
    body_ += " points=\"" + pts + "\"/>\n";
}

void SvgFigure::vline(const Viewport& vp, double x, const std::string& stroke,
                      const std::string& dash) {
    const double px = map_x(vp, x);
    body_ += "<line x1=\"" + format_double(px) + "\" y1=\"" + format_double(vp.y) + "\" x2=\"" +
             format_double(px) + "\" y2=\"" + format_double(vp.y + vp.h) + "\" stroke=\"" + stroke +
             "\" stroke-dasharray=\"" + dash + "\"/>\n";
}

void SvgFigure::vbars(const Viewport& vp, const std::vector<double>& xs,
                      const std::vector<double>& ys, const std::string& stroke) {
    const double base = map_y(vp, std::max(0.0, vp.y_min));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isnan(ys[i]) || ys[i] <= vp.y_min) continue;
        const double px = map_x(vp, xs[i]);
        body_ += "<line x1=\"" + format_double(px) + "\" y1=\"" + format_double(base) + "\" x2=\"" +
                 format_double(px) + "\" y2=\"" + format_double(map_y(vp, ys[i])) + "\" stroke=\"" +
                 stroke + "\"/>\n";
    }
}

void SvgFigure::label(double px, double py, const std::string& text, int font_size) {
    body_ += "<text x=\"" + format_double(px) + "\" y=\"" + format_double(py) + "\" font-size=\"" +
             std::to_string(font_size) + "\" font-family=\"sans-serif\">" + text + "</text>\n";
}

std::string SvgFigure::render() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(width_) +
           "\" height=\"" + format_double(height_) + "\" viewBox=\"0 0 " + format_double(width_) +
           " " + format_double(height_) + "\">\n" + body_ + "</svg>\n";
}

} // namespace icebreaker
