#ifndef ICEBREAKER_REPORT_HPP
#define ICEBREAKER_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "icebreaker/dependence_report.hpp"

namespace icebreaker {

/// Shortest decimal representation that round-trips the double.
std::string format_double(double v);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    std::string str() const;
};

Csv mds_report_csv(const std::vector<DependenceReport>& reports);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// FNV-1a 64-bit content hash, lowercase hex.
std::string fnv1a64_hex(const std::string& content);

/// Minimal deterministic SVG line plot. Data coordinates map into the given
/// viewport; several viewports can stack inside one figure.
class SvgFigure {
public:
    SvgFigure(double width, double height);

    struct Viewport {
        double x = 0, y = 0, w = 0, h = 0;       // pixel rect
        double x_min = 0, x_max = 1, y_min = 0, y_max = 1; // data range
    };

    void frame(const Viewport& vp);
    void polyline(const Viewport& vp, const std::vector<double>& xs,
                  const std::vector<double>& ys, const std::string& stroke,
                  double stroke_width = 1.0, const std::string& dash = "");
    void vline(const Viewport& vp, double x, const std::string& stroke,
               const std::string& dash = "4,3");
    void vbars(const Viewport& vp, const std::vector<double>& xs, const std::vector<double>& ys,
               const std::string& stroke);
    void label(double px, double py, const std::string& text, int font_size = 11);

    std::string render() const;

private:
    double width_, height_;
    std::string body_;
};

} // namespace icebreaker

#endif
