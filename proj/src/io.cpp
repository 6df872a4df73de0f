#include "keller/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "keller/common.hpp"

namespace keller {

ArtifactHeader make_header(Json config, std::uint64_t seed) {
    ArtifactHeader h;
    h.version = KELLER_VERSION;
    h.config = std::move(config);
    h.seed = seed;
    return h;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

namespace {

std::string header_line(const ArtifactHeader& h) {
    return h.tool + " " + h.version + " seed=" + std::to_string(h.seed);
}

void write_row(std::ostream& out, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << "\r\n";
}

} // namespace

void write_csv(std::ostream& out, const ArtifactHeader& header, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
    out << "# " << header_line(header) << "\r\n";
    out << "# config: " << header.config.dump() << "\r\n";
    write_row(out, columns);
    for (const auto& r : rows) {
        require(r.size() == columns.size(), "write_csv: row width differs from header");
        write_row(out, r);
    }
}

Json json_document(const ArtifactHeader& header, const Json& body) {
    Json doc;
    doc["meta"] = {{"tool", header.tool}, {"version", header.version}, {"seed", header.seed},
                   {"config", header.config}};
    for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
    return doc;
}

void write_json(std::ostream& out, const ArtifactHeader& header, const Json& body) {
    out << json_document(header, body).dump(2) << "\n";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

namespace {

constexpr double kMargin = 48.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

SvgCanvas::SvgCanvas(double x0, double x1, double y0, double y1, int width, int height)
    : x0_(x0), x1_(x1), y0_(y0), y1_(y1), width_(width), height_(height) {
    require(x1 > x0 && y1 > y0, "SvgCanvas: empty data window");
    require(width > 2 * kMargin && height > 2 * kMargin, "SvgCanvas: canvas too small");
}

double SvgCanvas::sx(double x) const { return kMargin + (x - x0_) / (x1_ - x0_) * (width_ - 2 * kMargin); }
double SvgCanvas::sy(double y) const { return height_ - kMargin - (y - y0_) / (y1_ - y0_) * (height_ - 2 * kMargin); }
std::string SvgCanvas::px(double x, double y) const { return fmt(sx(x)) + "," + fmt(sy(y)); }

void SvgCanvas::polyline(const std::vector<Point2>& pts, const std::string& stroke, bool closed,
                         double stroke_width) {
    if (pts.empty()) return;
    std::string s = std::string("<") + (closed ? "polygon" : "polyline") + " fill=\"none\" stroke=\"" +
                    stroke + "\" stroke-width=\"" + fmt(stroke_width) + "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + px(pts[i].first, pts[i].second);
    body_.push_back(s + "\"/>");
}

void SvgCanvas::polygon(const std::vector<Point2>& pts, const std::string& fill, double opacity,
                        const std::string& stroke) {
    if (pts.empty()) return;
    std::string s = "<polygon fill=\"" + fill + "\" fill-opacity=\"" + fmt(opacity) + "\" stroke=\"" +
                    stroke + "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + px(pts[i].first, pts[i].second);
    body_.push_back(s + "\"/>");
}

void SvgCanvas::marker(double x, double y, double radius_px, const std::string& fill) {
    body_.push_back("<circle cx=\"" + fmt(sx(x)) + "\" cy=\"" + fmt(sy(y)) + "\" r=\"" + fmt(radius_px) +
                    "\" fill=\"" + fill + "\"/>");
}

void SvgCanvas::text(double x, double y, const std::string& label, int size, const std::string& anchor) {
    body_.push_back("<text x=\"" + fmt(sx(x)) + "\" y=\"" + fmt(sy(y)) + "\" font-size=\"" +
                    std::to_string(size) + "\" text-anchor=\"" + anchor + "\" font-family=\"sans-serif\">" +
                    xml_escape(label) + "</text>");
}

void SvgCanvas::axes(const std::string& xlabel, const std::string& ylabel) {
    const double ax = (x0_ <= 0 && x1_ >= 0) ? 0.0 : x0_;
    const double ay = (y0_ <= 0 && y1_ >= 0) ? 0.0 : y0_;
    polyline({{x0_, ay}, {x1_, ay}}, "#444", false, 0.8);
    polyline({{ax, y0_}, {ax, y1_}}, "#444", false, 0.8);
    polyline({{x0_, y0_}, {x1_, y0_}, {x1_, y1_}, {x0_, y1_}}, "#999", true, 0.6);
    text(x0_, y0_ - 0.06 * (y1_ - y0_), format_double(x0_).substr(0, 8), 10, "middle");
    text(x1_, y0_ - 0.06 * (y1_ - y0_), format_double(x1_).substr(0, 8), 10, "middle");
    text(x0_ - 0.02 * (x1_ - x0_), y0_, format_double(y0_).substr(0, 8), 10, "end");
    text(x0_ - 0.02 * (x1_ - x0_), y1_, format_double(y1_).substr(0, 8), 10, "end");
    text(0.5 * (x0_ + x1_), y0_ - 0.09 * (y1_ - y0_), xlabel, 12, "middle");
    text(x0_, y1_ + 0.03 * (y1_ - y0_), ylabel, 12, "middle");
}

std::string SvgCanvas::render(const std::optional<ArtifactHeader>& header) const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (header) {
        // "--" is not allowed inside XML comments
        std::string cfg = header->config.dump();
        for (std::size_t p; (p = cfg.find("--")) != std::string::npos;) cfg.replace(p, 2, "- -");
        out << "<!-- " << header_line(*header) << "\n     config: " << cfg << " -->\n";
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width_ << "\" height=\""
        << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& e : body_) out << e << "\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace keller
