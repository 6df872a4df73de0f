#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace keller {

using Json = nlohmann::ordered_json;

/// Provenance stamped on every emitted artifact.
struct ArtifactHeader {
    std::string tool = "keller";
    std::string version;
    Json config = Json::object();
    std::uint64_t seed = 0;
};

ArtifactHeader make_header(Json config, std::uint64_t seed);

/// Round-trip representation ("%.17g"); "inf", "-inf", "nan" for non-finite values.
std::string format_double(double x);

/// RFC 4180 quoting: fields with comma, quote, CR or LF are quoted, quotes doubled.
std::string csv_field(const std::string& s);

/// '#'-prefixed header lines, then the column row, then data rows; CRLF line endings.
void write_csv(std::ostream& out, const ArtifactHeader& header, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

/// {"meta": {tool, version, seed, config}, ...body}.
Json json_document(const ArtifactHeader& header, const Json& body);

void write_json(std::ostream& out, const ArtifactHeader& header, const Json& body);

using Point2 = std::pair<double, double>;

/// Minimal SVG 1.1 writer in data coordinates (y up).
class SvgCanvas {
public:
    SvgCanvas(double x0, double x1, double y0, double y1, int width = 640, int height = 640);

    void polyline(const std::vector<Point2>& pts, const std::string& stroke, bool closed = false,
                  double stroke_width = 1.5);
    void polygon(const std::vector<Point2>& pts, const std::string& fill, double opacity,
                 const std::string& stroke = "none");
    void marker(double x, double y, double radius_px, const std::string& fill);
    void text(double x, double y, const std::string& label, int size = 12,
              const std::string& anchor = "start");
    void axes(const std::string& xlabel, const std::string& ylabel);

    std::string render(const std::optional<ArtifactHeader>& header = std::nullopt) const;

private:
    std::string px(double x, double y) const;
    double sx(double x) const;
    double sy(double y) const;

    double x0_, x1_, y0_, y1_;
    int width_, height_;
    std::vector<std::string> body_;
};

std::string xml_escape(const std::string& s);

} // namespace keller
