#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "illss/curve.hpp"
#include "illss/error.hpp"

namespace illss {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw IoError("malformed number '" + std::string(s) + "' in curve file");
    return v;
}

}  // namespace

void write_curve(std::ostream& os, const Curve& curve, double timestamp) {
    nlohmann::json header{
        {"N", curve.size()},
        {"orientation", curve.orientation == Orientation::CounterClockwise ? "ccw" : "cw"},
        {"timestamp", timestamp},
    };
    os << header.dump() << '\n' << "index,x,y\n";
    for (std::size_t i = 0; i < curve.size(); ++i)
        os << i << ',' << format_double(curve.points[i].x) << ',' << format_double(curve.points[i].y)
           << '\n';
}

void write_curve(const std::string& path, const Curve& curve, double timestamp) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_curve(os, curve, timestamp);
}

CurveFile read_curve(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw IoError("curve file is empty");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("curve header is not JSON: ") + e.what());
    }
    CurveFile out;
    const std::size_t n = header.at("N").get<std::size_t>();
    const std::string orient = header.value("orientation", "ccw");
    if (orient != "ccw" && orient != "cw") throw IoError("unknown orientation '" + orient + "'");
    out.curve.orientation = orient == "ccw" ? Orientation::CounterClockwise : Orientation::Clockwise;
    out.timestamp = header.value("timestamp", 0.0);

    if (!std::getline(is, line) || line != "index,x,y") throw IoError("missing 'index,x,y' row");
    out.curve.points.reserve(n);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw IoError("malformed curve row: " + line);
        std::string_view sv(line);
        const auto index = static_cast<std::size_t>(parse_double(sv.substr(0, c1)));
        if (index != out.curve.points.size()) throw IoError("curve rows out of order at " + line);
        out.curve.points.push_back(
            {parse_double(sv.substr(c1 + 1, c2 - c1 - 1)), parse_double(sv.substr(c2 + 1))});
    }
    if (out.curve.points.size() != n)
        throw IoError("header declares " + std::to_string(n) + " markers, file has " +
                      std::to_string(out.curve.points.size()));
    return out;
}

CurveFile read_curve(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    return read_curve(is);
}

}  // namespace illss
