#include "vstates/io.hpp"

#include "vstates/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include "json.hpp"

namespace vstates {

namespace {

using nlohmann::json;

std::string child(const std::string& path, std::string_view key) { return path + "/" + std::string(key); }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

const json& field(const json& obj, const std::string& path, std::string_view key) {
    const auto it = obj.find(std::string(key));
    if (it == obj.end()) {
        throw SchemaError(child(path, key), "missing required field");
    }
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        throw SchemaError(path, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw SchemaError(path, "expected a finite number");
    }
    return x;
}

int integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) {
        throw SchemaError(path, "expected an integer");
    }
    return v.get<int>();
}

std::vector<double> number_array(const json& v, const std::string& path, int expected) {
    if (!v.is_array()) {
        throw SchemaError(path, "expected an array");
    }
    if (static_cast<int>(v.size()) != expected) {
        throw SchemaError(path, fmt::format("expected {} entries, found {}", expected, v.size()));
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], child(path, i)));
    return out;
}

std::string svg_num(double x) { return fmt::format("{:.6f}", x); }

} // namespace

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
    std::string out = "m,C_m,D_m,Delta_m,lambda_minus,lambda_plus,omega_minus,omega_plus,transversal\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.m, format_real(r.c_m), format_real(r.d_m),
                           format_real(r.delta_m), format_real(r.lambda_minus), format_real(r.lambda_plus),
                           format_real(r.omega_minus), format_real(r.omega_plus), r.transversal ? "true" : "false");
    }
    return out;
}

std::string spectrum_json(const std::vector<SpectrumRow>& rows) {
    auto arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"m", r.m},
                       {"b", r.b},
                       {"C_m", r.c_m},
                       {"D_m", r.d_m},
                       {"Delta_m", r.delta_m},
                       {"lambda_minus", r.lambda_minus},
                       {"lambda_plus", r.lambda_plus},
                       {"omega_minus", r.omega_minus},
                       {"omega_plus", r.omega_plus},
                       {"transversal", r.transversal}});
    }
    return arr.dump(2) + "\n";
}

std::string boundary_csv(const std::vector<BoundaryPoint>& samples) {
    std::string out = "theta,x1,y1,x2,y2\n";
    for (const auto& p : samples) {
        out += fmt::format("{},{},{},{},{}\n", format_real(p.theta), format_real(p.x1), format_real(p.y1),
                           format_real(p.x2), format_real(p.y2));
    }
    return out;
}

std::string branch_to_json(const BranchResult& branch) {
    json doc;
    doc["b"] = branch.b;
    doc["m"] = branch.m;
    doc["K"] = branch.K;
    doc["P"] = branch.P;
    doc["sign"] = std::string(to_string(branch.sign));
    auto points = json::array();
    for (const auto& pt : branch.points) {
        points.push_back({{"s", pt.s},
                          {"omega", pt.patch.omega},
                          {"a", pt.patch.a},
                          {"c", pt.patch.c},
                          {"residual_norm", pt.residual_norm}});
    }
    doc["points"] = std::move(points);
    if (branch.stopped_reason.empty()) {
        doc["stopped_reason"] = nullptr;
    } else {
        doc["stopped_reason"] = branch.stopped_reason;
    }
    return doc.dump(2) + "\n";
}

BranchResult branch_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("", fmt::format("not valid JSON ({})", e.what()));
    }
    const std::string root;
    if (!doc.is_object()) {
        throw SchemaError(root, "expected an object");
    }
    BranchResult out;
    out.b = number(field(doc, root, "b"), "/b");
    if (!(out.b > 0.0 && out.b < 1.0)) {
        throw SchemaError("/b", "must lie in (0, 1)");
    }
    out.m = integer(field(doc, root, "m"), "/m");
    if (out.m < 2) {
        throw SchemaError("/m", "must be at least 2");
    }
    out.K = integer(field(doc, root, "K"), "/K");
    if (out.K < 1) {
        throw SchemaError("/K", "must be at least 1");
    }
    out.P = integer(field(doc, root, "P"), "/P");
    const auto& sign = field(doc, root, "sign");
    if (!sign.is_string() || (sign != "plus" && sign != "minus")) {
        throw SchemaError("/sign", "expected \"plus\" or \"minus\"");
    }
    out.sign = branch_from_string(sign.get<std::string>());
    if (const auto it = doc.find("stopped_reason"); it != doc.end() && !it->is_null()) {
        if (!it->is_string()) {
            throw SchemaError("/stopped_reason", "expected a string or null");
        }
        out.stopped_reason = it->get<std::string>();
    }
    const auto& points = field(doc, root, "points");
    if (!points.is_array()) {
        throw SchemaError("/points", "expected an array");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::string path = child("/points", i);
        const auto& pt = points[i];
        if (!pt.is_object()) {
            throw SchemaError(path, "expected an object");
        }
        BranchPoint bp;
        bp.step_index = static_cast<int>(i);
        bp.s = number(field(pt, path, "s"), child(path, "s"));
        bp.residual_norm = number(field(pt, path, "residual_norm"), child(path, "residual_norm"));
        bp.patch.b = out.b;
        bp.patch.m = out.m;
        bp.patch.K = out.K;
        bp.patch.omega = number(field(pt, path, "omega"), child(path, "omega"));
        bp.patch.a = number_array(field(pt, path, "a"), child(path, "a"), out.K);
        bp.patch.c = number_array(field(pt, path, "c"), child(path, "c"), out.K);
        out.points.push_back(std::move(bp));
    }
    return out;
}

std::string render_svg(const BranchResult& branch, const std::vector<int>& selection) {
    for (int idx : selection) {
        if (idx < 0 || idx >= static_cast<int>(branch.points.size())) {
            throw PreconditionViolated(
                fmt::format("selected point {} does not exist (branch has {} points)", idx, branch.points.size()));
        }
    }
    std::vector<std::vector<BoundaryPoint>> curves;
    double extent = 1.0;
    for (int idx : selection) {
        curves.push_back(sample_boundaries(branch.points[idx].patch, 512));
        for (const auto& p : curves.back()) {
            extent = std::max({extent, std::abs(p.x1), std::abs(p.y1), std::abs(p.x2), std::abs(p.y2)});
        }
    }
    const double half = extent * 1.05;
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << svg_num(-half) << ' ' << svg_num(-half) << ' '
        << svg_num(2 * half) << ' ' << svg_num(2 * half) << "\" width=\"600\" height=\"600\">\n";
    const std::string stroke = svg_num(half / 300.0);
    svg << "  <g id=\"axes\" stroke=\"#999999\" stroke-width=\"" << stroke << "\">\n";
    svg << "    <line x1=\"" << svg_num(-half) << "\" y1=\"0\" x2=\"" << svg_num(half) << "\" y2=\"0\"/>\n";
    svg << "    <line x1=\"0\" y1=\"" << svg_num(-half) << "\" x2=\"0\" y2=\"" << svg_num(half) << "\"/>\n";
    svg << "  </g>\n";
    if (!selection.empty()) {
        const std::string dash = svg_num(half / 60.0);
        svg << "  <g id=\"reference\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"" << stroke
            << "\" stroke-dasharray=\"" << dash << ' ' << dash << "\">\n";
        svg << "    <circle cx=\"0\" cy=\"0\" r=\"1\"/>\n";
        svg << "    <circle cx=\"0\" cy=\"0\" r=\"" << svg_num(branch.b) << "\"/>\n";
        svg << "  </g>\n";
    }
    for (std::size_t k = 0; k < curves.size(); ++k) {
        svg << "  <g id=\"point" << selection[k] << "\" fill=\"none\" stroke-width=\"" << stroke << "\">\n";
        for (int which = 1; which <= 2; ++which) {
            svg << "    <polygon class=\"" << (which == 1 ? "outer" : "inner") << "\" stroke=\""
                << (which == 1 ? "#1f4e9c" : "#b2361f") << "\" points=\"";
            bool first = true;
            for (const auto& p : curves[k]) {
                const double x = which == 1 ? p.x1 : p.x2;
                const double y = which == 1 ? p.y1 : p.y2;
                if (!first) svg << ' ';
                svg << svg_num(x) << ',' << svg_num(-y);
                first = false;
            }
            svg << "\"/>\n";
        }
        svg << "  </g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::filesystem::path boundary_path(const std::filesystem::path& branch_file, int index) {
    auto out = branch_file;
    out.replace_filename(fmt::format("{}_point{:03}.csv", branch_file.stem().string(), index));
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw PreconditionViolated(fmt::format("cannot open '{}' for reading", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw PreconditionViolated(fmt::format("cannot open '{}' for writing", path.string()));
    }
    out << content;
    if (!out) {
        throw PreconditionViolated(fmt::format("failed writing '{}'", path.string()));
    }
}

} // namespace vstates
