#include "csflow/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace csflow {

namespace {

std::string format(const char* spec, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, value);
    return buf;
}

}  // namespace

std::string format_full(double value) { return format("%.17g", value); }

void write_snapshot_csv(std::ostream& out, const PeriodicMesh& mesh, const NodalVectorField& x,
                        const NodalScalarField& w) {
    const int J = mesh.size();
    if (x.size() != J || w.size() != J)
        throw std::invalid_argument("write_snapshot_csv: field size does not match mesh");
    out << "rho,x,y,w\n";
    for (int i = 0; i <= J; ++i) {
        int node = i == J ? 0 : i;
        double rho = i == J ? 1.0 : mesh.node(i);
        out << format_full(rho) << ',' << format_full(x[node].x) << ','
            << format_full(x[node].y) << ',' << format_full(w[node]) << '\n';
    }
}

Snapshot read_snapshot_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("rho,", 0) != 0)
        throw std::runtime_error("read_snapshot_csv: missing header");
    Snapshot snap;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double values[4];
        for (double& v : values) {
            if (!std::getline(row, cell, ','))
                throw std::runtime_error("read_snapshot_csv: short row");
            v = std::stod(cell);
        }
        snap.rho.push_back(values[0]);
        snap.x.push_back({values[1], values[2]});
        snap.w.push_back(values[3]);
    }
    return snap;
}

void write_series_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    for (std::size_t c = 0; c < header.size(); ++c)
        out << header[c] << (c + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_series_csv: row width does not match header");
        for (std::size_t c = 0; c < row.size(); ++c)
            out << format_full(row[c]) << (c + 1 < row.size() ? "," : "\n");
    }
}

void write_convergence_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
    out << "J,dt,E1,eoc1,E2,eoc2,E3,eoc3,E4,eoc4\n";
    for (const auto& row : rows) {
        out << row.mesh_size << ',' << format_full(row.dt);
        auto errors = row.errors.as_array();
        for (int k = 0; k < 4; ++k) {
            out << ',' << format_full(errors[static_cast<std::size_t>(k)]) << ',';
            double eoc = row.eoc[static_cast<std::size_t>(k)];
            if (!std::isnan(eoc)) out << format("%.2f", eoc);
        }
        out << '\n';
    }
}

std::string render_convergence_table(const std::vector<StudyRow>& rows) {
    std::string text = "   J  E1*10      eoc1  E2         eoc2  E3         eoc3  E4*10      eoc4\n";
    for (const auto& row : rows) {
        char head[16];
        std::snprintf(head, sizeof(head), "%4d", row.mesh_size);
        text += head;
        auto errors = row.errors.as_array();
        const double display_scale[4] = {10.0, 1.0, 1.0, 10.0};
        for (int k = 0; k < 4; ++k) {
            text += "  " + format("%.7f", errors[static_cast<std::size_t>(k)] *
                                               display_scale[static_cast<std::size_t>(k)]);
            double eoc = row.eoc[static_cast<std::size_t>(k)];
            text += std::isnan(eoc) ? "  -   " : "  " + format("%.2f", eoc);
        }
        text += '\n';
    }
    return text;
}

void write_curves_svg(std::ostream& out, const std::vector<LabeledCurve>& curves) {
    double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;
    bool any = false;
    for (const auto& curve : curves) {
        for (Vec2 p : curve.points) {
            if (!any) {
                min_x = max_x = p.x;
                min_y = max_y = p.y;
                any = true;
            } else {
                min_x = std::min(min_x, p.x);
                max_x = std::max(max_x, p.x);
                min_y = std::min(min_y, p.y);
                max_y = std::max(max_y, p.y);
            }
        }
    }
    double span = std::max(max_x - min_x, max_y - min_y);
    if (span <= 0.0) span = 1.0;
    double margin = 0.05 * span;
    // The vertical axis is mirrored so that y grows upward in the drawing.
    double box_x = min_x - margin;
    double box_y = -max_y - margin;
    double box_w = (max_x - min_x) + 2.0 * margin;
    double box_h = (max_y - min_y) + 2.0 * margin;

    const double width = 640.0;
    const double height = width * box_h / box_w;
    const double stroke = std::max(box_w, box_h) / 320.0;
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << format("%.6g", width) << "\" height=\"" << format("%.6g", height)
        << "\" viewBox=\"" << format("%.6g", box_x) << ' ' << format("%.6g", box_y) << ' '
        << format("%.6g", box_w) << ' ' << format("%.6g", box_h) << "\">\n";
    std::size_t color = 0;
    for (const auto& curve : curves) {
        out << "  <polyline fill=\"none\" stroke=\"" << kPalette[color % 8]
            << "\" stroke-width=\"" << format("%.6g", stroke) << "\" points=\"";
        ++color;
        auto emit = [&out](Vec2 p) {
            out << format("%.8g", p.x) << ',' << format("%.8g", -p.y) << ' ';
        };
        for (Vec2 p : curve.points) emit(p);
        if (curve.closed && !curve.points.empty()) emit(curve.points.front());
        out << "\"><title>" << curve.label << "</title></polyline>\n";
    }
    out << "</svg>\n";
}

}  // namespace csflow
