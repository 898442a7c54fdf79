#pragma once

/// @file output.hpp
/// @brief Deterministic artifact emission: snapshot and series CSV files,
///        convergence tables, and SVG renderings of curve families.

#include <iosfwd>
#include <string>
#include <vector>

#include "csflow/geometry.hpp"
#include "csflow/manufactured.hpp"

namespace csflow {

/// Format a double with 17 significant digits, enough to reproduce the
/// value bit for bit when parsed back.
std::string format_full(double value);

/// Columns rho,x,y,w; one row per node plus a closing row repeating node 0
/// at rho = 1 so the polygon is explicit in the file.
void write_snapshot_csv(std::ostream& out, const PeriodicMesh& mesh, const NodalVectorField& x,
                        const NodalScalarField& w);

struct Snapshot {
    std::vector<double> rho;
    std::vector<Vec2> x;
    std::vector<double> w;
};

/// Parse a snapshot written by write_snapshot_csv, closing row included.
Snapshot read_snapshot_csv(std::istream& in);

/// Generic series: a header row and full-precision value rows.
void write_series_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

/// Columns J,dt,E1,eoc1,...,E4,eoc4 with unscaled monitor values; empty
/// EOC cells in the first row.
void write_convergence_csv(std::ostream& out, const std::vector<StudyRow>& rows);

/// Text table matching the established presentation of this benchmark:
/// the first and fourth monitors are displayed scaled by 10 and orders are
/// rounded to two decimals.
std::string render_convergence_table(const std::vector<StudyRow>& rows);

/// A polyline with a display label; closed curves repeat their first point
/// when drawn.
struct LabeledCurve {
    std::string label;
    std::vector<Vec2> points;
    bool closed = true;
};

/// Render the curves into a standalone SVG 1.1 document. The viewport is
/// fixed by the joint bounding box of all curves, margin included, with
/// equal scales on both axes.
void write_curves_svg(std::ostream& out, const std::vector<LabeledCurve>& curves);

}  // namespace csflow
