#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruledgeo/invariants.hpp"
#include "ruledgeo/ruled.hpp"

namespace ruledgeo {

struct Mesh {
  std::vector<Vec3> vertices;
  /// Parallel to `vertices`; absent at singular samples.
  std::vector<std::optional<Vec3>> normals;
  /// 0-based, counterclockwise with respect to the stored normals.
  std::vector<std::array<int, 3>> faces;
  bool flat_shaded = false;
  int n_s = 0;
  int n_v = 0;
};

/// Uniform (s, v) grid, row-major in s (vertex index i * n_v + j). Each
/// quad is split along its shorter diagonal.
Mesh tessellate(const RuledSurface& surface, int n_s, int n_v);
Mesh tessellate(const RuledSurfaceDef& def, int n_s, int n_v);

/// Wavefront OBJ (v / vn / f with `//`), 9 significant digits. Flat-shaded
/// meshes are written without normals.
std::string write_obj(const Mesh& mesh);

/// Reads the subset written by write_obj. Throws std::runtime_error on
/// malformed input.
Mesh read_obj(std::string_view text);

enum class ReportFormat { Csv, Json };

ReportFormat parse_report_format(std::string_view name);

/// Per-sample invariants table plus, for JSON, the classification, theorem
/// summary and cross-checks. CSV carries only the table.
std::string write_report(const ClassificationReport* classification, const TheoremReport& theorems,
                         const std::vector<CrossCheck>* checks, ReportFormat format);

/// Frenet apparatus and adapted frame per grid node.
std::string write_frame_table(const FrameField& frames, ReportFormat format);

inline constexpr int kReportSchemaVersion = 1;

}  // namespace ruledgeo
