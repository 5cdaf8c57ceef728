#include "ruledgeo/mesh_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ruledgeo/errors.hpp"

namespace ruledgeo {

using nlohmann::json;

// --------------------------------------------------------------------------
// Tessellation
// --------------------------------------------------------------------------

Mesh tessellate(const RuledSurface& surface, int n_s, int n_v) {
  if (n_s < 2 || n_v < 2) throw std::invalid_argument("tessellate needs n_s >= 2 and n_v >= 2");
  const RuledSurfaceDef& def = surface.definition();
  const std::vector<double> ss = uniform_grid(def.curve.t_min, def.curve.t_max, n_s);
  const std::vector<double> vs = uniform_grid(def.v_min, def.v_max, n_v);

  Mesh mesh;
  mesh.n_s = n_s;
  mesh.n_v = n_v;
  mesh.vertices.reserve(static_cast<std::size_t>(n_s) * n_v);
  mesh.normals.reserve(mesh.vertices.capacity());
  std::vector<bool> valid;
  valid.reserve(mesh.vertices.capacity());
  for (double s : ss) {
    std::optional<FramePoint> base;
    try {
      base = surface.frames().at(s);
    } catch (const Error&) {
    }
    for (double v : vs) {
      Vec3 p = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
      std::optional<Vec3> n;
      bool ok = false;
      if (base) {
        try {
          p = surface.point_near(*base, s, v);
          ok = true;
          n = surface.normal_near(*base, s, v);
        } catch (const Error&) {
        }
      }
      mesh.vertices.push_back(p);
      mesh.normals.push_back(n);
      valid.push_back(ok);
      if (!n) mesh.flat_shaded = true;
    }
  }

  auto index = [n_v](int i, int j) { return i * n_v + j; };
  for (int i = 0; i + 1 < n_s; ++i) {
    for (int j = 0; j + 1 < n_v; ++j) {
      const int a = index(i, j), b = index(i + 1, j), c = index(i + 1, j + 1), d = index(i, j + 1);
      if (!valid[a] || !valid[b] || !valid[c] || !valid[d]) continue;
      const double diag_ac = (mesh.vertices[a] - mesh.vertices[c]).squaredNorm();
      const double diag_bd = (mesh.vertices[b] - mesh.vertices[d]).squaredNorm();
      if (diag_ac <= diag_bd) {
        mesh.faces.push_back({a, b, c});
        mesh.faces.push_back({a, c, d});
      } else {
        mesh.faces.push_back({a, b, d});
        mesh.faces.push_back({b, c, d});
      }
    }
  }
  return mesh;
}

Mesh tessellate(const RuledSurfaceDef& def, int n_s, int n_v) {
  return tessellate(RuledSurface(def, n_s), n_s, n_v);
}

// --------------------------------------------------------------------------
// OBJ
// --------------------------------------------------------------------------

namespace {

std::string fmt9(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string fmt17(double x) {
  if (x == 0.0) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string write_obj(const Mesh& mesh) {
  std::string out;
  out += "# ruledgeo ruled surface mesh\n";
  out += "# grid " + std::to_string(mesh.n_s) + " " + std::to_string(mesh.n_v) + "\n";
  for (const Vec3& p : mesh.vertices) out += "v " + fmt9(p.x()) + " " + fmt9(p.y()) + " " + fmt9(p.z()) + "\n";
  const bool with_normals = !mesh.flat_shaded;
  if (with_normals) {
    for (const auto& n : mesh.normals) out += "vn " + fmt9(n->x()) + " " + fmt9(n->y()) + " " + fmt9(n->z()) + "\n";
  }
  for (const auto& f : mesh.faces) {
    out += "f";
    for (int k : f) {
      const std::string idx = std::to_string(k + 1);
      out += with_normals ? " " + idx + "//" + idx : " " + idx;
    }
    out += "\n";
  }
  return out;
}

Mesh read_obj(std::string_view text) {
  Mesh mesh;
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Vec3> normals;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag.empty()) continue;
    if (tag == "#") {
      std::string word;
      if (ls >> word && word == "grid") ls >> mesh.n_s >> mesh.n_v;
      continue;
    }
    if (tag == "v" || tag == "vn") {
      std::string a, b, c;
      if (!(ls >> a >> b >> c)) throw std::runtime_error("malformed OBJ line: " + line);
      const Vec3 p(std::stod(a), std::stod(b), std::stod(c));
      (tag == "v" ? mesh.vertices : normals).push_back(p);
    } else if (tag == "f") {
      std::array<int, 3> face{};
      for (int& k : face) {
        std::string token;
        if (!(ls >> token)) throw std::runtime_error("malformed OBJ face: " + line);
        k = std::stoi(token.substr(0, token.find('/'))) - 1;
        if (k < 0) throw std::runtime_error("OBJ face index out of range: " + line);
      }
      mesh.faces.push_back(face);
    } else {
      throw std::runtime_error("unsupported OBJ record: " + tag);
    }
  }
  for (const auto& f : mesh.faces) {
    for (int k : f) {
      if (k >= static_cast<int>(mesh.vertices.size())) throw std::runtime_error("OBJ face index out of range");
    }
  }
  mesh.flat_shaded = normals.empty() && !mesh.vertices.empty();
  mesh.normals.resize(mesh.vertices.size());
  if (!normals.empty()) {
    if (normals.size() != mesh.vertices.size()) throw std::runtime_error("OBJ normal count differs from vertex count");
    for (std::size_t i = 0; i < normals.size(); ++i) mesh.normals[i] = normals[i];
  }
  return mesh;
}

// --------------------------------------------------------------------------
// Reports
// --------------------------------------------------------------------------

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw ConfigError("unknown report format '" + std::string(name) + "' (expected csv or json)");
}

namespace {

std::string csv_field(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const ClassificationReport& r) {
  json j;
  j["developable"] = {{"verdict", to_string(r.developable)},
                      {"max_abs_det", r.max_abs_det},
                      {"tol_dev", r.tol_dev},
                      {"samples", r.samples},
                      {"cylindrical_points", r.cylindrical_points}};
  j["special_case"] = to_string(r.special_case);
  j["theta_policy"] = r.rmf_policy ? "rmf" : "explicit";
  j["director_normalized"] = false;
  j["corollary_conditions"] = {
      {"corollary6",
       {{"max_abs_P", r.corollary6.max_abs_P},
        {"max_abs_phi", r.corollary6.max_abs_phi},
        {"max_abs_PU_minus_PV", r.corollary6.max_abs_PU_minus_PV}}},
      {"corollary7",
       {{"applies", r.corollary7.applies},
        {"max_residual", r.corollary7.max_residual},
        {"kappa_vanishes", r.corollary7.kappa_vanishes},
        {"x1x2_vanishes", r.corollary7.x1x2_vanishes},
        {"sin_theta_vanishes", r.corollary7.sin_theta_vanishes}}},
      {"corollary8",
       {{"applies", r.corollary8.applies},
        {"max_residual", r.corollary8.max_residual},
        {"kappa_vanishes", r.corollary8.kappa_vanishes},
        {"x1x3_vanishes", r.corollary8.x1x3_vanishes},
        {"cos_theta_vanishes", r.corollary8.cos_theta_vanishes}}},
      {"corollary9", {{"applies", r.corollary9.applies}, {"max_residual", r.corollary9.max_residual}}},
  };
  j["consistency"] = {{"max_closed_vs_numeric_det", opt(r.max_closed_vs_numeric_det)},
                      {"max_special_vs_general_P", opt(r.max_special_vs_general_P)}};
  j["gaussian_curvature"] = {{"max_abs_K", r.max_abs_K},
                             {"tol_K", r.tol_K},
                             {"samples", r.K_samples},
                             {"singular_samples", r.K_singular},
                             {"consistent_with_verdict", r.K_consistent}};
  return j;
}

json to_json(const TheoremSummary& s) {
  return {{"tol_inv", s.tol_inv},
          {"theta_policy", s.rmf_policy ? "rmf" : "explicit"},
          {"samples", s.samples},
          {"tangent_ruling_samples", s.tangent_ruling_samples},
          {"max_abs_residual_T1", s.max_abs_T1},
          {"max_abs_residual_T2", s.max_abs_T2},
          {"max_abs_residual_T3", s.max_abs_T3},
          {"max_abs_rho_standard", s.max_abs_rho},
          {"max_abs_k_g", s.max_abs_k_g},
          {"max_abs_k_n", s.max_abs_k_n},
          {"geodesic", s.geodesic},
          {"asymptotic", s.asymptotic},
          {"line_of_curvature_paper_form", s.line_of_curvature_paper},
          {"line_of_curvature_standard", s.line_of_curvature_standard},
          {"corollary5_X_parallel_T", s.corollary5}};
}

json to_json(const CrossCheck& c) {
  return {{"name", c.name},           {"max_error", c.max_error}, {"tolerance", c.tolerance},
          {"samples", c.samples},     {"skipped", c.skipped},     {"passed", c.passed()},
          {"note", c.note}};
}

}  // namespace

std::string write_report(const ClassificationReport* classification, const TheoremReport& theorems,
                         const std::vector<CrossCheck>* checks, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out =
        "s,kappa,tau,theta,x1,x2,x3,P,k_g,k_n,tau_g_paper,rho_standard,residual_T1,residual_T2,residual_T3\n";
    for (const auto& r : theorems.rows) {
      out += fmt17(r.s) + "," + fmt17(r.kappa) + "," + fmt17(r.tau) + "," + csv_field(r.theta) + "," +
             fmt17(r.x[0]) + "," + fmt17(r.x[1]) + "," + fmt17(r.x[2]) + "," + csv_field(r.P) + "," +
             csv_field(r.k_g) + "," + csv_field(r.k_n) + "," + csv_field(r.tau_g_paper) + "," +
             csv_field(r.rho_standard) + "," + fmt17(r.residual_T1) + "," + fmt17(r.residual_T2) + "," +
             fmt17(r.residual_T3) + "\n";
    }
    return out;
  }

  json j;
  j["schema_version"] = kReportSchemaVersion;
  if (classification) j["classification"] = to_json(*classification);
  j["base_curve"] = to_json(theorems.summary);
  if (checks) {
    json arr = json::array();
    for (const auto& c : *checks) arr.push_back(to_json(c));
    j["cross_checks"] = arr;
  }
  json rows = json::array();
  for (const auto& r : theorems.rows) {
    rows.push_back({{"s", r.s},
                    {"kappa", r.kappa},
                    {"tau", r.tau},
                    {"theta", opt(r.theta)},
                    {"x", vec(r.x)},
                    {"P", opt(r.P)},
                    {"k_g", opt(r.k_g)},
                    {"k_n", opt(r.k_n)},
                    {"tau_g_paper", opt(r.tau_g_paper)},
                    {"tau_g_standard", opt(r.tau_g_standard)},
                    {"rho_standard", opt(r.rho_standard)},
                    {"residual_T1", r.residual_T1},
                    {"residual_T2", r.residual_T2},
                    {"residual_T3", r.residual_T3}});
  }
  j["samples"] = rows;
  return j.dump(2) + "\n";
}

namespace {

const char* status_name(FrenetStatus s) {
  switch (s) {
    case FrenetStatus::Defined: return "frenet";
    case FrenetStatus::StraightLine: return "straight_line";
    case FrenetStatus::Gap: return "curvature_gap";
  }
  return "frenet";
}

}  // namespace

std::string write_frame_table(const FrameField& frames, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out =
        "s,px,py,pz,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,tau,speed,theta,Ux,Uy,Uz,Vx,Vy,Vz,status\n";
    auto v3 = [](const Vec3& v) { return fmt17(v.x()) + "," + fmt17(v.y()) + "," + fmt17(v.z()); };
    for (const FramePoint& p : frames.nodes()) {
      const bool gap = p.status == FrenetStatus::Gap;
      const std::optional<double> theta = gap ? std::nullopt : std::optional<double>(p.frame.theta);
      out += fmt17(p.t) + "," + v3(p.frenet.position) + "," + v3(p.frame.T) + "," +
             (gap ? std::string(",,") : v3(p.frenet.N)) + "," + (gap ? std::string(",,") : v3(p.frenet.B)) + "," +
             fmt17(p.frenet.kappa) + "," + fmt17(p.frenet.tau) + "," + fmt17(p.frenet.speed) + "," +
             csv_field(theta) + "," + v3(p.frame.U) + "," + v3(p.frame.V) + "," +
             csv_quote(status_name(p.status)) + "\n";
    }
    return out;
  }
  json rows = json::array();
  for (const FramePoint& p : frames.nodes()) {
    const bool gap = p.status == FrenetStatus::Gap;
    rows.push_back({{"s", p.t},
                    {"position", vec(p.frenet.position)},
                    {"T", vec(p.frame.T)},
                    {"N", gap ? json(nullptr) : vec(p.frenet.N)},
                    {"B", gap ? json(nullptr) : vec(p.frenet.B)},
                    {"kappa", p.frenet.kappa},
                    {"tau", p.frenet.tau},
                    {"speed", p.frenet.speed},
                    {"theta", gap ? json(nullptr) : json(p.frame.theta)},
                    {"U", vec(p.frame.U)},
                    {"V", vec(p.frame.V)},
                    {"status", status_name(p.status)}});
  }
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["theta_policy"] = frames.is_rmf() ? "rmf" : "explicit";
  j["samples"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace ruledgeo
