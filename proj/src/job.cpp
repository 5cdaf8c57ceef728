#include "ruledgeo/job.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ruledgeo/errors.hpp"

namespace ruledgeo {

using nlohmann::json;

// --------------------------------------------------------------------------
// Config
// --------------------------------------------------------------------------

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

const json& member(const json& obj, const std::string& where, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return obj.at(key);
}

const json& object_member(const json& obj, const std::string& where, const char* key) {
  const json& v = member(obj, where, key);
  if (!v.is_object()) throw ConfigError(where + "." + key + ": expected an object");
  return v;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<int>();
}

bool boolean(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw ConfigError(where + ": expected true or false");
  return v.get<bool>();
}

std::string string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected a string");
  return v.get<std::string>();
}

Expr dsl(const json& obj, const std::string& where, const char* key) {
  const std::string field = where + "." + key;
  const std::string text = string(member(obj, where, key), field);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ParseError(e.offset(), e.expected(), field + ": " + e.what());
  }
}

std::pair<double, double> range(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(where + ": expected [min, max]");
  const double lo = number(v[0], where + "[0]"), hi = number(v[1], where + "[1]");
  if (!(lo < hi)) throw ConfigError(where + ": min must be less than max");
  return {lo, hi};
}

}  // namespace

JobConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(root, "config", {"curve", "theta", "director", "grid", "tolerances", "outputs", "expect", "name",
                                  "description"});

  JobConfig cfg;
  RuledSurfaceDef& def = cfg.surface;

  const json& curve = object_member(root, "config", "curve");
  reject_unknown(curve, "curve", {"x", "y", "z", "s_range"});
  def.curve.x = dsl(curve, "curve", "x");
  def.curve.y = dsl(curve, "curve", "y");
  def.curve.z = dsl(curve, "curve", "z");
  std::tie(def.curve.t_min, def.curve.t_max) = range(member(curve, "curve", "s_range"), "curve.s_range");

  const json& theta = object_member(root, "config", "theta");
  reject_unknown(theta, "theta", {"mode", "theta0", "expr"});
  const std::string mode = string(member(theta, "theta", "mode"), "theta.mode");
  if (mode == "rmf") {
    if (theta.contains("expr")) throw ConfigError("theta: mode 'rmf' does not take 'expr'");
    def.theta = RmfTheta{number(member(theta, "theta", "theta0"), "theta.theta0")};
  } else if (mode == "explicit") {
    if (theta.contains("theta0")) throw ConfigError("theta: mode 'explicit' does not take 'theta0'");
    def.theta = ExplicitTheta{dsl(theta, "theta", "expr")};
  } else {
    throw ConfigError("theta.mode: expected 'rmf' or 'explicit', got '" + mode + "'");
  }

  const json& director = object_member(root, "config", "director");
  reject_unknown(director, "director", {"x1", "x2", "x3"});
  def.director = DirectorField{dsl(director, "director", "x1"), dsl(director, "director", "x2"),
                               dsl(director, "director", "x3")};

  if (root.contains("grid")) {
    const json& grid = object_member(root, "config", "grid");
    reject_unknown(grid, "grid", {"n_s", "n_v", "v_range"});
    if (grid.contains("n_s")) cfg.n_s = integer(grid["n_s"], "grid.n_s");
    if (grid.contains("n_v")) cfg.n_v = integer(grid["n_v"], "grid.n_v");
    if (grid.contains("v_range")) std::tie(def.v_min, def.v_max) = range(grid["v_range"], "grid.v_range");
  }
  if (cfg.n_s < 2 || cfg.n_v < 2) throw ConfigError("grid: n_s and n_v must be at least 2");

  if (root.contains("tolerances")) {
    const json& tol = object_member(root, "config", "tolerances");
    reject_unknown(tol, "tolerances", {"tol_dev", "tol_inv", "tol_K"});
    if (tol.contains("tol_dev")) cfg.tolerances.tol_dev = number(tol["tol_dev"], "tolerances.tol_dev");
    if (tol.contains("tol_inv")) cfg.tolerances.tol_inv = number(tol["tol_inv"], "tolerances.tol_inv");
    if (tol.contains("tol_K")) cfg.tolerances.tol_K = number(tol["tol_K"], "tolerances.tol_K");
  }

  if (root.contains("outputs")) {
    const json& out = object_member(root, "config", "outputs");
    reject_unknown(out, "outputs", {"mesh", "report", "format"});
    if (out.contains("mesh")) cfg.mesh_path = string(out["mesh"], "outputs.mesh");
    if (out.contains("report")) cfg.report_path = string(out["report"], "outputs.report");
    if (out.contains("format")) cfg.format = parse_report_format(string(out["format"], "outputs.format"));
  }

  if (root.contains("expect")) {
    const json& ex = object_member(root, "config", "expect");
    reject_unknown(ex, "expect",
                   {"geodesic", "asymptotic", "line_of_curvature_paper", "line_of_curvature_standard", "developable"});
    auto flag = [&](const char* key, std::optional<bool>& slot) {
      if (ex.contains(key)) slot = boolean(ex[key], std::string("expect.") + key);
    };
    flag("geodesic", cfg.expect.geodesic);
    flag("asymptotic", cfg.expect.asymptotic);
    flag("line_of_curvature_paper", cfg.expect.line_of_curvature_paper);
    flag("line_of_curvature_standard", cfg.expect.line_of_curvature_standard);
    flag("developable", cfg.expect.developable);
  }
  return cfg;
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw ConfigError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot move output into place at '" + path + "'");
  }
}

void apply(JobConfig& config, const Overrides& o) {
  if (o.samples) {
    if (*o.samples < 2) throw ConfigError("--samples must be at least 2");
    config.n_s = *o.samples;
  }
  if (o.format) config.format = *o.format;
  if (o.tol_dev) config.tolerances.tol_dev = *o.tol_dev;
  if (o.out) {
    config.mesh_path = *o.out;
    config.report_path = *o.out;
  }
}

// --------------------------------------------------------------------------
// Commands
// --------------------------------------------------------------------------

namespace {

void emit(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
  if (path) {
    write_file_atomic(*path, text);
  } else {
    out << text;
  }
}

int report_error(std::ostream& err, const char* code, const std::string& message, int exit_code) {
  std::string line = message;
  for (char& c : line) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  err << "ERROR " << code << ": " << line << "\n";
  return exit_code;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    return report_error(err, "PARSE", e.what(), kExitConfig);
  } catch (const ConfigError& e) {
    return report_error(err, "CONFIG", e.what(), kExitConfig);
  } catch (const DomainError& e) {
    return report_error(err, "DOMAIN", e.what(), kExitGeometry);
  } catch (const GeometryError& e) {
    return report_error(err, "GEOMETRY", e.what(), kExitGeometry);
  } catch (const std::exception& e) {
    return report_error(err, "INTERNAL", e.what(), kExitGeometry);
  }
}

ClassifyOptions classify_options(const JobConfig& c) {
  ClassifyOptions o;
  o.n_v = c.n_v;
  o.tol_dev = c.tolerances.tol_dev;
  o.tol_K = c.tolerances.tol_K;
  return o;
}

struct ExpectationResult {
  std::string name;
  bool expected;
  bool actual;
};

std::vector<ExpectationResult> evaluate(const Expectations& ex, const TheoremSummary& t,
                                        const ClassificationReport& c) {
  std::vector<ExpectationResult> out;
  auto add = [&](const char* name, const std::optional<bool>& want, bool got) {
    if (want) out.push_back({name, *want, got});
  };
  add("geodesic", ex.geodesic, t.geodesic);
  add("asymptotic", ex.asymptotic, t.asymptotic);
  add("line_of_curvature_paper", ex.line_of_curvature_paper, t.line_of_curvature_paper);
  add("line_of_curvature_standard", ex.line_of_curvature_standard, t.line_of_curvature_standard);
  add("developable", ex.developable, c.developable == Verdict::Yes);
  return out;
}

}  // namespace

int cmd_frames(const JobConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RuledSurfaceDef& def = config.surface;
    const FrameField frames(def.curve, def.theta, uniform_grid(def.curve.t_min, def.curve.t_max, config.n_s));
    emit(config.report_path, write_frame_table(frames, config.format), out);
    return int(kExitOk);
  });
}

int cmd_surface(const JobConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!config.mesh_path) throw ConfigError("surface: no mesh output path (set outputs.mesh or pass --out)");
    const RuledSurface surface(config.surface, config.n_s);
    const Mesh mesh = tessellate(surface, config.n_s, config.n_v);
    write_file_atomic(*config.mesh_path, write_obj(mesh));
    (void)out;
    return int(kExitOk);
  });
}

int cmd_classify(const JobConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RuledSurface surface(config.surface, config.n_s);
    const ClassificationReport cls = classify(surface, classify_options(config));
    const TheoremReport theorems = theorem_report(surface, config.tolerances.tol_inv);
    emit(config.report_path, write_report(&cls, theorems, nullptr, config.format), out);
    return int(kExitOk);
  });
}

int cmd_verify(const JobConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RuledSurface surface(config.surface, config.n_s);
    const ClassificationReport cls = classify(surface, classify_options(config));
    const TheoremReport theorems = theorem_report(surface, config.tolerances.tol_inv);
    const std::vector<CrossCheck> checks = cross_checks(surface);
    const std::vector<ExpectationResult> expectations = evaluate(config.expect, theorems.summary, cls);

    bool passed = true;
    for (const auto& c : checks) passed = passed && c.passed();
    for (const auto& e : expectations) passed = passed && e.expected == e.actual;

    std::string text = write_report(&cls, theorems, &checks, config.format);
    if (config.format == ReportFormat::Json) {
      json j = json::parse(text);
      json ex = json::array();
      for (const auto& e : expectations) {
        ex.push_back({{"name", e.name}, {"expected", e.expected}, {"actual", e.actual}, {"passed", e.expected == e.actual}});
      }
      j["verification"] = {{"passed", passed}, {"expectations", ex}};
      text = j.dump(2) + "\n";
    }
    emit(config.report_path, text, out);

    for (const auto& c : checks) {
      if (!c.passed()) err << "FAIL check '" << c.name << "': max error " << c.max_error << " >= " << c.tolerance << "\n";
    }
    for (const auto& e : expectations) {
      if (e.expected != e.actual) {
        err << "FAIL expectation '" << e.name << "': expected " << (e.expected ? "yes" : "no") << ", got "
            << (e.actual ? "yes" : "no") << "\n";
      }
    }
    return int(passed ? kExitOk : kExitVerifyFailed);
  });
}

// --------------------------------------------------------------------------
// Front end
// --------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ruled surfaces over an adapted frame: frames, meshes, classification and theorem checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ruledgeo 0.1.0");

  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<int> samples;
  std::optional<std::string> format;
  std::optional<double> tol_dev;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON job configuration")->required();
    sub->add_option("--out", out_path, "Output path (overrides the config outputs)");
    sub->add_option("--samples", samples, "Number of s samples (overrides grid.n_s)");
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tol-dev", tol_dev, "Developability tolerance on |det(T, X, X')|");
  };
  CLI::App* frames = app.add_subcommand("frames", "Tabulate the Frenet apparatus and adapted frame");
  CLI::App* surface = app.add_subcommand("surface", "Tessellate the surface and write a Wavefront OBJ mesh");
  CLI::App* classify_cmd = app.add_subcommand("classify", "Developability and corollary report");
  CLI::App* verify = app.add_subcommand("verify", "Theorem report plus closed-form versus oracle checks");
  for (CLI::App* sub : {frames, surface, classify_cmd, verify}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    return report_error(err, "USAGE", e.what(), kExitConfig);
  }

  JobConfig config;
  const int load = guarded(err, [&] {
    config = load_config(config_path);
    Overrides o;
    o.out = out_path;
    o.samples = samples;
    if (format) o.format = parse_report_format(*format);
    o.tol_dev = tol_dev;
    apply(config, o);
    return int(kExitOk);
  });
  if (load != kExitOk) return load;

  if (frames->parsed()) return cmd_frames(config, out, err);
  if (surface->parsed()) return cmd_surface(config, out, err);
  if (classify_cmd->parsed()) return cmd_classify(config, out, err);
  return cmd_verify(config, out, err);
}

}  // namespace ruledgeo
