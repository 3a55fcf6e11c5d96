#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "thetacurve/io.hpp"
#include "thetacurve/lift.hpp"
#include "thetacurve/surfaces.hpp"

namespace thetacurve::cli {

namespace {

using nlohmann::ordered_json;

class HelpRequested : public UsageError {
 public:
  using UsageError::UsageError;
};

struct Artifact {
  std::string path;
  std::string content;
};

// ---------------------------------------------------------------------------------------------
// parsing helpers

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(std::string_view text, const std::string& flag) {
  const std::string t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw UsageError(flag + ": not a number: '" + t + "'");
  }
  return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number(item, flag));
  return out;
}

Vec2 parse_point(const std::string& text, const std::string& flag) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError(flag + ": expected x,y, got '" + text + "'");
  return {parse_number(parts[0], flag), parse_number(parts[1], flag)};
}

Family parse_family_flag(const std::string& text) {
  try {
    return parse_family(text);
  } catch (const InvalidInput& e) {
    throw UsageError(std::string("--family: ") + e.what());
  }
}

template <class F>
void check_bounds(const std::string& flag, F&& fn) {
  try {
    fn();
  } catch (const InvariantViolation& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return ss.str();
}

// Flat key=value file turned into flag tokens; `true` becomes a bare flag, `false` is dropped.
std::vector<std::string> config_tokens(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value, got '" + t + "'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(line_no) + ": empty key");
    if (key == "config") throw UsageError(path + ":" + std::to_string(line_no) + ": nested config files are not supported");
    if (value == "true") {
      tokens.push_back("--" + key);
    } else if (value != "false") {
      tokens.push_back("--" + key);
      tokens.push_back(value);
    }
  }
  return tokens;
}

// Moves `--config <path>` out of args and splices its tokens in right after the subcommand.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config: missing path");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config_path) return rest;
  const auto tokens = config_tokens(*config_path);
  auto sub = std::find_if(rest.begin(), rest.end(), [](const std::string& s) { return !s.empty() && s[0] != '-'; });
  if (sub == rest.end()) throw UsageError("a subcommand is required");
  rest.insert(std::next(sub), tokens.begin(), tokens.end());
  return rest;
}

void apply_problem_json(const std::string& path, CompletionProblem& pr, bool& have_p, bool& have_q, bool& have_t0,
                        bool& have_t1) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_text_file(path));
  } catch (const ordered_json::exception& e) {
    throw UsageError("--problem: " + path + ": " + e.what());
  }
  auto point = [&](const char* key) {
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2) throw UsageError(std::string("--problem: '") + key + "' must be [x, y]");
    return Vec2{v[0].get<double>(), v[1].get<double>()};
  };
  try {
    if (j.contains("p")) pr.p = point("p"), have_p = true;
    if (j.contains("q")) pr.q = point("q"), have_q = true;
    if (j.contains("theta0")) pr.theta0 = j["theta0"].get<double>(), have_t0 = true;
    if (j.contains("theta1")) pr.theta1 = j["theta1"].get<double>(), have_t1 = true;
    if (j.contains("a")) pr.a = j["a"].get<double>();
    if (j.contains("nodes")) pr.nodes = j["nodes"].get<std::size_t>();
    if (j.contains("max_iters")) pr.max_iters = j["max_iters"].get<std::size_t>();
    if (j.contains("step0")) pr.step0 = j["step0"].get<double>();
    if (j.contains("tol")) pr.tol = j["tol"].get<double>();
  } catch (const ordered_json::exception& e) {
    throw UsageError("--problem: " + path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------------------------
// output helpers

std::string fmt(double v, int digits = 6) { return format_double(v, digits); }

ordered_json number_or_null(std::optional<double> v) {
  if (v && std::isfinite(*v)) return *v;
  return nullptr;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string fixed2(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  if (ec != std::errc()) return "0.00";
  std::string s(buf, end);
  return s == "-0.00" ? "0.00" : s;
}

std::string curve_svg(const PlanarCurve& c) {
  double xmin = c.points()[0].x, xmax = xmin, ymin = c.points()[0].y, ymax = ymin;
  for (const Vec2& p : c.points()) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double extent = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double scale = 1000.0 / extent;
  const double pad = 20.0;
  const double width = (xmax - xmin) * scale + 2 * pad;
  const double height = (ymax - ymin) * scale + 2 * pad;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fixed2(width) << ' ' << fixed2(height)
    << "\">\n<path fill=\"none\" stroke=\"black\" stroke-width=\"2\" d=\"";
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec2 p = c.points()[i];
    s << (i == 0 ? "M" : " L") << fixed2(pad + (p.x - xmin) * scale) << ' ' << fixed2(pad + (ymax - p.y) * scale);
  }
  s << "\"/>\n</svg>\n";
  return s.str();
}

std::string curve_csv(const PlanarCurve& c) {
  std::ostringstream s;
  write_curve_csv(s, c);
  return s.str();
}

void write_artifacts(const std::vector<Artifact>& artifacts, bool force) {
  if (!force) {
    for (const auto& a : artifacts) {
      if (std::filesystem::exists(a.path)) throw UsageError("refusing to overwrite '" + a.path + "' (pass --force)");
    }
  }
  for (const auto& a : artifacts) {
    const auto parent = std::filesystem::path(a.path).parent_path();
    if (!parent.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(parent, ec);
      if (ec) throw IoError("cannot create directory '" + parent.string() + "': " + ec.message());
    }
    std::ofstream out(a.path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + a.path + "' for writing: " + std::strerror(errno));
    out << a.content;
    out.flush();
    if (!out) throw IoError("failed writing '" + a.path + "'");
  }
}

PlanarCurve load_curve(const std::string& path) {
  std::istringstream in(read_text_file(path));
  try {
    return read_curve_csv(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

CurvatureSamples samples_of(const PlanarCurve& c) {
  return {c.s0(), c.step(), {c.kappa().begin(), c.kappa().end()}};
}

// ---------------------------------------------------------------------------------------------
// subcommands

struct ExtremalOutput {
  CurvatureProfile profile;
  PlanarCurve curve;
  ordered_json meta;
};

ExtremalOutput synthesize(const ExtremalSpec& spec, std::size_t samples, std::optional<double> margin) {
  CurvatureProfile p = curvature_profile(spec, samples, margin.value_or(default_margin(spec)));
  PlanarCurve c = curve_from_quadrature(p);
  ordered_json meta;
  meta["a"] = spec.a;
  meta["d"] = spec.d;
  meta["family"] = std::string(to_string(spec.family));
  meta["surface_type"] = std::string(to_string(classify(spec)));
  meta["delta"] = p.delta;
  meta["domain"] = {{"lower", number_or_null(p.domain.lower)}, {"upper", p.domain.upper}};
  meta["margin"] = p.margin;
  meta["samples"] = samples;
  meta["s0"] = p.samples.s0;
  meta["h"] = p.samples.h;
  meta["residuals"] = {{"first_integral", first_integral_residual(p)},
                       {"el", el_residual(p)},
                       {"killing", killing_norm_residual(p)},
                       {"unit_speed", unit_speed_residual(c)}};
  return {std::move(p), std::move(c), std::move(meta)};
}

std::vector<Artifact> extremal_artifacts(const ExtremalOutput& x, const std::string& prefix, bool svg) {
  std::ostringstream profile;
  write_profile_csv(profile, x.profile.samples);
  std::vector<Artifact> out{{prefix + ".curve.csv", curve_csv(x.curve)},
                            {prefix + ".profile.csv", profile.str()},
                            {prefix + ".meta.json", dump(x.meta)}};
  if (svg) out.push_back({prefix + ".curve.svg", curve_svg(x.curve)});
  return out;
}

int run_extremal(const CliConfig& cfg, const ExtremalArgs& args) {
  const auto x = synthesize(args.spec, args.samples, args.margin);
  write_artifacts(extremal_artifacts(x, cfg.out_prefix, cfg.svg), cfg.force);
  return 0;
}

int run_complete(const CliConfig& cfg, const CompleteArgs& args, std::ostream& err) {
  const auto& pr = args.problem;
  const CompletionResult r = complete(pr);
  ordered_json report;
  report["a"] = pr.a;
  report["problem"] = {{"p", {pr.p.x, pr.p.y}}, {"q", {pr.q.x, pr.q.y}}, {"theta0", pr.theta0},
                       {"theta1", pr.theta1},   {"a", pr.a},             {"nodes", pr.nodes},
                       {"max_iters", pr.max_iters}, {"step0", pr.step0}, {"tol", pr.tol}};
  report["converged"] = r.report.converged;
  report["iterations"] = r.report.iterations;
  report["final_energy"] = r.report.final_energy;
  report["gradient_norm"] = r.report.gradient_norm;
  report["fitted_delta"] = number_or_null(r.report.fitted_delta);
  report["first_integral_residual"] = number_or_null(r.report.first_integral_residual);
  report["el_residual"] = number_or_null(r.report.el_residual);
  report["length"] = r.curve.length();
  report["total_turning"] = total_turning(r.curve.polyline());
  report["energy_history"] = r.report.energy_history;

  std::vector<Artifact> files{{cfg.out_prefix + ".curve.csv", curve_csv(r.curve)},
                              {cfg.out_prefix + ".report.json", dump(report)}};
  if (cfg.svg) files.push_back({cfg.out_prefix + ".curve.svg", curve_svg(r.curve)});
  write_artifacts(files, cfg.force);
  if (!r.report.converged) {
    err << "complete: did not reach tol " << fmt(pr.tol) << " (gradient norm " << fmt(r.report.gradient_norm)
        << " after " << r.report.iterations << " iterations); best iterate written\n";
    return 2;
  }
  return 0;
}

int run_lift(const CliConfig& cfg, const LiftArgs& args) {
  const PlanarCurve c = load_curve(args.curve_path);
  const LiftedCurve l = lift(c);
  const LiftWinding w = winding_of(l);
  std::ostringstream csv;
  write_lifted_csv(csv, l);
  ordered_json meta;
  meta["first_turn"] = w.first_turn;
  meta["winding"] = w.winding;
  meta["samples"] = l.size();
  meta["a"] = args.a;
  meta["sr_length"] = sr_length(l, args.a);
  meta["horizontality_residual"] = horizontality_residual(l);
  write_artifacts({{cfg.out_prefix + ".lifted.csv", csv.str()}, {cfg.out_prefix + ".meta.json", dump(meta)}},
                  cfg.force);
  return 0;
}

int run_surface(const CliConfig& cfg, const SurfaceArgs& args) {
  const double sweep = args.sweep_degrees >= 360.0 ? 2.0 * std::numbers::pi : args.sweep_degrees * std::numbers::pi / 180.0;
  const ExtremalSpec& spec = args.spec;
  const RevolutionSurface s = evolve(spec, args.samples, args.angles, args.margin.value_or(default_margin(spec)), sweep);
  const auto K = gaussian_curvature(s);
  const double target = -spec.a * spec.a;
  const auto speed = binormal_speed(curvature_profile(spec, args.samples, args.margin.value_or(default_margin(spec))));
  double flow = 0.0;
  for (std::size_t i = 0; i < speed.size(); ++i) {
    flow = std::max(flow, std::abs(s.angular_rate * std::abs(s.profile.points()[i].x) - speed[i]));
  }
  ordered_json meta;
  meta["a"] = spec.a;
  meta["d"] = spec.d;
  meta["family"] = std::string(to_string(spec.family));
  meta["surface_type"] = std::string(to_string(classify(spec)));
  meta["delta"] = s.delta;
  meta["angular_rate"] = s.angular_rate;
  meta["K_target"] = target;
  meta["K_measured_max_err"] = relative_curvature_error(K, target);
  meta["flow_speed_residual"] = flow;
  meta["profile_samples"] = s.profile_size();
  meta["angles"] = s.angle_count();
  meta["closed"] = s.closed;
  meta["vertices"] = s.vertex_count();
  meta["faces"] = s.face_count();
  std::ostringstream obj;
  export_obj(obj, s);
  write_artifacts({{cfg.out_prefix + ".mesh.obj", obj.str()}, {cfg.out_prefix + ".meta.json", dump(meta)}}, cfg.force);
  return 0;
}

int run_verify(const CliConfig& cfg, const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  const PlanarCurve c = load_curve(args.curve_path);
  std::optional<double> a = args.a;
  std::optional<double> delta = args.delta;
  std::string delta_source = delta ? "flag" : "none";
  if (args.meta_path) {
    ordered_json meta;
    try {
      meta = ordered_json::parse(read_text_file(*args.meta_path));
      if (!a && meta.contains("a")) a = meta["a"].get<double>();
      if (!delta && !args.fit_delta) {
        for (const char* key : {"delta", "fitted_delta"}) {
          if (meta.contains(key) && meta[key].is_number()) {
            delta = meta[key].get<double>();
            delta_source = std::string("meta:") + key;
            break;
          }
        }
      }
    } catch (const ordered_json::exception& e) {
      throw InvalidInput(*args.meta_path + ": " + e.what());
    }
  }
  if (!a) throw UsageError("--a is required (not found in --meta)");
  if (!(*a > 0.0)) throw UsageError("--a: a > 0 violated");

  const CurvatureSamples k = samples_of(c);
  if (args.fit_delta) {
    delta = fit_first_integral(k, *a).delta;
    delta_source = "fit";
  }
  const double relaxed = 1e-2;
  const bool fitted = args.fit_delta;
  std::map<std::string, double> thresholds{{"first_integral", fitted ? relaxed : 1e-4},
                                           {"el", fitted ? relaxed : 1e-3},
                                           {"killing", fitted ? relaxed : 1e-4},
                                           {"unit_speed", fitted ? relaxed : 1e-4},
                                           {"gaussian_curvature", 1e-3}};
  std::map<std::string, std::optional<double>> residuals;
  residuals["first_integral"] = delta ? std::optional(first_integral_residual(k, *a, *delta)) : std::nullopt;
  residuals["el"] = el_residual(k, *a);
  residuals["killing"] = delta ? std::optional(killing_norm_residual(k, *a, *delta)) : std::nullopt;
  residuals["unit_speed"] = unit_speed_residual(c);
  if (args.profile) {
    residuals["gaussian_curvature"] = relative_curvature_error(gaussian_curvature(revolve(c, 8)), -(*a) * (*a));
  }

  bool pass = true;
  ordered_json res, thr;
  for (const char* key : {"first_integral", "el", "killing", "unit_speed", "gaussian_curvature"}) {
    const auto it = residuals.find(key);
    if (it == residuals.end()) continue;
    res[key] = number_or_null(it->second);
    thr[key] = thresholds[key];
    if (it->second && !(*it->second < thresholds[key])) pass = false;
  }
  ordered_json report;
  report["curve"] = std::filesystem::path(args.curve_path).filename().string();
  report["samples"] = c.size();
  report["a"] = *a;
  report["delta"] = number_or_null(delta);
  report["delta_source"] = delta_source;
  report["residuals"] = res;
  report["thresholds"] = thr;
  report["pass"] = pass;
  const std::string text = dump(report);
  if (!cfg.out_prefix.empty()) write_artifacts({{cfg.out_prefix + ".verify.json", text}}, cfg.force);
  out << text;
  if (!pass) {
    err << "verify: one or more residuals exceed their thresholds\n";
    return 2;
  }
  return 0;
}

std::string cell_name(const std::string& prefix, Family f, double a, double ratio) {
  return prefix + "." + std::string(to_string(f)) + "_a" + fmt(a) + "_r" + fmt(ratio);
}

int run_sweep(const CliConfig& cfg, const SweepArgs& args) {
  struct Cell {
    ExtremalSpec spec;
    double ratio = 0.0;
    std::optional<ExtremalOutput> output;
    double curvature_error = 0.0;
    std::exception_ptr error;
  };
  std::vector<Cell> cells;
  for (Family f : args.families) {
    for (double a : args.a_values) {
      for (double r : args.d_ratios) cells.push_back({{a, r * a * a, f}, r, std::nullopt, 0.0, nullptr});
    }
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      Cell& cell = cells[i];
      try {
        cell.output = synthesize(cell.spec, args.samples, std::nullopt);
        const auto K = gaussian_curvature(revolve(cell.output->curve, 8));
        cell.curvature_error = relative_curvature_error(K, -cell.spec.a * cell.spec.a);
      } catch (...) {
        cell.error = std::current_exception();
      }
    }
  };
  std::size_t threads = args.threads ? args.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cells.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<Artifact> files;
  std::ostringstream summary;
  summary << "family,a,d,delta,surface_type,first_integral,el,killing,unit_speed,K_rel_err\n";
  for (const Cell& cell : cells) {
    if (cell.error) std::rethrow_exception(cell.error);
    const auto& x = *cell.output;
    const auto name = cell_name(cfg.out_prefix, cell.spec.family, cell.spec.a, cell.ratio);
    for (auto& f : extremal_artifacts(x, name, cfg.svg)) files.push_back(std::move(f));
    const auto& r = x.meta["residuals"];
    summary << to_string(cell.spec.family) << ',' << format_double(cell.spec.a) << ',' << format_double(cell.spec.d)
            << ',' << format_double(x.profile.delta) << ',' << to_string(classify(cell.spec)) << ','
            << format_double(r["first_integral"].get<double>()) << ',' << format_double(r["el"].get<double>()) << ','
            << format_double(r["killing"].get<double>()) << ',' << format_double(r["unit_speed"].get<double>()) << ','
            << format_double(cell.curvature_error) << '\n';
  }
  files.push_back({cfg.out_prefix + ".summary.csv", summary.str()});
  write_artifacts(files, cfg.force);
  return 0;
}

}  // namespace

CliConfig parse_args(const std::vector<std::string>& raw) {
  std::vector<std::string> args = expand_config(raw);

  CLI::App app{"Critical curves of the total-curvature-type energy and their surfaces", "thetacurve"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1, 1);

  std::string out_prefix;
  bool force = false, svg = false;
  auto common = [&](CLI::App* sub, bool prefix_required) {
    auto* o = sub->add_option("--out-prefix", out_prefix, "Path prefix for output files");
    if (prefix_required) o->required();
    sub->add_flag("--force", force, "Overwrite existing output files");
  };

  // extremal and surface share the spec flags
  double a = 1.0, d = 2.0;
  std::string family = "sinh";
  std::size_t samples = 0;
  double margin = 0.0;

  auto* ext = app.add_subcommand("extremal", "Sample a closed-form critical curve");
  ext->add_option("--a", a, "Energy parameter a > 0")->required();
  ext->add_option("--d", d, "Family constant d > a^2")->required();
  ext->add_option("--family", family, "sinh, cosh or exp")->required();
  auto* ext_samples = ext->add_option("--samples", samples, "Number of samples (>= 16)");
  auto* ext_margin = ext->add_option("--margin", margin, "Distance kept from the domain ends");
  ext->add_flag("--svg", svg, "Also write an SVG plot of the curve");
  common(ext, true);

  CompletionProblem problem;
  std::string problem_path, p_text, q_text;
  auto* cmp = app.add_subcommand("complete", "Solve the boundary-value completion problem");
  auto* cmp_problem = cmp->add_option("--problem", problem_path, "JSON problem file; flags override its fields");
  auto* cmp_p = cmp->add_option("--p", p_text, "Start point x,y");
  auto* cmp_q = cmp->add_option("--q", q_text, "End point x,y");
  auto* cmp_t0 = cmp->add_option("--theta0", problem.theta0, "Start tangent angle (radians)");
  auto* cmp_t1 = cmp->add_option("--theta1", problem.theta1, "End tangent angle (radians)");
  auto* cmp_a = cmp->add_option("--a", problem.a, "Energy parameter a > 0");
  auto* cmp_nodes = cmp->add_option("--nodes", problem.nodes, "Polyline vertex count (>= 8)");
  auto* cmp_iters = cmp->add_option("--max-iters", problem.max_iters, "Iteration limit");
  auto* cmp_step = cmp->add_option("--step0", problem.step0, "Initial line-search step");
  auto* cmp_tol = cmp->add_option("--tol", problem.tol, "Stationarity tolerance");
  cmp->add_flag("--svg", svg, "Also write an SVG plot of the curve");
  common(cmp, true);

  LiftArgs lift_args;
  auto* lft = app.add_subcommand("lift", "Lift a curve CSV to R^2 x S^1");
  lft->add_option("--curve", lift_args.curve_path, "Curve CSV (s,x,y,theta,kappa)")->required();
  lft->add_option("--a", lift_args.a, "Planar weight of the length structure");
  common(lft, true);

  SurfaceArgs surface_args;
  auto* srf = app.add_subcommand("surface", "Mesh the rotational surface swept by a critical curve");
  srf->add_option("--a", a, "Energy parameter a > 0")->required();
  srf->add_option("--d", d, "Family constant d > a^2")->required();
  srf->add_option("--family", family, "sinh, cosh or exp")->required();
  auto* srf_samples = srf->add_option("--samples", samples, "Profile samples (>= 32)");
  srf->add_option("--angles", surface_args.angles, "Rotation angles (>= 8)");
  auto* srf_margin = srf->add_option("--margin", margin, "Distance kept from the domain ends");
  srf->add_option("--sweep-deg", surface_args.sweep_degrees, "Swept angle in degrees; below 360 leaves an open sector");
  common(srf, true);

  VerifyArgs verify_args;
  double verify_a = 0.0, verify_delta = 0.0;
  std::string meta_path;
  auto* ver = app.add_subcommand("verify", "Report residuals of a curve CSV as JSON");
  ver->add_option("--curve", verify_args.curve_path, "Curve CSV (s,x,y,theta,kappa)")->required();
  auto* ver_a = ver->add_option("--a", verify_a, "Energy parameter a > 0");
  auto* ver_delta = ver->add_option("--delta", verify_delta, "First-integral constant");
  auto* ver_meta = ver->add_option("--meta", meta_path, "meta.json or report.json providing a and delta");
  ver->add_flag("--fit-delta", verify_args.fit_delta, "Fit delta from the curve; thresholds relax to 1e-2");
  ver->add_flag("--profile", verify_args.profile, "Treat the curve as a surface profile (r, z) and check K = -a^2");
  common(ver, false);

  SweepArgs sweep_args;
  std::string sweep_a, sweep_ratio, sweep_family;
  auto* swp = app.add_subcommand("sweep", "Synthesize a grid of (family, a, d) cells");
  auto* swp_a = swp->add_option("--a", sweep_a, "Comma-separated a values");
  auto* swp_ratio = swp->add_option("--d-ratio", sweep_ratio, "Comma-separated d / a^2 values");
  auto* swp_family = swp->add_option("--family", sweep_family, "Comma-separated families or 'all'");
  auto* swp_samples = swp->add_option("--samples", samples, "Samples per cell (>= 16)");
  swp->add_option("--threads", sweep_args.threads, "Worker threads (0 = hardware threads)");
  swp->add_flag("--svg", svg, "Also write an SVG plot per cell");
  common(swp, true);

  std::vector<char*> argv{const_cast<char*>("thetacurve")};
  for (auto& s : args) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::ostringstream o, er;
      app.exit(e, o, er);
      throw HelpRequested(o.str());
    }
    throw UsageError(e.what());
  }

  CliConfig cfg;
  cfg.force = force;
  cfg.svg = svg;
  cfg.out_prefix = out_prefix;
  auto spec_from_flags = [&] {
    ExtremalSpec spec{a, d, parse_family_flag(family)};
    if (!std::isfinite(a) || !(a > 0.0)) throw UsageError("--a: a > 0 violated");
    check_bounds("--d", [&] { validate(spec); });
    return spec;
  };
  auto check_margin = [&](const ExtremalSpec& spec) {
    const double width = sampling_width(spec);
    if (!(margin > 0.0) || !(margin < 0.5 * width)) {
      throw UsageError("--margin: must lie in (0, " + fmt(0.5 * width) + ")");
    }
  };

  if (ext->parsed()) {
    cfg.subcommand = "extremal";
    ExtremalArgs x;
    x.spec = spec_from_flags();
    if (ext_samples->count()) x.samples = samples;
    if (x.samples < 16) throw UsageError("--samples: must be >= 16");
    if (ext_margin->count()) {
      check_margin(x.spec);
      x.margin = margin;
    }
    cfg.params = x;
  } else if (cmp->parsed()) {
    cfg.subcommand = "complete";
    bool have_p = false, have_q = false, have_t0 = false, have_t1 = false;
    CompletionProblem merged;
    if (cmp_problem->count()) apply_problem_json(problem_path, merged, have_p, have_q, have_t0, have_t1);
    if (cmp_p->count()) merged.p = parse_point(p_text, "--p"), have_p = true;
    if (cmp_q->count()) merged.q = parse_point(q_text, "--q"), have_q = true;
    if (cmp_t0->count()) merged.theta0 = problem.theta0, have_t0 = true;
    if (cmp_t1->count()) merged.theta1 = problem.theta1, have_t1 = true;
    if (cmp_a->count()) merged.a = problem.a;
    if (cmp_nodes->count()) merged.nodes = problem.nodes;
    if (cmp_iters->count()) merged.max_iters = problem.max_iters;
    if (cmp_step->count()) merged.step0 = problem.step0;
    if (cmp_tol->count()) merged.tol = problem.tol;
    if (!have_p) throw UsageError("--p is required");
    if (!have_q) throw UsageError("--q is required");
    if (!have_t0) throw UsageError("--theta0 is required");
    if (!have_t1) throw UsageError("--theta1 is required");
    try {
      validate(merged);
    } catch (const InvariantViolation& e) {
      throw UsageError(std::string("complete: ") + e.what());
    }
    cfg.params = CompleteArgs{merged};
  } else if (lft->parsed()) {
    cfg.subcommand = "lift";
    if (!std::isfinite(lift_args.a) || !(lift_args.a > 0.0)) throw UsageError("--a: a > 0 violated");
    cfg.params = lift_args;
  } else if (srf->parsed()) {
    cfg.subcommand = "surface";
    surface_args.spec = spec_from_flags();
    if (srf_samples->count()) surface_args.samples = samples;
    if (surface_args.samples < 32) throw UsageError("--samples: must be >= 32");
    if (surface_args.angles < 8) throw UsageError("--angles: must be >= 8");
    if (!(surface_args.sweep_degrees > 0.0) || surface_args.sweep_degrees > 360.0) {
      throw UsageError("--sweep-deg: must lie in (0, 360]");
    }
    if (srf_margin->count()) {
      check_margin(surface_args.spec);
      surface_args.margin = margin;
    }
    cfg.params = surface_args;
  } else if (ver->parsed()) {
    cfg.subcommand = "verify";
    if (ver_a->count()) {
      if (!std::isfinite(verify_a) || !(verify_a > 0.0)) throw UsageError("--a: a > 0 violated");
      verify_args.a = verify_a;
    }
    if (ver_delta->count()) {
      if (verify_args.fit_delta) throw UsageError("--delta and --fit-delta are mutually exclusive");
      verify_args.delta = verify_delta;
    }
    if (ver_meta->count()) verify_args.meta_path = meta_path;
    if (!verify_args.a && !verify_args.meta_path) throw UsageError("--a is required unless --meta provides it");
    cfg.params = verify_args;
  } else {
    cfg.subcommand = "sweep";
    if (swp_a->count()) sweep_args.a_values = parse_number_list(sweep_a, "--a");
    if (swp_ratio->count()) sweep_args.d_ratios = parse_number_list(sweep_ratio, "--d-ratio");
    if (swp_family->count() && trim(sweep_family) != "all") {
      sweep_args.families.clear();
      for (const auto& f : split(sweep_family, ',')) sweep_args.families.push_back(parse_family_flag(f));
    }
    if (swp_samples->count()) sweep_args.samples = samples;
    if (sweep_args.samples < 16) throw UsageError("--samples: must be >= 16");
    for (Family f : sweep_args.families) {
      for (double av : sweep_args.a_values) {
        if (!std::isfinite(av) || !(av > 0.0)) throw UsageError("--a: a > 0 violated");
        for (double r : sweep_args.d_ratios) {
          check_bounds("--d-ratio", [&] { validate(ExtremalSpec{av, r * av * av, f}); });
        }
      }
    }
    cfg.params = sweep_args;
  }
  return cfg;
}

int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  return std::visit(
      [&](const auto& args) -> int {
        using T = std::decay_t<decltype(args)>;
        if constexpr (std::is_same_v<T, ExtremalArgs>) return run_extremal(cfg, args);
        if constexpr (std::is_same_v<T, CompleteArgs>) return run_complete(cfg, args, err);
        if constexpr (std::is_same_v<T, LiftArgs>) return run_lift(cfg, args);
        if constexpr (std::is_same_v<T, SurfaceArgs>) return run_surface(cfg, args);
        if constexpr (std::is_same_v<T, VerifyArgs>) return run_verify(cfg, args, out, err);
        if constexpr (std::is_same_v<T, SweepArgs>) return run_sweep(cfg, args);
      },
      cfg.params);
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(parse_args(args), out, err);
  } catch (const HelpRequested& e) {
    out << e.what();
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace thetacurve::cli
