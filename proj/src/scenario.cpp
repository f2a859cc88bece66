#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "io.hpp"
#include "symmetrization.hpp"

namespace polareig {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  size_t e = s.find_last_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::config_error,
                  "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty())
      throw Error(ErrorCode::config_error, "line " + std::to_string(lineno) + ": empty key");
    kv[key] = val;
  }
  return kv;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::config_error, "key '" + key + "': bad number '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::config_error, "key '" + key + "': bad integer '" + v + "'");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  auto kv = parse_kv(text);
  Scenario sc;
  const std::vector<std::string> known = {
      "name", "domain", "R", "r", "t", "kind", "a", "b", "mask", "grid", "g0", "V0",
      "direction", "tol", "solve_tol", "max_iters", "seed", "check", "check_tol", "chi_ball_tol"};
  for (const auto& [k, v] : kv)
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw Error(ErrorCode::config_error, "unknown key '" + k + "'");
  auto get = [&](const char* k) -> std::optional<std::string> {
    auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  if (auto v = get("name")) sc.name = *v;
  if (auto v = get("domain")) sc.domain = *v;
  if (auto v = get("R")) sc.R = to_double("R", *v);
  if (auto v = get("r")) sc.r = to_double("r", *v);
  if (auto v = get("t")) sc.t = to_double("t", *v);
  if (auto v = get("kind")) sc.kind = *v;
  if (auto v = get("a")) sc.a = to_double("a", *v);
  if (auto v = get("b")) sc.b = to_double("b", *v);
  if (auto v = get("mask")) sc.mask_path = *v;
  if (auto v = get("grid")) sc.grid = static_cast<int>(to_long("grid", *v));
  if (auto v = get("g0")) sc.g0 = *v;
  if (auto v = get("V0")) sc.v0 = *v;
  if (auto v = get("direction")) sc.direction = *v;
  if (auto v = get("tol")) sc.tol = to_double("tol", *v);
  if (auto v = get("solve_tol")) sc.solve_tol = to_double("solve_tol", *v);
  if (auto v = get("max_iters")) sc.max_iters = static_cast<int>(to_long("max_iters", *v));
  if (auto v = get("seed")) sc.seed = static_cast<uint64_t>(to_long("seed", *v));
  if (auto v = get("check")) sc.check = *v;
  if (auto v = get("check_tol")) sc.check_tol = to_double("check_tol", *v);
  if (auto v = get("chi_ball_tol")) sc.chi_ball_tol = to_double("chi_ball_tol", *v);

  const std::vector<std::string> domains = {"disk", "annulus", "steiner", "file"};
  if (std::find(domains.begin(), domains.end(), sc.domain) == domains.end())
    throw Error(ErrorCode::config_error, "domain must be disk|annulus|steiner|file");
  if (sc.direction != "minimize" && sc.direction != "maximize")
    throw Error(ErrorCode::config_error, "direction must be minimize|maximize");
  const std::vector<std::string> checks = {"none",     "schwarz",        "steiner",
                                           "foliated", "foliated_noncon", "maxloc"};
  if (std::find(checks.begin(), checks.end(), sc.check) == checks.end())
    throw Error(ErrorCode::config_error, "unknown check '" + sc.check + "'");
  if (sc.grid < 8) throw Error(ErrorCode::config_error, "grid too small");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::config_error, e.what());
  }
  return parse_scenario(text);
}

DomainMask build_scenario_mask(const Scenario& sc) {
  if (sc.domain == "disk") {
    Grid2D grid = make_centered_grid(sc.grid, sc.R);
    return make_disk_mask(grid, grid.middle(), sc.R);
  }
  if (sc.domain == "annulus") {
    Grid2D grid = make_centered_grid(sc.grid, sc.R);
    return make_annulus_mask(grid, sc.R, sc.r, sc.t);
  }
  if (sc.domain == "steiner") {
    SteinerKind kind;
    if (sc.kind == "rectangle")
      kind = SteinerKind::rectangle;
    else if (sc.kind == "stadium")
      kind = SteinerKind::stadium;
    else if (sc.kind == "ellipse")
      kind = SteinerKind::ellipse;
    else
      throw Error(ErrorCode::config_error, "kind must be rectangle|stadium|ellipse");
    double halfwidth = sc.kind == "stadium" ? sc.a + sc.b : std::max(sc.a, sc.b);
    Grid2D grid = make_centered_grid(sc.grid, halfwidth);
    return make_steiner_mask(grid, kind, sc.a, sc.b);
  }
  if (sc.mask_path.empty())
    throw Error(ErrorCode::config_error, "domain=file needs mask=<path>");
  return read_mask(sc.mask_path);
}

namespace {

// Field specs: constant:<v> | chi:<fraction>[:<amp>] | radial[:<amp>] | file:<path>
ScalarField build_field(const std::string& spec, const MaskPtr& mask) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.empty()) throw Error(ErrorCode::config_error, "empty field spec");
  const std::string& head = parts[0];
  if (head == "constant") {
    if (parts.size() != 2) throw Error(ErrorCode::config_error, "constant:<value>");
    return ScalarField::constant(mask, to_double("constant", parts[1]));
  }
  if (head == "chi") {
    if (parts.size() < 2 || parts.size() > 3)
      throw Error(ErrorCode::config_error, "chi:<fraction>[:<amp>]");
    double frac = to_double("chi", parts[1]);
    double amp = parts.size() == 3 ? to_double("chi amp", parts[2]) : 1.0;
    if (frac <= 0.0 || frac >= 1.0)
      throw Error(ErrorCode::config_error, "chi fraction must be in (0,1)");
    int n = mask->interior_count();
    int k = std::max(1, static_cast<int>(std::lround(frac * n)));
    std::vector<double> vals(n, 0.0);
    for (int c = 0; c < k && c < n; ++c) vals[c] = amp;
    return ScalarField(mask, std::move(vals));
  }
  if (head == "radial") {
    double amp = parts.size() >= 2 ? to_double("radial amp", parts[1]) : 1.0;
    const Grid2D& g = mask->grid();
    int n = mask->interior_count();
    std::vector<double> rho(n);
    double rho_max = 0.0;
    for (int c = 0; c < n; ++c) {
      CellIndex cell = mask->cells()[c];
      double dx = g.lattice_x(cell.i) * g.h / 2.0;
      double dy = g.lattice_y(cell.j) * g.h / 2.0;
      rho[c] = std::hypot(dx, dy);
      rho_max = std::max(rho_max, rho[c]);
    }
    std::vector<double> vals(n);
    for (int c = 0; c < n; ++c)
      vals[c] = rho_max > 0.0 ? amp * (1.0 - rho[c] / rho_max) : amp;
    return ScalarField(mask, std::move(vals));
  }
  if (head == "file") {
    if (parts.size() != 2) throw Error(ErrorCode::config_error, "file:<path>");
    ScalarField f = read_field(parts[1]);
    if (!(*f.mask == *mask))
      throw Error(ErrorCode::config_error, "field file mask does not match the scenario domain");
    return ScalarField(mask, f.values);
  }
  throw Error(ErrorCode::config_error, "unknown field spec '" + spec + "'");
}

std::string trace_csv(const OptTrace& trace) {
  std::ostringstream out;
  out << "iter,lambda,g_hash,V_hash,residual\n";
  char hex[32];
  for (const TraceRecord& r : trace.records) {
    out << r.iter << ',' << format_double(r.lambda) << ',';
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(r.g_hash));
    out << hex << ',';
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(r.v_hash));
    out << hex << ',' << format_double(r.residual) << '\n';
  }
  return out.str();
}

// k cells nearest the grid middle (exact lattice distances, ties by polar
// angle then index): the discrete ball of the same cell count.
std::vector<uint8_t> nearest_cells(const DomainMask& mask, int k) {
  const Grid2D& g = mask.grid();
  const int n = mask.interior_count();
  std::vector<long long> q(n);
  std::vector<double> ang(n);
  for (int c = 0; c < n; ++c) {
    CellIndex cell = mask.cells()[c];
    long long lx = g.lattice_x(cell.i), ly = g.lattice_y(cell.j);
    q[c] = lx * lx + ly * ly;
    double a = std::atan2(static_cast<double>(ly), static_cast<double>(lx));
    ang[c] = a < 0 ? a + 2.0 * std::acos(-1.0) : a;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (q[x] != q[y]) return q[x] < q[y];
    if (ang[x] != ang[y]) return ang[x] < ang[y];
    return x < y;
  });
  std::vector<uint8_t> sel(n, 0);
  for (int c = 0; c < k && c < n; ++c) sel[order[c]] = 1;
  return sel;
}

bool is_binary_class(const RearrangementClass& cls, double* amp, double* lo, int* count_hi) {
  double hi = cls.sorted_values.front(), low = cls.sorted_values.back();
  if (hi == low) return false;
  int chi = 0;
  for (double v : cls.sorted_values) {
    if (v == hi)
      ++chi;
    else if (v != low)
      return false;
  }
  *amp = hi;
  *lo = low;
  *count_hi = chi;
  return true;
}

bool field_is_radial(const ScalarField& f) {
  const Grid2D& g = f.mask->grid();
  std::map<long long, double> ring;
  for (int c = 0; c < f.size(); ++c) {
    CellIndex cell = f.mask->cells()[c];
    long long lx = g.lattice_x(cell.i), ly = g.lattice_y(cell.j);
    long long q = lx * lx + ly * ly;
    auto [it, fresh] = ring.emplace(q, f.values[c]);
    if (!fresh && it->second != f.values[c]) return false;
  }
  return true;
}

}  // namespace

double family_defect(const ScalarField& f, const std::vector<HalfSpace>& family) {
  if (family.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const HalfSpace& h : family)
    worst = std::max(worst, polarization_defect_l2rel(f, h));
  return worst;
}

namespace {

// {"defects": ..., "checks": [...]} plus the combined pass flag.
std::pair<ordered_json, bool> assess_symmetry(const Scenario& cfg, const MaskPtr& mask,
                                              const OptTrace& trace) {
  ordered_json checks = ordered_json::array();
  auto add_check = [&](const std::string& name, bool pass, double value, double tol) {
    checks.push_back({{"name", name}, {"pass", pass}, {"value", value}, {"tol", tol}});
  };

  ordered_json defects;
  if (cfg.domain == "disk") {
    auto family = schwarz_family(*mask);
    double dphi = family_defect(trace.phi, family);
    double dg = family_defect(trace.g, family);
    defects["schwarz_phi"] = dphi;
    defects["schwarz_g"] = dg;
    if (cfg.check == "schwarz")
      add_check("schwarz_phi_defect", dphi <= cfg.check_tol, dphi, cfg.check_tol);

    double amp, lo;
    int k;
    if (cfg.chi_ball_tol >= 0.0 && is_binary_class(class_of(trace.g), &amp, &lo, &k)) {
      std::vector<uint8_t> target = nearest_cells(*mask, k);
      int symmdiff = 0;
      for (int c = 0; c < trace.g.size(); ++c) {
        bool selected = trace.g.values[c] == amp;
        if (selected != (target[c] != 0)) ++symmdiff;
      }
      double fraction = static_cast<double>(symmdiff) / k;
      defects["chi_ball"] = {{"symmdiff_cells", symmdiff}, {"fraction", fraction}};
      add_check("chi_ball_symmdiff", fraction <= cfg.chi_ball_tol, fraction, cfg.chi_ball_tol);
    }
  }
  if (is_steiner_symmetric_mask(*mask)) {
    auto family = steiner_family(*mask);
    double dphi = family_defect(trace.phi, family);
    double dg = family_defect(trace.g, family);
    defects["steiner_phi"] = dphi;
    defects["steiner_g"] = dg;
    if (cfg.check == "steiner") {
      add_check("steiner_phi_defect", dphi <= cfg.check_tol, dphi, cfg.check_tol);
      add_check("steiner_g_defect", dg <= cfg.check_tol, dg, cfg.check_tol);
    }
  }
  if (cfg.domain == "annulus" && cfg.t == 0.0) {
    // best axis over the 8 candidates: phi and g about gamma, V about -gamma
    bool v_varies = !class_of(trace.V).singleton();
    double best = std::numeric_limits<double>::infinity();
    Point best_gamma{1, 0};
    double bphi = 0, bg = 0, bv = 0;
    for (const Point& gamma : grid_directions()) {
      double dphi = family_defect(trace.phi, foliated_family(*mask, gamma));
      double dg = family_defect(trace.g, foliated_family(*mask, gamma));
      double dv = v_varies
                      ? family_defect(trace.V, foliated_family(*mask, {-gamma.x, -gamma.y}))
                      : 0.0;
      double combined = std::max({dphi, dg, dv});
      if (combined < best) {
        best = combined;
        best_gamma = gamma;
        bphi = dphi;
        bg = dg;
        bv = dv;
      }
    }
    defects["foliated"] = {{"axis", {best_gamma.x, best_gamma.y}},
                           {"phi", bphi},
                           {"g", bg},
                           {"V_opposite", bv}};
    if (cfg.check == "foliated") {
      add_check("foliated_phi_defect", bphi <= cfg.check_tol, bphi, cfg.check_tol);
      add_check("foliated_g_defect", bg <= cfg.check_tol, bg, cfg.check_tol);
      add_check("foliated_V_opposite_defect", bv <= cfg.check_tol, bv, cfg.check_tol);
    }
    defects["g_radial"] = field_is_radial(trace.g);
  }
  if (cfg.domain == "annulus" && cfg.t > 0.0) {
    Point beta{-1.0, 0.0};
    double dphi = family_defect(trace.phi, foliated_family(*mask, beta));
    double dg = family_defect(trace.g, foliated_family(*mask, beta));
    defects["foliated_minus_e1"] = {{"phi", dphi}, {"g", dg}};
    if (cfg.check == "foliated_noncon") {
      add_check("foliated_phi_defect", dphi <= cfg.check_tol, dphi, cfg.check_tol);
      add_check("foliated_g_defect", dg <= cfg.check_tol, dg, cfg.check_tol);
    }

    // maximum of phi against the admissible segment of the negative x1 axis
    int arg = 0;
    for (int c = 1; c < trace.phi.size(); ++c)
      if (trace.phi.values[c] > trace.phi.values[arg]) arg = c;
    CellIndex cell = mask->cells()[arg];
    Point p = mask->grid().cell_center(cell);
    double x_lo = -(cfg.R + cfg.r - cfg.t) / 2.0;
    double x_hi = cfg.t - cfg.r;
    double dx = std::max({x_lo - p.x, p.x - x_hi, 0.0});
    double dist = std::hypot(dx, p.y);
    double h = mask->grid().h;
    bool in_segment = dist <= h + 1e-12;
    defects["argmax"] = {{"cell", {cell.i, cell.j}},
                         {"x", p.x},
                         {"y", p.y},
                         {"segment", {x_lo, x_hi}},
                         {"distance", dist},
                         {"within_one_cell", in_segment}};
    if (cfg.check == "maxloc")
      add_check("argmax_on_segment", in_segment, dist, h);
  }

  bool all_pass = true;
  for (const auto& c : checks)
    if (!c["pass"].get<bool>()) all_pass = false;
  ordered_json wrap;
  wrap["defects"] = defects;
  wrap["checks"] = checks;
  return {wrap, all_pass};
}

}  // namespace

SymmetryReport symmetry_report(const Scenario& sc, const MaskPtr& mask, const OptTrace& trace) {
  auto [wrap, all_pass] = assess_symmetry(sc, mask, trace);
  return {wrap.dump(2) + "\n", all_pass};
}

ScenarioOutcome run_scenario(const Scenario& sc, const std::string& out_dir,
                             std::optional<uint64_t> seed_override) {
  namespace fs = std::filesystem;
  Scenario cfg = sc;
  if (seed_override) cfg.seed = *seed_override;

  auto mask = std::make_shared<const DomainMask>(build_scenario_mask(cfg));
  ScalarField g0 = build_field(cfg.g0, mask);
  ScalarField v0 = build_field(cfg.v0, mask);

  OptProblem prob;
  prob.mask = mask;
  prob.g_class = class_of(g0);
  prob.V_class = class_of(v0);
  prob.direction = cfg.direction == "maximize" ? OptDirection::maximize : OptDirection::minimize;
  prob.tol_lambda_rel = cfg.tol;
  prob.max_iters = cfg.max_iters;
  prob.solve.tol = cfg.solve_tol;
  prob.solve.seed = cfg.seed;
  prob.g0 = g0;
  prob.V0 = v0;

  OptTrace trace = prob.direction == OptDirection::maximize ? maximize_lambda(prob)
                                                            : minimize_lambda(prob);

  fs::create_directories(out_dir);
  auto path = [&](const char* f) { return (fs::path(out_dir) / f).string(); };
  write_text_file(path("trace.csv"), trace_csv(trace));
  write_field(trace.phi, path("phi.field"));
  write_field(trace.g, path("g.field"));
  write_field(trace.V, path("v.field"));
  PgmScale sphi = write_pgm(trace.phi, path("phi.pgm"));
  PgmScale sg = write_pgm(trace.g, path("g.pgm"));
  PgmScale sv = write_pgm(trace.V, path("v.pgm"));

  ordered_json report;
  report["scenario"] = cfg.name;
  report["domain"] = cfg.domain;
  report["grid"] = cfg.grid;
  report["interior_cells"] = mask->interior_count();
  report["seed"] = cfg.seed;
  report["direction"] = cfg.direction;
  report["lambda"] = trace.lambda;
  report["status"] = to_string(trace.status);
  report["iterations"] = trace.iters;
  report["residual"] = trace.records.empty() ? 0.0 : trace.records.back().residual;
  report["coercivity"] = {{"lambda_min_A", trace.coercivity.lambda_min_A},
                          {"lambda_min_laplace", trace.coercivity.lambda_min_lap},
                          {"delta0", trace.coercivity.delta0}};
  report["monotone_coupling"] = {
      {"g", check_monotone_coupling(trace.phi, trace.g)},
      {"V", check_antitone_coupling(trace.phi, trace.V)}};
  report["pgm_scale"] = {{"phi", {sphi.lo, sphi.hi}}, {"g", {sg.lo, sg.hi}}, {"v", {sv.lo, sv.hi}}};

  auto [symmetry, all_pass] = assess_symmetry(cfg, mask, trace);
  report["defects"] = symmetry["defects"];
  report["checks"] = symmetry["checks"];
  report["pass"] = all_pass;

  ScenarioOutcome outcome;
  outcome.exit_code = all_pass ? 0 : 1;
  outcome.lambda = trace.lambda;
  outcome.status = trace.status;
  outcome.report_json = report.dump(2) + "\n";
  write_text_file(path("report.json"), outcome.report_json);
  return outcome;
}

}  // namespace polareig
