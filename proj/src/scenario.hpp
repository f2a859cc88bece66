#pragma once

#include <optional>
#include <string>

#include "optimizer.hpp"

namespace polareig {

// One experiment: a domain, two rearrangement classes, an optimization
// direction and an optional symmetry assertion. Parsed from flat
// "key = value" text; see README for the key reference.
struct Scenario {
  std::string name = "scenario";
  std::string domain = "disk";  // disk | annulus | steiner | file
  double R = 1.0;
  double r = 0.3;
  double t = 0.0;
  std::string kind = "ellipse";  // steiner domains: rectangle | stadium | ellipse
  double a = 0.8;
  double b = 0.4;
  std::string mask_path;
  int grid = 64;
  std::string g0 = "constant:1";
  std::string v0 = "constant:0";
  std::string direction = "minimize";
  double tol = 1e-10;
  double solve_tol = 1e-12;
  int max_iters = 200;
  uint64_t seed = 1;
  std::string check = "none";  // none | schwarz | steiner | foliated | foliated_noncon | maxloc
  double check_tol = 0.03;
  double chi_ball_tol = -1.0;  // >= 0 enables the disk indicator comparison
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

struct ScenarioOutcome {
  int exit_code = 0;  // 0: all checks passed, 1: some assertion failed
  double lambda = 0.0;
  OptStatus status = OptStatus::converged;
  std::string report_json;
};

// Builds the problem, runs the optimizer, writes trace.csv, phi/g/v fields,
// PGM heatmaps and report.json into out_dir, and evaluates the scenario's
// assertions. Deterministic for a fixed config and seed.
ScenarioOutcome run_scenario(const Scenario& sc, const std::string& out_dir,
                             std::optional<uint64_t> seed_override = std::nullopt);

// Resolves just the domain part of a scenario (used by `mask gen`).
DomainMask build_scenario_mask(const Scenario& sc);

// max over the family of ||f_H - f||_2 / ||f||_2; infinity for an empty
// family (nothing to certify against).
double family_defect(const ScalarField& f, const std::vector<HalfSpace>& family);

// Symmetry assessment of a finished optimization on its domain: polarization
// defects over the relevant half-space families, the foliation axis, the
// argmax location on shifted annuli, and the scenario's check outcomes.
// `json` holds the serialized {"defects": ..., "checks": [...]} object that
// run_scenario embeds in report.json.
struct SymmetryReport {
  std::string json;
  bool all_pass = true;
};
SymmetryReport symmetry_report(const Scenario& sc, const MaskPtr& mask, const OptTrace& trace);

}  // namespace polareig
