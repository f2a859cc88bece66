#include "suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "eigensolver.hpp"
#include "polarization.hpp"
#include "symmetrization.hpp"

namespace polareig {

namespace {

struct ZooEntry {
  MaskPtr mask;
  std::vector<HalfSpace> halfspaces;  // polarization-invariant for this mask
};

// All lattice half-spaces within the mask's score range that leave the mask
// polarization invariant.
std::vector<HalfSpace> invariant_halfspaces(const DomainMask& mask) {
  std::vector<HalfSpace> out;
  const Grid2D& g = mask.grid();
  struct Range {
    HalfSpaceKind kind;
    long lo, hi;
  };
  const std::vector<Range> ranges = {
      {HalfSpaceKind::axis_x, 0, 2L * (g.nx - 1)},
      {HalfSpaceKind::axis_y, 0, 2L * (g.ny - 1)},
      {HalfSpaceKind::diag_sum, 0, static_cast<long>(g.nx - 1) + (g.ny - 1)},
      {HalfSpaceKind::diag_diff, -static_cast<long>(g.ny - 1), g.nx - 1}};
  for (const Range& r : ranges) {
    for (long t = r.lo; t <= r.hi; ++t) {
      for (bool less : {true, false}) {
        HalfSpace h = lattice_halfspace(g, r.kind, t, less);
        try {
          if (is_polarization_invariant(mask, h)) out.push_back(h);
        } catch (const Error&) {
          // reflections leaving the grid: not usable for this mask
        }
      }
    }
  }
  return out;
}

std::vector<ZooEntry> build_zoo() {
  std::vector<ZooEntry> zoo;
  auto add = [&zoo](DomainMask m) {
    ZooEntry e;
    e.mask = std::make_shared<const DomainMask>(std::move(m));
    e.halfspaces = invariant_halfspaces(*e.mask);
    if (!e.halfspaces.empty()) zoo.push_back(std::move(e));
  };
  {
    Grid2D g(13, 13, 0.25, 0.0, 0.0);
    add(make_disk_mask(g, g.middle(), 5.2 * g.h));
  }
  {
    Grid2D g(14, 14, 0.5, -3.25, -3.25);
    add(make_disk_mask(g, g.middle(), 2.6));
  }
  {
    Grid2D g = make_centered_grid(17, 1.0);
    add(make_annulus_mask(g, 1.0, 0.35, 0.0));
  }
  {
    Grid2D g = make_centered_grid(16, 1.0);
    add(make_steiner_mask(g, SteinerKind::rectangle, 0.8, 0.5));
  }
  {
    Grid2D g = make_centered_grid(18, 1.0);
    add(make_steiner_mask(g, SteinerKind::ellipse, 0.9, 0.6));
  }
  return zoo;
}

ScalarField random_field(const MaskPtr& mask, std::mt19937_64& rng, bool nonnegative) {
  std::uniform_real_distribution<double> uni(nonnegative ? 0.0 : -1.0, 1.0);
  std::vector<double> v(mask->interior_count());
  for (double& x : v) x = uni(rng);
  return ScalarField(mask, std::move(v));
}

// Small connected mask for eigensolver trials: random walk carving on a
// (m+2) x (m+2) grid.
DomainMask random_connected_mask(std::mt19937_64& rng, int m, int target_cells) {
  Grid2D g(m + 2, m + 2, 1.0, 0.0, 0.0);
  std::vector<uint8_t> inside(g.cell_count(), 0);
  std::uniform_int_distribution<int> pick(1, m);
  CellIndex c{pick(rng), pick(rng)};
  inside[g.linear(c)] = 1;
  int count = 1;
  std::uniform_int_distribution<int> dir(0, 3);
  const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  int steps = 0;
  while (count < target_cells && steps < 50 * target_cells) {
    int d = dir(rng);
    CellIndex n{c.i + dx[d], c.j + dy[d]};
    if (n.i < 1 || n.j < 1 || n.i > m || n.j > m) {
      ++steps;
      continue;
    }
    c = n;
    if (!inside[g.linear(c)]) {
      inside[g.linear(c)] = 1;
      ++count;
    }
    ++steps;
  }
  return DomainMask(g, std::move(inside));
}

double field_dot(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k) s += a.values[k] * b.values[k];
  return s;
}

struct Battery {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst = 0.0;  // most negative margin seen (0 when all comfortably pass)
};

void print_battery(std::ostringstream& out, const Battery& b) {
  char line[160];
  std::snprintf(line, sizeof(line), "%-24s trials %6d   %s   worst margin %.3e\n",
                b.name.c_str(), b.trials, b.failures == 0 ? "pass" : "FAIL", b.worst);
  out << line;
}

}  // namespace

SuiteResult run_property_suite(const SuiteOptions& opts) {
  std::ostringstream table;
  std::vector<Battery> batteries;
  std::vector<ZooEntry> zoo = build_zoo();
  std::mt19937_64 rng(opts.seed);

  auto pick_pair = [&](const ZooEntry** entry, const HalfSpace** h) {
    std::uniform_int_distribution<size_t> zi(0, zoo.size() - 1);
    *entry = &zoo[zi(rng)];
    std::uniform_int_distribution<size_t> hi(0, (*entry)->halfspaces.size() - 1);
    *h = &(*entry)->halfspaces[hi(rng)];
  };

  {
    Battery b{"hardy-littlewood", opts.counts};
    for (int t = 0; t < opts.counts; ++t) {
      const ZooEntry* e;
      const HalfSpace* h;
      pick_pair(&e, &h);
      ScalarField v = random_field(e->mask, rng, true);
      ScalarField w = random_field(e->mask, rng, false);
      ScalarField vh = polarize(v, *h);
      ScalarField wh = polarize(w, *h);
      if (opts.corrupt_polarization && !vh.values.empty()) {
        // damage the polarized field against the heaviest partner cell so the
        // gap must go negative
        int knock = 0;
        for (int k = 1; k < wh.size(); ++k)
          if (std::abs(wh.values[k]) > std::abs(wh.values[knock])) knock = k;
        vh.values[knock] -= (wh.values[knock] >= 0.0 ? 10.0 : -10.0) * (1.0 + std::abs(vh.values[knock]));
      }
      double gap = field_dot(vh, wh) - field_dot(v, w);
      if (gap < 0.0) {
        ++b.failures;
        b.worst = std::min(b.worst, gap);
      }
    }
    batteries.push_back(b);
  }
  {
    Battery b{"reverse hardy-littlewood", opts.counts};
    for (int t = 0; t < opts.counts; ++t) {
      const ZooEntry* e;
      const HalfSpace* h;
      pick_pair(&e, &h);
      ScalarField v = random_field(e->mask, rng, false);
      ScalarField w = random_field(e->mask, rng, true);
      double gap = reverse_hl_gap(v, w, *h);
      if (gap < 0.0) {
        ++b.failures;
        b.worst = std::min(b.worst, gap);
      }
    }
    batteries.push_back(b);
  }
  {
    Battery b{"equimeasurability", opts.counts};
    for (int t = 0; t < opts.counts; ++t) {
      const ZooEntry* e;
      const HalfSpace* h;
      pick_pair(&e, &h);
      ScalarField f = random_field(e->mask, rng, true);
      ScalarField fh = polarize(f, *h);
      bool ok = is_rearrangement(fh, f);
      ScalarField fhh = polarize(fh, *h);
      ok = ok && fhh.values == fh.values;
      ScalarField fd = dual_polarize(f, *h);
      ScalarField fdd = dual_polarize(fd, *h);
      ok = ok && fdd.values == fd.values;
      if (!ok) {
        ++b.failures;
        b.worst = -1.0;
      }
    }
    batteries.push_back(b);
  }
  {
    int trials = std::max(0, opts.counts / 5);
    Battery b{"extremal vs brute force", trials};
    Grid2D g(6, 6, 1.0, 0.0, 0.0);
    for (int t = 0; t < trials; ++t) {
      std::uniform_int_distribution<int> ncells(2, 8);
      int n = ncells(rng);
      std::vector<uint8_t> inside(g.cell_count(), 0);
      std::vector<int> slots(16);
      std::iota(slots.begin(), slots.end(), 0);
      std::shuffle(slots.begin(), slots.end(), rng);
      for (int s = 0; s < n; ++s) {
        int si = slots[s];
        inside[g.linear({1 + si % 4, 1 + si / 4})] = 1;
      }
      auto mask = std::make_shared<const DomainMask>(g, std::move(inside));
      // dyadic lattice values keep every pairing sum exact in doubles, so the
      // bitwise comparison against brute force is meaningful
      std::uniform_int_distribution<int> iv(-128, 128);
      std::vector<double> f0v(n), hv(n);
      for (double& v : f0v) v = iv(rng) / 16.0;
      for (double& v : hv) v = iv(rng) / 64.0;
      ScalarField f0(mask, std::move(f0v));
      ScalarField h(mask, std::move(hv));
      RearrangementClass cls = class_of(f0);
      double got_max = field_dot(extremal_max(cls, h), h);
      double got_min = field_dot(extremal_min(cls, h), h);
      std::vector<double> perm = cls.sorted_values;
      std::sort(perm.begin(), perm.end());
      double best = -1e300, worst = 1e300;
      do {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += perm[k] * h.values[k];
        best = std::max(best, s);
        worst = std::min(worst, s);
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (got_max != best || got_min != worst) {
        ++b.failures;
        b.worst = std::min(b.worst, -std::abs(got_max - best) - std::abs(got_min - worst));
      }
    }
    batteries.push_back(b);
  }
  {
    int trials = std::max(0, opts.counts / 50);
    Battery b{"dense eigen oracle", trials};
    for (int t = 0; t < trials; ++t) {
      std::uniform_int_distribution<int> sz(1, 20);
      auto mask = std::make_shared<const DomainMask>(random_connected_mask(rng, 5, sz(rng)));
      std::uniform_real_distribution<double> gu(0.0, 2.0), vu(0.0, 3.0);
      int n = mask->interior_count();
      std::vector<double> gv(n), vv(n);
      for (double& x : gv) x = gu(rng);
      for (double& x : vv) x = vu(rng);
      gv[0] = std::max(gv[0], 0.5);  // keep the positive part alive
      ScalarField V(mask, vv);
      StencilOperator A(mask, V);
      EigenOptions eo;
      eo.tol = 1e-13;
      eo.max_outer = 20000;
      eo.seed = opts.seed + t;
      EigenResult it = solve_first(A, gv, eo);
      DenseEigenResult dn = dense_first_eigenpair(*mask, vv, gv);
      double rel = std::abs(it.lambda - dn.lambda) / std::abs(dn.lambda);
      double align = 0.0;
      for (int k = 0; k < n; ++k) align += it.phi.values[k] * dn.phi[k];
      double defect = std::max(rel, 1.0 - std::abs(align));
      if (defect > 1e-10) {
        ++b.failures;
        b.worst = std::min(b.worst, -defect);
      }
    }
    batteries.push_back(b);
  }

  SuiteResult res;
  for (const Battery& b : batteries) {
    print_battery(table, b);
    res.failures += b.failures;
  }
  res.exit_code = res.failures == 0 ? 0 : 1;
  res.table = table.str();
  return res;
}

}  // namespace polareig
