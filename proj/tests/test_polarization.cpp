#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "polarization.hpp"
#include "symmetrization.hpp"
#include "test_support.hpp"

using namespace polareig;
using testsup::mask_from_art;
using testsup::random_field;
using testsup::share;

namespace {

// Two interior cells in one row; the vertical boundary between them makes
// them a mirror pair, left cell in H for less_side = true.
struct MirrorPair {
  MaskPtr mask;
  HalfSpace h;
};

MirrorPair mirror_pair() {
  MirrorPair mp;
  mp.mask = mask_from_art({"....",
                           ".##.",
                           "...."});
  mp.h = lattice_halfspace(mp.mask->grid(), HalfSpaceKind::axis_x, 3, true);
  return mp;
}

MaskPtr centered_disk(int n, double R) {
  Grid2D g = make_centered_grid(n, R);
  return share(make_disk_mask(g, g.middle(), R));
}

}  // namespace

TEST_CASE("polarize on a mirror pair keeps the larger value on the H side") {
  auto [m, h] = mirror_pair();
  ScalarField f(m, {1.0, 2.0});
  ScalarField fh = polarize(f, h);
  CHECK(fh.values == std::vector<double>{2.0, 1.0});

  ScalarField fd = dual_polarize(f, h);
  CHECK(fd.values == std::vector<double>{1.0, 2.0});

  // constants are fixed points of both
  ScalarField c = ScalarField::constant(m, 3.25);
  CHECK(polarize(c, h).values == c.values);
  CHECK(dual_polarize(c, h).values == c.values);
}

TEST_CASE("polarize refuses non-invariant masks and misaligned boundaries") {
  auto m = mask_from_art({".....",
                          ".##..",
                          "....."});
  // boundary right of both cells: polarization would move them
  HalfSpace h = lattice_halfspace(m->grid(), HalfSpaceKind::axis_x, 6, false);
  ScalarField f = ScalarField::constant(m, 1.0);
  CHECK_THROWS_AS(polarize(f, h), Error);
  CHECK_THROWS_AS(polarize(f, HalfSpace(1.0, 0.0, 0.37)), Error);
}

TEST_CASE("polarization of nonnegative fields is a rearrangement; idempotent; norm-preserving") {
  std::mt19937_64 rng(41);
  auto disk = centered_disk(20, 1.0);
  auto family = schwarz_family(*disk);
  REQUIRE(family.size() > 10);
  std::uniform_int_distribution<size_t> pick(0, family.size() - 1);
  for (int trial = 0; trial < 300; ++trial) {
    const HalfSpace& h = family[pick(rng)];
    ScalarField f = random_field(disk, rng, 0.0, 2.0);
    ScalarField fh = polarize(f, h);
    CHECK(is_rearrangement(fh, f));
    CHECK(polarize(fh, h).values == fh.values);  // (f_H)_H = f_H, bitwise
    ScalarField fd = dual_polarize(f, h);
    CHECK(dual_polarize(fd, h).values == fd.values);

    // l2 preservation via the sorted multisets
    std::vector<double> a = f.values, b = fh.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double sa = 0.0, sb = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
      sa += a[k] * a[k];
      sb += b[k] * b[k];
    }
    CHECK(sa == sb);
  }
}

TEST_CASE("dual polarization equals polarization from the complementary side") {
  // reflection-symmetric mask: rectangle about a through-center boundary
  Grid2D g(10, 8, 1.0, 0.0, 0.0);
  auto rect = share(make_steiner_mask(g, SteinerKind::rectangle, 3.0, 2.0));
  HalfSpace left = lattice_halfspace(g, HalfSpaceKind::axis_x, g.nx - 1, true);
  HalfSpace right = lattice_halfspace(g, HalfSpaceKind::axis_x, g.nx - 1, false);
  REQUIRE(is_reflection_symmetric(*rect, left));
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    ScalarField f = random_field(rect, rng, 0.0, 1.0);
    CHECK(dual_polarize(f, left).values == polarize(f, right).values);
  }
}

TEST_CASE("polarized zero-extension vanishes outside the mask") {
  // nonnegative field on an invariant mask: every interior cell of H whose
  // mirror is exterior keeps its value; exterior cells would stay at zero
  auto disk = centered_disk(16, 1.0);
  const Grid2D& g = disk->grid();
  HalfSpace h = lattice_halfspace(g, HalfSpaceKind::axis_x, g.nx - 1 + 4, true);
  REQUIRE(is_polarization_invariant(*disk, h));
  std::mt19937_64 rng(9);
  ScalarField f = random_field(disk, rng, 0.0, 1.0);
  ScalarField fh = polarize(f, h);
  CompiledHalfSpace ch(g, h);
  for (int k = 0; k < f.size(); ++k) {
    CellIndex c = disk->cells()[k];
    auto mirror = ch.reflect(c);
    bool mirror_exterior = !mirror || !disk->inside(*mirror);
    if (ch.in_open(c) && mirror_exterior) CHECK(fh.values[k] == f.values[k]);
  }
}

TEST_CASE("f = f_H = f^H on a reflection-symmetric mask forces mirror symmetry") {
  Grid2D g(9, 9, 1.0, 0.0, 0.0);
  auto rect = share(make_steiner_mask(g, SteinerKind::rectangle, 2.5, 1.5));
  HalfSpace h = lattice_halfspace(g, HalfSpaceKind::axis_y, g.ny - 1, true);
  REQUIRE(is_reflection_symmetric(*rect, h));
  CompiledHalfSpace ch(g, h);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    ScalarField f = random_field(rect, rng, 0.0, 1.0);
    ScalarField fh = polarize(f, h);
    ScalarField fd = dual_polarize(f, h);
    bool invariant_both = fh.values == f.values && fd.values == f.values;
    bool mirror_sym = true;
    for (int k = 0; k < f.size(); ++k) {
      auto mirror = ch.reflect(rect->cells()[k]);
      int mk = rect->interior_index(*mirror);
      if (f.values[k] != f.values[mk]) mirror_sym = false;
    }
    CHECK(invariant_both == mirror_sym);
  }
}

TEST_CASE("hardy-littlewood gap on the worked two-cell examples") {
  auto [m, h] = mirror_pair();
  ScalarField v(m, {1.0, 2.0});
  ScalarField w(m, {3.0, 1.0});
  CHECK(hardy_littlewood_gap(v, w, h) == 2.0);  // 7 - 5

  // both already polarized: gap 0
  ScalarField vp(m, {2.0, 1.0});
  ScalarField wp(m, {3.0, 1.0});
  CHECK(hardy_littlewood_gap(vp, wp, h) == 0.0);

  // constant w: gap 0 (mirror-pair mask keeps the sums exactly equal)
  ScalarField wc = ScalarField::constant(m, 4.0);
  CHECK(hardy_littlewood_gap(v, wc, h) == 0.0);

  // needs one nonnegative input
  ScalarField neg(m, {-1.0, -2.0});
  CHECK_THROWS_AS(hardy_littlewood_gap(neg, ScalarField(m, {1.0, -1.0}), h), Error);
}

TEST_CASE("reverse hardy-littlewood gap on the worked two-cell examples") {
  auto [m, h] = mirror_pair();
  ScalarField w(m, {3.0, 1.0});
  CHECK(reverse_hl_gap(ScalarField(m, {1.0, 2.0}), w, h) == 0.0);  // 5 - 5
  CHECK(reverse_hl_gap(ScalarField(m, {2.0, 1.0}), w, h) == 2.0);  // 7 - 5

  ScalarField vc = ScalarField::constant(m, 2.5);
  CHECK(reverse_hl_gap(vc, w, h) == 0.0);

  ScalarField wneg(m, {1.0, -1.0});
  CHECK_THROWS_AS(reverse_hl_gap(ScalarField(m, {1.0, 2.0}), wneg, h), Error);
}

TEST_CASE("hardy-littlewood batteries over random triples") {
  std::mt19937_64 rng(2030);
  std::vector<MaskPtr> masks = {centered_disk(14, 1.0), centered_disk(15, 1.0)};
  {
    Grid2D g = make_centered_grid(15, 1.0);
    masks.push_back(share(make_annulus_mask(g, 1.0, 0.4, 0.0)));
  }
  std::vector<std::vector<HalfSpace>> families;
  for (const auto& m : masks) {
    auto fam = schwarz_family(*m);
    auto fol = foliated_family(*m, {1, 0});
    fam.insert(fam.end(), fol.begin(), fol.end());
    families.push_back(fam);
  }
  std::uniform_int_distribution<size_t> mi(0, masks.size() - 1);
  for (int trial = 0; trial < 1000; ++trial) {
    size_t k = mi(rng);
    std::uniform_int_distribution<size_t> hi(0, families[k].size() - 1);
    const HalfSpace& h = families[k][hi(rng)];
    ScalarField v = random_field(masks[k], rng, 0.0, 1.0);
    ScalarField w = random_field(masks[k], rng, -1.0, 1.0);
    CHECK(hardy_littlewood_gap(v, w, h) >= 0.0);
    ScalarField vs = random_field(masks[k], rng, -1.0, 1.0);
    ScalarField wn = random_field(masks[k], rng, 0.0, 1.0);
    CHECK(reverse_hl_gap(vs, wn, h) >= 0.0);
  }
}

TEST_CASE("dirichlet energy: boundary links and polarization monotonicity") {
  // single interior cell: four Dirichlet links
  auto single = mask_from_art({"...",
                               ".#.",
                               "..."});
  ScalarField one(single, {2.5});
  CHECK(dirichlet_energy(one) == 4 * 2.5 * 2.5);
  CHECK(dirichlet_energy(ScalarField::constant(single, 0.0)) == 0.0);

  std::mt19937_64 rng(77);
  auto disk = centered_disk(16, 1.0);
  auto family = schwarz_family(*disk);
  std::uniform_int_distribution<size_t> pick(0, family.size() - 1);
  for (int trial = 0; trial < 500; ++trial) {
    ScalarField f = random_field(disk, rng, 0.0, 1.0);
    const HalfSpace& h = family[pick(rng)];
    ScalarField fh = polarize(f, h);
    CHECK(dirichlet_energy(fh) <= dirichlet_energy(f) + 1e-12);
    if (fh.values == f.values) CHECK(dirichlet_energy(fh) == dirichlet_energy(f));
  }
}
