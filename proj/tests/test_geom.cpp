#include <doctest.h>

#include <cmath>
#include <cstring>

#include "cadseq/errors.hpp"
#include "cadseq/geom/intersect.hpp"
#include "cadseq/geom/sampling.hpp"
#include "cadseq/geom/solid.hpp"
#include "cadseq/geom/validity.hpp"
#include "test_util.hpp"

using namespace cadseq;
using namespace cadseq::geom;

namespace {

constexpr double kPi = 3.14159265358979323846;

CadProgram circle_extrude_program() {
  CadProgram p;
  testutil::append_circle_block(&p.commands, 128, 128, 64, 128, 192, BoolOp::NewBody);
  return p;
}

// Distance from a point to the closed cylinder surface (r, z in [z0, z1]
// about the z axis), exact.
double cylinder_surface_distance(const Vec3& p, double r, double z0, double z1) {
  const double dr = std::hypot(p.x, p.y);
  const bool in_z = p.z >= z0 && p.z <= z1;
  const bool in_r = dr <= r;
  if (in_z && in_r) {
    return std::min({r - dr, p.z - z0, z1 - p.z});
  }
  const double a = std::max(dr - r, 0.0);
  const double b = std::max(std::max(z0 - p.z, p.z - z1), 0.0);
  if (in_r) return b;
  if (in_z) return a;
  return std::hypot(a, b);
}

}  // namespace

TEST_CASE("compile: minimal circle-extrude is a single cylinder") {
  const SolidModel m = compile(circle_extrude_program());
  REQUIRE(m.size() == 1);
  CHECK(m.ops[0] == BoolOp::NewBody);
  REQUIRE(m.solids[0].profile.loops.size() == 1);
  CHECK(m.solids[0].profile.loops[0].is_circle());
  CHECK(m.solids[0].h_lo == 0.0);
  CHECK(m.solids[0].h_hi == doctest::Approx(0.5));
}

TEST_CASE("compile: square sketch joined after a first body gives two entries") {
  CadProgram p;
  testutil::append_circle_block(&p.commands, 128, 128, 40, 100, 160, BoolOp::NewBody);
  p.commands.push_back(Command::sol());
  p.commands.push_back(Command::line(192, 128));
  p.commands.push_back(Command::line(192, 192));
  p.commands.push_back(Command::line(128, 192));
  p.commands.push_back(Command::line(128, 128));
  p.commands.push_back(Command::extrude(128, 128, 128, 128, 128, 160, 128, 160, 128,
                                        BoolOp::Join, ExtentType::OneSided));
  const SolidModel m = compile(p);
  REQUIRE(m.size() == 2);
  CHECK(m.ops[1] == BoolOp::Join);
  CHECK(m.solids[1].profile.loops[0].curves.size() == 4);
}

TEST_CASE("compile: open loop fails at the loop's last command") {
  CadProgram p;
  p.commands.push_back(Command::sol());
  p.commands.push_back(Command::line(192, 128));
  p.commands.push_back(Command::line(192, 192));
  p.commands.push_back(Command::line(160, 170));  // does not return to the origin
  p.commands.push_back(Command::extrude(128, 128, 128, 128, 128, 128, 128, 160, 128,
                                        BoolOp::NewBody, ExtentType::OneSided));
  try {
    compile(p);
    FAIL("expected CompileError");
  } catch (const CompileError& e) {
    CHECK(e.command_index == 3);
  }
}

TEST_CASE("compile: degenerate cases") {
  {
    CadProgram p = circle_extrude_program();
    p.commands[1] = Command::circle(128, 128, 0);  // zero radius
    CHECK_THROWS_AS(compile(p), CompileError);
  }
  {
    CadProgram p = circle_extrude_program();
    p.commands[2] = Command::extrude(128, 128, 128, 128, 128, 128, 128, 128, 128,
                                     BoolOp::NewBody, ExtentType::OneSided);
    CHECK_THROWS_AS(compile(p), CompileError);  // e1 = 0: zero thickness
  }
  {
    CadProgram p = circle_extrude_program();
    p.commands[2] = Command::extrude(128, 128, 128, 128, 128, 128, 0, 192, 128,
                                     BoolOp::NewBody, ExtentType::OneSided);
    CHECK_THROWS_AS(compile(p), CompileError);  // zero scale
  }
  {
    CadProgram p = circle_extrude_program();
    p.commands[2].params[slot::kBool] = static_cast<std::int16_t>(BoolOp::Cut);
    CHECK_THROWS_AS(compile(p), CompileError);  // first op must be NewBody
  }
}

TEST_CASE("extent resolution") {
  CadProgram p = circle_extrude_program();
  p.commands[2] = Command::extrude(128, 128, 128, 128, 128, 128, 128, 192, 160,
                                   BoolOp::NewBody, ExtentType::Symmetric);
  SolidModel m = compile(p);
  CHECK(m.solids[0].h_hi == doctest::Approx(0.25));
  CHECK(m.solids[0].h_lo == doctest::Approx(-0.25));

  p.commands[2] = Command::extrude(128, 128, 128, 128, 128, 128, 128, 192, 160,
                                   BoolOp::NewBody, ExtentType::TwoSided);
  m = compile(p);
  CHECK(m.solids[0].h_hi == doctest::Approx(0.5));
  CHECK(m.solids[0].h_lo == doctest::Approx(-0.25));
}

TEST_CASE("contains: unit cube center and far point") {
  const SolidModel cube =
      testutil::make_box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
  CHECK(contains(cube, {0.0, 0.0, 0.0}));
  CHECK_FALSE(contains(cube, {2.0, 2.0, 2.0}));
}

TEST_CASE("contains: cube minus concentric cube is hollow at the center") {
  SolidModel m = testutil::make_box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
  const SolidModel inner = testutil::make_box({-0.25, -0.25, -0.25}, {0.25, 0.25, 0.25});
  m.solids.push_back(inner.solids[0]);
  m.ops.push_back(BoolOp::Cut);

  CHECK_FALSE(contains(m, {0.0, 0.0, 0.0}));
  CHECK(contains(m, {0.4, 0.4, 0.4}));  // shell material remains
  // Brute-force cross-check on a grid of probes.
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 q{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
    if (solid_margin(m, q) <= 1e-6) continue;
    CHECK(contains(m, q) == testutil::oracle_contains(m, q));
  }
}

TEST_CASE("CSG membership algebra against independently composed predicates") {
  Rng rng(42);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const CadProgram p = testutil::make_csg_program(rng);
    const SolidModel m = compile(p);
    Box3 box = m.bbox;
    if (box.empty()) continue;
    const Vec3 pad = box.extent() * 0.1;
    box.lo = box.lo - pad;
    box.hi = box.hi + pad;
    for (int i = 0; i < 300; ++i) {
      const Vec3 q{rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y),
                   rng.uniform(box.lo.z, box.hi.z)};
      if (solid_margin(m, q) <= 1e-6) continue;
      CHECK(contains(m, q) == testutil::oracle_contains(m, q));
      ++checked;
    }
  }
  CHECK(checked > 10000);
}

TEST_CASE("monte_carlo_volume analytic oracles") {
  const SolidModel cube = testutil::make_box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
  const VolumeEstimate cube_vol = monte_carlo_volume(cube, 100000, 11);
  CHECK(cube_vol.volume == doctest::Approx(1.0).epsilon(0.01));

  const SolidModel cyl = testutil::make_cylinder({0.0, 0.0}, 0.5, 0.0, 1.0);
  const VolumeEstimate cyl_vol = monte_carlo_volume(cyl, 100000, 12);
  CHECK(cyl_vol.volume == doctest::Approx(kPi / 4.0).epsilon(0.02));
  CHECK(cyl_vol.std_error < 0.01);

  SolidModel empty_model = cube;
  empty_model.solids.push_back(cube.solids[0]);
  empty_model.ops.push_back(BoolOp::Cut);  // A cut A
  const VolumeEstimate none = monte_carlo_volume(empty_model, 20000, 13);
  CHECK(none.volume == 0.0);
}

TEST_CASE("sample_surface: cylinder points lie on the analytic surface") {
  const SolidModel cyl = testutil::make_cylinder({0.0, 0.0}, 0.5, 0.0, 1.0);
  const PointCloud cloud = sample_surface(cyl, 4096, 21);
  REQUIRE(cloud.size() == 4096);
  std::size_t close = 0;
  for (const Vec3& p : cloud.points) {
    if (cylinder_surface_distance(p, 0.5, 0.0, 1.0) < 1e-6) ++close;
  }
  CHECK(static_cast<double>(close) / 4096.0 >= 0.99);
}

TEST_CASE("sample_surface: unit cube faces weighted 1/6 each") {
  const SolidModel cube = testutil::make_box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
  const std::size_t n = 60000;
  const PointCloud cloud = sample_surface(cube, n, 22);
  REQUIRE(cloud.has_normals());
  std::size_t counts[6] = {0, 0, 0, 0, 0, 0};
  for (const Vec3& nrm : cloud.normals) {
    CHECK(std::abs(norm(nrm) - 1.0) < 1e-6);
    if (nrm.x > 0.9) counts[0]++;
    else if (nrm.x < -0.9) counts[1]++;
    else if (nrm.y > 0.9) counts[2]++;
    else if (nrm.y < -0.9) counts[3]++;
    else if (nrm.z > 0.9) counts[4]++;
    else counts[5]++;
  }
  for (const std::size_t c : counts) {
    CHECK(static_cast<double>(c) / static_cast<double>(n) ==
          doctest::Approx(1.0 / 6.0).epsilon(0.12));  // 1/6 +- 2 percentage points
  }
}

TEST_CASE("sample_surface: fully cut-away solid raises SamplingError") {
  SolidModel m = testutil::make_box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
  m.solids.push_back(m.solids[0]);
  m.ops.push_back(BoolOp::Cut);
  CHECK_THROWS_AS(sample_surface(m, 500, 23), SamplingError);
}

TEST_CASE("sample_surface: soundness of boundary normals under cuts") {
  // Cube with a cylindrical bore: cut-exposed faces must carry flipped
  // normals such that inward probes land inside and outward probes outside.
  SolidModel m = testutil::make_box({-0.5, -0.5, 0.0}, {0.5, 0.5, 1.0});
  const SolidModel bore = testutil::make_cylinder({0.0, 0.0}, 0.25, -0.5, 1.5);
  m.solids.push_back(bore.solids[0]);
  m.ops.push_back(BoolOp::Cut);

  const PointCloud cloud = sample_surface(m, 4000, 24);
  const double eps = 1e-4;
  std::size_t sound = 0;
  bool bore_face_seen = false;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    const Vec3& nrm = cloud.normals[i];
    if (contains(m, p - nrm * eps) && !contains(m, p + nrm * eps)) ++sound;
    if (std::hypot(p.x, p.y) < 0.26) bore_face_seen = true;
  }
  CHECK(static_cast<double>(sound) / static_cast<double>(cloud.size()) >= 0.99);
  CHECK(bore_face_seen);
}

TEST_CASE("sample_surface determinism: same seed, bit-identical clouds") {
  Rng rng(77);
  const CadProgram p = testutil::make_valid_program(12, rng);
  const SolidModel m = compile(p);
  const PointCloud a = sample_surface(m, 1000, 99);
  const PointCloud b = sample_surface(m, 1000, 99);
  REQUIRE(a.size() == b.size());
  CHECK(std::memcmp(a.points.data(), b.points.data(), a.size() * sizeof(Vec3)) == 0);
  CHECK(std::memcmp(a.normals.data(), b.normals.data(), a.size() * sizeof(Vec3)) == 0);
  const PointCloud c = sample_surface(m, 1000, 100);
  CHECK(std::memcmp(a.points.data(), c.points.data(), a.size() * sizeof(Vec3)) != 0);
}

TEST_CASE("translation equivariance for single extrusions") {
  const SolidModel base = testutil::make_cylinder({0.1, -0.2}, 0.3, 0.0, 0.6);
  SolidModel shifted = base;
  const Vec3 delta{0.25, -0.125, 0.5};
  shifted.solids[0].plane.origin = shifted.solids[0].plane.origin + delta;
  shifted.bbox = Box3{};
  shifted.bbox.expand(base.bbox.lo + delta);
  shifted.bbox.expand(base.bbox.hi + delta);

  const PointCloud a = sample_surface(base, 500, 31);
  const PointCloud b = sample_surface(shifted, 500, 31);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec3 moved = a.points[i] + delta;
    CHECK(norm(moved - b.points[i]) < 1e-12);
    CHECK(norm(a.normals[i] - b.normals[i]) < 1e-12);
  }
}

TEST_CASE("check_self_intersection: square, bowtie, square with circular hole") {
  auto square_profile = [](double side) {
    Profile pr;
    Loop loop;
    const Vec2 a{0, 0}, b{side, 0}, c{side, side}, d{0, side};
    loop.curves.push_back(LineSeg{a, b});
    loop.curves.push_back(LineSeg{b, c});
    loop.curves.push_back(LineSeg{c, d});
    loop.curves.push_back(LineSeg{d, a});
    pr.loops.push_back(loop);
    return pr;
  };
  CHECK_FALSE(check_self_intersection(square_profile(0.5)));

  Profile bowtie;
  {
    Loop loop;
    const Vec2 a{0, 0}, b{0.5, 0.5}, c{0.5, 0}, d{0, 0.5};
    loop.curves.push_back(LineSeg{a, b});
    loop.curves.push_back(LineSeg{b, c});
    loop.curves.push_back(LineSeg{c, d});
    loop.curves.push_back(LineSeg{d, a});
    bowtie.loops.push_back(loop);
  }
  CHECK(check_self_intersection(bowtie));

  Profile with_hole = square_profile(0.5);
  {
    Loop hole;
    hole.curves.push_back(CircleSeg{{0.25, 0.25}, 0.1});
    with_hole.loops.push_back(hole);
  }
  CHECK_FALSE(check_self_intersection(with_hole));
  // Dense-sampling oracle: no two points of distinct loops coincide.
  double min_gap = 1e300;
  for (int i = 0; i < 400; ++i) {
    const Vec2 on_square =
        curve_point(with_hole.loops[0].curves[i % 4], (i / 4) / 100.0);
    for (int j = 0; j < 400; ++j) {
      const Vec2 on_circle = curve_point(with_hole.loops[1].curves[0], j / 400.0);
      min_gap = std::min(min_gap, norm(on_square - on_circle));
    }
  }
  CHECK(min_gap > 1e-3);

  Profile touching = square_profile(0.5);
  {
    Loop hole;
    hole.curves.push_back(CircleSeg{{0.25, 0.25}, 0.25});  // tangent to all sides
    touching.loops.push_back(hole);
  }
  CHECK(check_self_intersection(touching));
}

TEST_CASE("check_self_intersection: adjacent overlap beyond shared endpoint") {
  Profile pr;
  Loop loop;
  // The second segment backtracks along the first.
  loop.curves.push_back(LineSeg{{0, 0}, {0.5, 0}});
  loop.curves.push_back(LineSeg{{0.5, 0}, {0.2, 0}});
  loop.curves.push_back(LineSeg{{0.2, 0}, {0, 0}});
  pr.loops.push_back(loop);
  CHECK(check_self_intersection(pr));
}

TEST_CASE("is_valid: the three verdicts") {
  CHECK(geom::is_valid(circle_extrude_program()).valid());

  // Bowtie profile extrude: compiles but self-intersects.
  CadProgram bowtie;
  bowtie.commands.push_back(Command::sol());
  bowtie.commands.push_back(Command::line(192, 192));
  bowtie.commands.push_back(Command::line(192, 128));
  bowtie.commands.push_back(Command::line(128, 192));
  bowtie.commands.push_back(Command::line(128, 128));
  bowtie.commands.push_back(Command::extrude(128, 128, 128, 128, 128, 128, 128, 160,
                                             128, BoolOp::NewBody,
                                             ExtentType::OneSided));
  const auto bowtie_report = geom::is_valid(bowtie);
  CHECK(bowtie_report.compiles);
  CHECK_FALSE(bowtie_report.self_intersection_free);

  // A Cut A: compiles, clean profiles, but nothing remains to sample.
  CadProgram cut_self;
  testutil::append_circle_block(&cut_self.commands, 128, 128, 48, 128, 176,
                                BoolOp::NewBody);
  testutil::append_circle_block(&cut_self.commands, 128, 128, 48, 128, 176, BoolOp::Cut);
  const auto cut_report = geom::is_valid(cut_self);
  CHECK(cut_report.compiles);
  CHECK(cut_report.self_intersection_free);
  CHECK_FALSE(cut_report.samplable);
  CHECK_FALSE(cut_report.valid());

  // Grammar failures surface as not-compiling.
  CadProgram bad;
  bad.commands.push_back(Command::line(10, 10));
  CHECK_FALSE(geom::is_valid(bad).compiles);
}

TEST_CASE("plane frames are orthonormal for arbitrary orientation angles") {
  Rng rng(55);
  for (int i = 0; i < 200; ++i) {
    const double theta = rng.uniform(-kPi, kPi);
    const double phi = rng.uniform(-kPi, kPi);
    const double gamma = rng.uniform(-kPi, kPi);
    const PlaneFrame f = make_plane_frame({0, 0, 0}, theta, phi, gamma);
    CHECK(std::abs(norm(f.x_axis) - 1.0) < 1e-9);
    CHECK(std::abs(norm(f.y_axis) - 1.0) < 1e-9);
    CHECK(std::abs(norm(f.normal) - 1.0) < 1e-9);
    CHECK(std::abs(dot(f.x_axis, f.y_axis)) < 1e-9);
    CHECK(std::abs(dot(f.x_axis, f.normal)) < 1e-9);
    CHECK(std::abs(dot(f.y_axis, f.normal)) < 1e-9);
  }
}

TEST_CASE("profile areas match closed forms") {
  Profile square;
  {
    Loop loop;
    loop.curves.push_back(LineSeg{{0, 0}, {0.5, 0}});
    loop.curves.push_back(LineSeg{{0.5, 0}, {0.5, 0.5}});
    loop.curves.push_back(LineSeg{{0.5, 0.5}, {0, 0.5}});
    loop.curves.push_back(LineSeg{{0, 0.5}, {0, 0}});
    square.loops.push_back(loop);
  }
  CHECK(profile_area(square) == doctest::Approx(0.25).epsilon(1e-12));

  Profile disc;
  {
    Loop loop;
    loop.curves.push_back(CircleSeg{{0.3, -0.1}, 0.25});
    disc.loops.push_back(loop);
  }
  CHECK(profile_area(disc) == doctest::Approx(kPi * 0.25 * 0.25).epsilon(1e-12));

  Profile annulus = square;
  {
    Loop hole;
    hole.curves.push_back(CircleSeg{{0.25, 0.25}, 0.1});
    annulus.loops.push_back(hole);
  }
  CHECK(profile_area(annulus) ==
        doctest::Approx(0.25 - kPi * 0.01).epsilon(1e-12));

  // Half-disc via line + semicircular arc.
  Profile half_disc;
  {
    Loop loop;
    loop.curves.push_back(LineSeg{{0, 0}, {0.5, 0}});
    geom::ArcSeg arc;
    arc.center = {0.25, 0.0};
    arc.radius = 0.25;
    arc.start_angle = 0.0;
    arc.sweep = kPi;
    arc.ccw = true;
    arc.start = {0.5, 0.0};
    arc.end = {0.0, 0.0};
    loop.curves.push_back(arc);
    half_disc.loops.push_back(loop);
  }
  CHECK(profile_area(half_disc) ==
        doctest::Approx(kPi * 0.25 * 0.25 / 2.0).epsilon(1e-12));
}

TEST_CASE("arc construction from commands matches the chord/sweep closed form") {
  // Lens block: line to (0.5, 0), ccw semicircle back to the origin.
  CadProgram p;
  testutil::append_lens_block(&p.commands, 128, 160, BoolOp::NewBody);
  const SolidModel m = compile(p);
  const auto& loop = m.solids[0].profile.loops[0];
  REQUIRE(loop.curves.size() == 2);
  const auto& arc = std::get<ArcSeg>(loop.curves[1]);
  CHECK(arc.radius == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(arc.center.x == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(arc.center.y == doctest::Approx(0.0).epsilon(1e-9));
  // Midpoint of the ccw semicircle from (0.5, 0) to (0, 0) bulges upward.
  const Vec2 mid = arc.point_at(0.5);
  CHECK(mid.x == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(mid.y == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("validity fixture sweep: every generated length is fully valid") {
  Rng rng(2024);
  for (std::size_t len = 3; len <= 59; len += 7) {
    const CadProgram p = testutil::make_valid_program(len, rng);
    REQUIRE(sequence_length(p) == len);
    REQUIRE(well_formed(p));
    CHECK(geom::is_valid(p).valid());
  }
}
