#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cadseq/command.hpp"
#include "cadseq/geom/solid.hpp"
#include "cadseq/quantize.hpp"
#include "cadseq/rng.hpp"
#include "cadseq/synth/manifest.hpp"

namespace testutil {

using namespace cadseq;

// Quantized grid constants: value 128 dequantizes to coordinate 0.
inline constexpr int kQ0 = 128;

// --- Geometrically valid building blocks (disjoint slabs stacked in z) ---

// SOL + Circle + Extrude: 3 commands.
inline void append_circle_block(std::vector<Command>* cmds, int cx, int cy, int r,
                                int pz, int e1, BoolOp op) {
  cmds->push_back(Command::sol());
  cmds->push_back(Command::circle(cx, cy, r));
  cmds->push_back(Command::extrude(kQ0, kQ0, kQ0, kQ0, kQ0, pz, 128, e1, 128, op,
                                   ExtentType::OneSided));
}

// SOL + Line + Arc + Extrude: 4 commands (half-disc profile).
inline void append_lens_block(std::vector<Command>* cmds, int pz, int e1, BoolOp op) {
  cmds->push_back(Command::sol());
  cmds->push_back(Command::line(192, kQ0));              // (0.5, 0)
  cmds->push_back(Command::arc(kQ0, kQ0, 128, true));    // half circle back to origin
  cmds->push_back(Command::extrude(kQ0, kQ0, kQ0, kQ0, kQ0, pz, 128, e1, 128, op,
                                   ExtentType::OneSided));
}

// SOL + 3 Lines + Extrude: 5 commands (right triangle at the origin).
inline void append_triangle_block(std::vector<Command>* cmds, int pz, int e1,
                                  BoolOp op) {
  cmds->push_back(Command::sol());
  cmds->push_back(Command::line(192, kQ0));  // (0.5, 0)
  cmds->push_back(Command::line(kQ0, 192));  // (0, 0.5)
  cmds->push_back(Command::line(kQ0, kQ0));  // close at the origin
  cmds->push_back(Command::extrude(kQ0, kQ0, kQ0, kQ0, kQ0, pz, 128, e1, 128, op,
                                   ExtentType::OneSided));
}

// A compile-valid, self-intersection-free, samplable program of the exact
// requested sequence length (3 <= len <= 59). Blocks of sizes {3, 4, 5} are
// stacked on well-separated z planes and joined; per-block circle parameters
// vary with the rng so two programs of equal length differ.
inline CadProgram make_valid_program(std::size_t length, Rng& rng) {
  std::vector<std::size_t> blocks;
  std::size_t remaining = length;
  while (remaining >= 6) {
    blocks.push_back(3);
    remaining -= 3;
  }
  blocks.push_back(remaining);  // 3, 4 or 5

  CadProgram p;
  int k = 0;
  for (const std::size_t block : blocks) {
    const int pz = 24 + 8 * k;
    const int e1 = 132;  // thickness 0.03125, below the 0.0625 plane gap
    const BoolOp op = k == 0 ? BoolOp::NewBody : BoolOp::Join;
    switch (block) {
      case 3:
        append_circle_block(&p.commands, 96 + static_cast<int>(rng.uniform_int(0, 64)),
                            96 + static_cast<int>(rng.uniform_int(0, 64)),
                            16 + static_cast<int>(rng.uniform_int(0, 32)), pz, e1, op);
        break;
      case 4:
        append_lens_block(&p.commands, pz, e1, op);
        break;
      case 5:
        append_triangle_block(&p.commands, pz, e1, op);
        break;
    }
    ++k;
  }
  return p;
}

// A grammar-valid program with arbitrary in-range parameters (loops need not
// close); exercises the codec, not the geometry kernel.
inline CadProgram make_random_wellformed(Rng& rng, std::size_t max_len = 59) {
  CadProgram p;
  const auto q = [&rng]() { return static_cast<int>(rng.uniform_int(0, 255)); };
  while (true) {
    // One sketch/extrude group per iteration; stop while room remains.
    std::vector<Command> group;
    const int loops = static_cast<int>(rng.uniform_int(1, 2));
    for (int l = 0; l < loops; ++l) {
      group.push_back(Command::sol());
      if (rng.bernoulli(0.3)) {
        group.push_back(Command::circle(q(), q(), q()));
      } else {
        const int curves = static_cast<int>(rng.uniform_int(1, 4));
        for (int c = 0; c < curves; ++c) {
          if (rng.bernoulli(0.5)) {
            group.push_back(Command::line(q(), q()));
          } else {
            group.push_back(Command::arc(q(), q(), q(), rng.bernoulli(0.5)));
          }
        }
      }
    }
    group.push_back(Command::extrude(
        q(), q(), q(), q(), q(), q(), q(), q(), q(),
        static_cast<BoolOp>(p.commands.empty() ? 0 : rng.uniform_int(0, 3)),
        static_cast<ExtentType>(rng.uniform_int(0, 2))));
    if (p.commands.size() + group.size() > max_len) {
      if (p.commands.empty()) continue;  // a single oversized group: redraw
      break;
    }
    p.commands.insert(p.commands.end(), group.begin(), group.end());
    if (rng.bernoulli(0.4) || p.commands.size() + 3 > max_len) break;
  }
  return p;
}

// Direct SolidModel construction (no quantization) for analytic fixtures.

inline geom::SolidModel make_box(const Vec3& lo, const Vec3& hi) {
  geom::ExtrudedSolid solid;
  geom::Loop loop;
  const Vec2 a{lo.x, lo.y}, b{hi.x, lo.y}, c{hi.x, hi.y}, d{lo.x, hi.y};
  loop.curves.push_back(geom::LineSeg{a, b});
  loop.curves.push_back(geom::LineSeg{b, c});
  loop.curves.push_back(geom::LineSeg{c, d});
  loop.curves.push_back(geom::LineSeg{d, a});
  solid.profile.loops.push_back(loop);
  solid.plane.origin = {0.0, 0.0, 0.0};
  solid.plane.x_axis = {1.0, 0.0, 0.0};
  solid.plane.y_axis = {0.0, 1.0, 0.0};
  solid.plane.normal = {0.0, 0.0, 1.0};
  solid.scale = 1.0;
  solid.h_lo = lo.z;
  solid.h_hi = hi.z;

  geom::SolidModel model;
  model.solids.push_back(solid);
  model.ops.push_back(BoolOp::NewBody);
  model.bbox.expand(lo);
  model.bbox.expand(hi);
  return model;
}

inline geom::SolidModel make_cylinder(const Vec2& center, double radius, double z_lo,
                                      double z_hi) {
  geom::ExtrudedSolid solid;
  geom::Loop loop;
  loop.curves.push_back(geom::CircleSeg{center, radius});
  solid.profile.loops.push_back(loop);
  solid.plane.origin = {0.0, 0.0, 0.0};
  solid.plane.x_axis = {1.0, 0.0, 0.0};
  solid.plane.y_axis = {0.0, 1.0, 0.0};
  solid.plane.normal = {0.0, 0.0, 1.0};
  solid.scale = 1.0;
  solid.h_lo = z_lo;
  solid.h_hi = z_hi;

  geom::SolidModel model;
  model.solids.push_back(solid);
  model.ops.push_back(BoolOp::NewBody);
  model.bbox.expand({center.x - radius, center.y - radius, z_lo});
  model.bbox.expand({center.x + radius, center.y + radius, z_hi});
  return model;
}

// Overlapping extrusions with random boolean ops, for membership-algebra
// checks. Compiles by construction; the result may be empty.
inline CadProgram make_csg_program(Rng& rng, int min_extrusions = 2,
                                   int max_extrusions = 4) {
  CadProgram p;
  const int count =
      static_cast<int>(rng.uniform_int(min_extrusions, max_extrusions));
  for (int i = 0; i < count; ++i) {
    const int shape = static_cast<int>(rng.uniform_int(0, 2));
    p.commands.push_back(Command::sol());
    if (shape == 0) {
      p.commands.push_back(
          Command::circle(112 + static_cast<int>(rng.uniform_int(0, 32)),
                          112 + static_cast<int>(rng.uniform_int(0, 32)),
                          24 + static_cast<int>(rng.uniform_int(0, 40))));
    } else if (shape == 1) {
      const int w = 150 + static_cast<int>(rng.uniform_int(0, 70));
      const int h = 150 + static_cast<int>(rng.uniform_int(0, 70));
      p.commands.push_back(Command::line(w, kQ0));
      p.commands.push_back(Command::line(w, h));
      p.commands.push_back(Command::line(kQ0, h));
      p.commands.push_back(Command::line(kQ0, kQ0));
    } else {
      p.commands.push_back(Command::line(150 + static_cast<int>(rng.uniform_int(0, 70)), kQ0));
      p.commands.push_back(Command::line(kQ0, 150 + static_cast<int>(rng.uniform_int(0, 70))));
      p.commands.push_back(Command::line(kQ0, kQ0));
    }
    // Orientations drawn from the near-discrete grid (0, +-90 degrees), plane
    // origins close enough that the slabs overlap.
    const int angles[3] = {64, 128, 192};
    const BoolOp op =
        i == 0 ? BoolOp::NewBody
               : static_cast<BoolOp>(rng.uniform_int(1, 3));
    p.commands.push_back(Command::extrude(
        angles[rng.uniform_int(0, 2)], angles[rng.uniform_int(0, 2)],
        angles[rng.uniform_int(0, 2)], 112 + static_cast<int>(rng.uniform_int(0, 32)),
        112 + static_cast<int>(rng.uniform_int(0, 32)),
        112 + static_cast<int>(rng.uniform_int(0, 32)), 128,
        160 + static_cast<int>(rng.uniform_int(0, 48)), 128, op,
        ExtentType::OneSided));
  }
  return p;
}

// --- Independent membership oracle -------------------------------------
// Classifies by casting a vertical (+y) ray in the sketch plane, against the
// library's horizontal-ray implementation, and folds the boolean expression
// explicitly. Shares only the plane projection arithmetic.

inline bool oracle_point_in_profile(const geom::Profile& pr, const Vec2& q) {
  int crossings = 0;
  auto circle_hits = [&](const Vec2& c, double r, const geom::ArcSeg* span) {
    const double dx = q.x - c.x;
    const double disc = r * r - dx * dx;
    if (disc <= 0.0) return;
    const double sq = std::sqrt(disc);
    for (const double sign : {-1.0, 1.0}) {
      const double y = c.y + sign * sq;
      if (y <= q.y) continue;
      if (span != nullptr) {
        const double angle = std::atan2(sign * sq, dx);
        if (!span->contains_angle(angle)) continue;
      }
      ++crossings;
    }
  };
  for (const auto& loop : pr.loops) {
    for (const auto& curve : loop.curves) {
      if (const auto* l = std::get_if<geom::LineSeg>(&curve)) {
        const bool a_right = l->a.x > q.x;
        const bool b_right = l->b.x > q.x;
        if (a_right == b_right) continue;
        const double t = (q.x - l->a.x) / (l->b.x - l->a.x);
        if (l->a.y + t * (l->b.y - l->a.y) > q.y) ++crossings;
      } else if (const auto* a = std::get_if<geom::ArcSeg>(&curve)) {
        circle_hits(a->center, a->radius, a);
      } else {
        const auto& c = std::get<geom::CircleSeg>(curve);
        circle_hits(c.center, c.radius, nullptr);
      }
    }
  }
  return crossings % 2 == 1;
}

inline bool oracle_primitive_inside(const geom::ExtrudedSolid& s, const Vec3& q) {
  const Vec3 d = q - s.plane.origin;
  const double h = dot(d, s.plane.normal);
  if (h < s.h_lo || h > s.h_hi) return false;
  const Vec2 uv{dot(d, s.plane.x_axis) / s.scale, dot(d, s.plane.y_axis) / s.scale};
  return oracle_point_in_profile(s.profile, uv);
}

inline bool oracle_contains(const geom::SolidModel& m, const Vec3& q) {
  bool acc = false;
  for (std::size_t i = 0; i < m.solids.size(); ++i) {
    const bool inside = oracle_primitive_inside(m.solids[i], q);
    if (m.ops[i] == BoolOp::NewBody || m.ops[i] == BoolOp::Join) {
      acc = acc || inside;
    } else if (m.ops[i] == BoolOp::Cut) {
      acc = acc && !inside;
    } else {
      acc = acc && inside;
    }
  }
  return acc;
}

// A small balanced-ish dataset fixture covering the given lengths across all
// three splits. counts_per_length entries may exceed or undershoot quotas.
inline synth::ProgramSet make_fixture_dataset(const std::vector<std::size_t>& lengths,
                                              std::size_t per_split_per_length,
                                              std::uint64_t seed) {
  synth::ProgramSet set;
  Rng rng(seed);
  for (const synth::Split split :
       {synth::Split::Train, synth::Split::Val, synth::Split::Test}) {
    for (const std::size_t len : lengths) {
      for (std::size_t i = 0; i < per_split_per_length; ++i) {
        synth::ManifestEntry e;
        e.id = std::string(synth::split_name(split)) + "-" + std::to_string(len) +
               "-" + std::to_string(i);
        e.length = len;
        e.split = split;
        e.provenance = synth::Provenance::Real;
        CadProgram prog = make_valid_program(len, rng);
        prog.source_id = e.id;
        set.programs.emplace(e.id, std::move(prog));
        set.manifest.entries.push_back(std::move(e));
      }
    }
  }
  return set;
}

}  // namespace testutil
