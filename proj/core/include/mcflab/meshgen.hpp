#pragma once

#include <cstdint>
#include <string>

#include "mcflab/analytic.hpp"
#include "mcflab/mesh.hpp"

namespace mcflab {

// Test-surface generation. Compact models are closed; truncated noncompact
// models (tube, disk, grim reaper patch, bowl cap) carry boundary rims that
// downstream statistics exclude behind a collar.
struct MeshGenSpec {
  std::string kind = "icosphere";  // icosphere|tube|disk|grim_reaper|bowl
  double radius = 2.0;             // icosphere / tube / disk
  double length = 10.0;            // tube truncation length
  int subdiv = 4;                  // icosphere subdivision level
  int relax_iters = 0;             // tangential relaxation sweeps (sphere)
  int res = 32;                    // angular / grid resolution
  double u_max = 1.2;              // grim reaper: |x1| extent (< pi/2)
  double width = 4.0;              // grim reaper: x2 extent
  double r_max = 4.0;              // bowl cap radius
  double bowl_step = 1e-3;         // bowl profile integration step
  double perturbation = 0.0;       // normal displacement amplitude
  std::uint64_t seed = 0;
  double wavelength_min = 1.0;  // band limits of the perturbation field
  double wavelength_max = 2.0;
};

TriangleMesh gen_mesh(const MeshGenSpec& spec);

TriangleMesh gen_icosphere(double radius, int subdiv, int relax_iters = 0);
TriangleMesh gen_tube(double radius, double length, int res);  // axis e3
TriangleMesh gen_disk(double radius, int res);                 // plane x3=0
TriangleMesh gen_grim_reaper_patch(double u_max, double width, int res);
TriangleMesh gen_bowl_cap(const BowlProfile& profile, double r_max, int res);

// Displaces vertices along area-weighted normals by amplitude * f(x) where f
// is a seeded band-limited cosine field with |f| <= 1.
TriangleMesh perturb_along_normals(const TriangleMesh& mesh, double amplitude,
                                   std::uint64_t seed,
                                   double wavelength_min = 1.0,
                                   double wavelength_max = 2.0);

}  // namespace mcflab
