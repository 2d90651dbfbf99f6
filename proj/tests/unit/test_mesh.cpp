#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qnepb/mesh.hpp"

using namespace qnepb;

TEST_CASE("uniform 1D mesh volumes and dual volumes") {
  const MacMesh m = build_mesh(1, DomainBounds{{0.0, 0.0}, {1.0, 1.0}}, {4, 1});
  REQUIRE(m.num_cells() == 4);
  REQUIRE(m.num_faces(0) == 5);
  for (int k = 0; k < 4; ++k) CHECK(m.volume(k) == doctest::Approx(0.25));
  CHECK(m.dual_volume(0, 0) == doctest::Approx(0.125));
  CHECK(m.dual_volume(0, 4) == doctest::Approx(0.125));
  for (int f = 1; f < 4; ++f) CHECK(m.dual_volume(0, f) == doctest::Approx(0.25));
  CHECK(m.is_boundary(0, 0));
  CHECK(!m.is_boundary(0, 2));
  CHECK(m.minus_cell(0, 2) == 1);
  CHECK(m.plus_cell(0, 2) == 2);
}

TEST_CASE("cell volumes sum to the domain length") {
  const double L = 2.0 * std::numbers::pi;
  const MacMesh m = build_mesh(1, DomainBounds{{0.0, 0.0}, {L, 1.0}}, {100, 1});
  double s = 0.0;
  for (int k = 0; k < m.num_cells(); ++k) s += m.volume(k);
  CHECK(std::abs(s - L) <= 1e-14);
}

TEST_CASE("2D face count and face measure") {
  const MacMesh m = build_mesh(2, DomainBounds{{-1.0, -1.0}, {1.0, 1.0}}, {200, 200});
  CHECK(m.num_faces(0) + m.num_faces(1) == 2 * 200 * 201);
  CHECK(m.face_area(0, m.face(0, 3, 7)) == doctest::Approx(0.01));
  CHECK(m.face_area(1, m.face(1, 3, 7)) == doctest::Approx(0.01));
  CHECK(m.domain_measure() == doctest::Approx(4.0));
}

TEST_CASE("dual volumes tile the domain on each axis") {
  const MacMesh m = build_mesh({0.0, 0.1, 0.35, 0.5, 1.0}, {0.0, 0.4, 1.0});
  for (int axis = 0; axis < 2; ++axis) {
    double s = 0.0;
    for (int f = 0; f < m.num_faces(axis); ++f) s += m.dual_volume(axis, f);
    CHECK(s == doctest::Approx(m.domain_measure()));
  }
}

TEST_CASE("dual average") {
  const MacMesh m = build_mesh(1, DomainBounds{{0.0, 0.0}, {1.0, 1.0}}, {2, 1});
  const FaceField c = dual_average({3.0, 3.0}, m);
  for (double v : c[0]) CHECK(v == doctest::Approx(3.0));
  const FaceField d = dual_average({1.0, 3.0}, m);
  CHECK(d[0][1] == doctest::Approx(2.0));
  CHECK(d[0][0] == doctest::Approx(1.0));
  CHECK(d[0][2] == doctest::Approx(3.0));
}

TEST_CASE("dual average weights half volumes on graded meshes") {
  const MacMesh m = build_mesh({0.0, 0.2, 1.0});
  const FaceField d = dual_average({1.0, 2.0}, m);
  CHECK(d[0][1] == doctest::Approx((0.1 * 1.0 + 0.4 * 2.0) / 0.5));
}

TEST_CASE("malformed meshes are rejected") {
  CHECK_THROWS_AS(build_mesh(1, DomainBounds{{0.0, 0.0}, {1.0, 1.0}}, {0, 1}), InputError);
  CHECK_THROWS_AS(build_mesh(1, DomainBounds{{1.0, 0.0}, {0.0, 1.0}}, {4, 1}), InputError);
  CHECK_THROWS_AS(build_mesh({0.0, 0.5, 0.5, 1.0}), InputError);
}

TEST_CASE("boundary conditions") {
  CHECK(bc_kind_from_string(to_string(BcKind::dirichlet)) == BcKind::dirichlet);
  CHECK_THROWS_AS(bc_kind_from_string("robin"), InputError);
  BoundarySpec b;
  b.velocity = VariableBc::all(BcKind::periodic);
  CHECK_THROWS_AS(b.validate(1), InputError);
  BoundarySpec p;
  p.potential[Side::xmin].kind = BcKind::periodic;
  CHECK_THROWS_AS(p.validate(1), InputError);
  p.potential[Side::xmax].kind = BcKind::periodic;
  CHECK_NOTHROW(p.validate(1));
}
