#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "scaledyn/scaledyn.h"

namespace {

struct Kepler {
  sd_kepler* handle = nullptr;
  explicit Kepler(const sd_kepler_params& p) { REQUIRE(sd_kepler_create(&p, &handle) == SD_OK); }
  ~Kepler() { sd_kepler_destroy(handle); }
};

sd_kepler_params defaults() {
  sd_kepler_params p;
  sd_kepler_params_default(&p);
  return p;
}

}  // namespace

TEST_CASE("version, status strings and defaults") {
  CHECK(std::string(sd_version()).find('.') != std::string::npos);
  CHECK(std::string(sd_status_string(SD_OK)) == "ok");
  for (int s = SD_ERR_NULL_POINTER; s <= SD_ERR_INTERNAL; ++s)
    CHECK(std::strlen(sd_status_string(static_cast<sd_status>(s))) > 0);
  const auto p = defaults();
  CHECK(p.G == 1.0);
  CHECK(p.M == 1.0);
  CHECK(p.m == 1.0);
  CHECK(p.lambda == 1.0);
  CHECK(p.has_kconst == 0);
  CHECK(p.eta == -1);
}

TEST_CASE("exponential integral") {
  double v = 0.0;
  CHECK(sd_ei(1.0, &v) == SD_OK);
  CHECK(v == doctest::Approx(1.8951178163559368).epsilon(1e-15));
  CHECK(sd_ei(0.0, &v) == SD_ERR_DOMAIN);
  CHECK(std::string(sd_last_error()).size() > 0);
  CHECK(sd_ei(1.0, nullptr) == SD_ERR_NULL_POINTER);
}

TEST_CASE("system creation and info") {
  const Kepler sys(defaults());
  sd_kepler_info info;
  REQUIRE(sd_kepler_info_get(sys.handle, &info) == SD_OK);
  CHECK(info.k == 1.0);
  CHECK(info.r0 == 2.0);
  CHECK(info.e0_paper == 0.5);
  CHECK(info.e0_oracle == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(info.kconst == 1.0);
  CHECK(info.q == 1.0);
  CHECK(info.orbital_speed == 0.7071067811865476);
  CHECK(info.linear_schrodinger == 1);

  auto bad = defaults();
  bad.m = -1.0;
  sd_kepler* h = nullptr;
  CHECK(sd_kepler_create(&bad, &h) == SD_ERR_INVALID_ARGUMENT);
  CHECK(h == nullptr);
  bad = defaults();
  bad.eta = 3;
  CHECK(sd_kepler_create(&bad, &h) == SD_ERR_INVALID_ARGUMENT);
  CHECK(sd_kepler_create(nullptr, &h) == SD_ERR_NULL_POINTER);
  CHECK(sd_kepler_info_get(nullptr, &info) == SD_ERR_NULL_POINTER);
  sd_kepler_destroy(nullptr);
}

TEST_CASE("rotation curve rows") {
  const Kepler sys(defaults());
  const double r[] = {1.0, 2.0, 4.0};
  sd_rotation_row rows[3];
  REQUIRE(sd_rotation_curve(sys.handle, r, 3, rows) == SD_OK);
  CHECK(rows[0].v_kepler == 1.0);
  CHECK(rows[2].v_kepler == 0.5);
  for (const auto& row : rows) {
    CHECK(row.v_scale == 0.7071067811865476);
    CHECK(row.vsq_total == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(row.u_over_m + row.uadd_over_m == doctest::Approx(row.vsq_total).epsilon(1e-15));
  }
  CHECK(rows[1].uadd_over_m == 0.0);
  const double unsorted[] = {2.0, 1.0};
  CHECK(sd_rotation_curve(sys.handle, unsorted, 2, rows) == SD_ERR_INVALID_ARGUMENT);
  CHECK(sd_rotation_curve(sys.handle, nullptr, 0, nullptr) == SD_OK);
  CHECK(sd_rotation_curve(sys.handle, nullptr, 2, rows) == SD_ERR_NULL_POINTER);
}

TEST_CASE("ground states") {
  const Kepler lin(defaults());
  sd_ground_state* gs = nullptr;
  REQUIRE(sd_ground_state_create(lin.handle, nullptr, &gs) == SD_OK);
  sd_ground_state_info info;
  REQUIRE(sd_ground_state_info_get(gs, &info) == SD_OK);
  CHECK(info.kind == SD_GROUND_STATE_LINEAR);
  CHECK(info.c1 == 1.0);
  CHECK(info.c2 == 0.0);
  CHECK(std::isinf(info.r_upper));
  sd_ground_state_row row;
  REQUIRE(sd_ground_state_evaluate(gs, 2.0, &row) == SD_OK);
  CHECK(row.sqrt_p == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(std::abs(row.u_add_density - row.u_add_closed) < 1e-13);
  CHECK(sd_ground_state_evaluate(gs, -1.0, &row) == SD_ERR_DOMAIN);
  const double r[] = {0.5, 1.0, 10.0};
  sd_virial_row vrows[3];
  REQUIRE(sd_virial_balance(gs, r, 3, vrows) == SD_OK);
  for (const auto& v : vrows) CHECK(std::abs(v.residual) < 1e-10);
  sd_ground_state_destroy(gs);

  auto p = defaults();
  p.has_kconst = 1;
  p.kconst = 2.0;
  const Kepler nl(p);
  REQUIRE(sd_ground_state_create(nl.handle, nullptr, &gs) == SD_OK);
  REQUIRE(sd_ground_state_info_get(gs, &info) == SD_OK);
  CHECK(info.kind == SD_GROUND_STATE_NONLINEAR);
  CHECK(info.r_upper == doctest::Approx(0.673577625534296).epsilon(1e-12));
  CHECK(sd_ground_state_evaluate(gs, 1.0, &row) == SD_ERR_DOMAIN);
  REQUIRE(sd_ground_state_evaluate(gs, 0.3, &row) == SD_OK);
  CHECK(std::abs(row.u_add_density - row.u_add_closed) < 1e-4);
  sd_ground_state_destroy(gs);

  const sd_ground_state_options bad{1, -1.0, 0.0};
  gs = nullptr;
  CHECK(sd_ground_state_create(nl.handle, &bad, &gs) == SD_ERR_DOMAIN);
  CHECK(gs == nullptr);
}

TEST_CASE("residual report") {
  const Kepler sys(defaults());
  const double r[] = {0.5, 1.0, 2.0, 8.0};
  sd_report* rep = nullptr;
  REQUIRE(sd_residual_report_create(sys.handle, r, 4, 1.0, &rep) == SD_OK);
  size_t n = 0, radii = 0;
  REQUIRE(sd_residual_report_size(rep, &n) == SD_OK);
  REQUIRE(sd_residual_report_radii(rep, &radii) == SD_OK);
  CHECK(radii == 4);
  CHECK(n > 10);
  int passed = 0;
  REQUIRE(sd_residual_report_passed(rep, &passed) == SD_OK);
  CHECK(passed == 1);
  bool seen_radial = false;
  for (size_t i = 0; i < n; ++i) {
    sd_residual_entry e;
    REQUIRE(sd_residual_report_entry(rep, i, &e) == SD_OK);
    CHECK(e.passed == 1);
    CHECK(e.max_abs_residual < e.tolerance);
    if (std::string(e.name) == "radial") seen_radial = true;
  }
  CHECK(seen_radial);
  sd_residual_entry e;
  CHECK(sd_residual_report_entry(rep, n, &e) == SD_ERR_INDEX);
  sd_residual_report_destroy(rep);

  REQUIRE(sd_residual_report_create(sys.handle, r, 4, 1.1, &rep) == SD_OK);
  REQUIRE(sd_residual_report_passed(rep, &passed) == SD_OK);
  CHECK(passed == 0);
  sd_residual_report_destroy(rep);
  CHECK(sd_residual_report_create(sys.handle, r, 0, 1.0, &rep) == SD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("error text is per thread") {
  double v;
  REQUIRE(sd_ei(0.0, &v) == SD_ERR_DOMAIN);
  const std::string main_error = sd_last_error();
  std::string other;
  std::thread worker([&] {
    sd_kepler* h = nullptr;
    sd_kepler_params p;
    sd_kepler_params_default(&p);
    p.lambda = 0.0;
    sd_kepler_create(&p, &h);
    other = sd_last_error();
  });
  worker.join();
  CHECK(sd_last_error() == main_error);
  CHECK(other != main_error);
}
