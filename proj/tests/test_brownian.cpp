#include "doctest.h"

#include <cmath>

#include "wsq/brownian.hpp"
#include "wsq/errors.hpp"

using namespace wsq;
using namespace wsq::circle;

TEST_SUITE("brownian") {

TEST_CASE("constant function has zero energy") {
  BrownianConfig cfg;
  cfg.paths = 500;
  cfg.dt = 1e-3;
  const auto e = brownian_energy(CircleFunction::constant(2.0), cfg);
  CHECK(e.estimate == 0.0);
  CHECK(e.std_error == 0.0);
  CHECK(e.mean_exit_time > 0.0);
}

TEST_CASE("preconditions") {
  BrownianConfig cfg;
  cfg.dt = 2e-3;
  CHECK_THROWS_AS(brownian_energy(closed_form("cos"), cfg), DomainError);
  cfg.dt = 1e-3;
  cfg.paths = 0;
  CHECK_THROWS_AS(brownian_energy(closed_form("cos"), cfg), UsageError);
}

TEST_CASE("exit time from the unit disc") {
  BrownianConfig cfg;
  cfg.paths = 20000;
  cfg.dt = 1e-3;
  const auto e = brownian_energy(closed_form("cos"), cfg);
  // |grad u| = 1, so the energy is the exit time; E tau = 1/2.
  CHECK(e.estimate == e.mean_exit_time);
  CHECK(std::abs(e.estimate - 0.5) <= 3.0 * e.std_error + 0.002);
  CHECK(e.truncated == 0);
}

TEST_CASE("plain Euler bias shrinks under dt refinement") {
  BrownianConfig cfg;
  cfg.paths = 20000;
  cfg.bridge = false;
  cfg.dt = 1e-3;
  const auto coarse = brownian_energy(closed_form("cos"), cfg);
  cfg.dt = 1e-4;
  const auto fine = brownian_energy(closed_form("cos"), cfg);
  // Discrete monitoring overshoots the exit: about 0.58 sqrt(dt) on E tau.
  CHECK(coarse.estimate - 0.5 > 3.0 * coarse.std_error);
  CHECK(coarse.estimate - 0.5 > fine.estimate - 0.5);
  CHECK(std::abs(fine.estimate - 0.5) < std::abs(coarse.estimate - 0.5));
}

TEST_CASE("Brownian energy matches the g* average") {
  BrownianConfig cfg;
  cfg.paths = 10000;
  cfg.dt = 1e-3;
  for (const char* tag : {"cos3", "random8", "step"}) {
    const auto cmp = compare_with_gstar(closed_form(tag), cfg);
    INFO(tag << " diff=" << cmp.difference << " se=" << cmp.mc.std_error);
    CHECK(cmp.passed());
  }
}

TEST_CASE("serial and OpenMP paths agree") {
  BrownianConfig cfg;
  cfg.paths = 1500;
  cfg.dt = 1e-3;
  cfg.exec = Exec::Serial;
  const auto a = brownian_energy(closed_form("random8"), cfg);
  cfg.exec = Exec::OpenMP;
  const auto b = brownian_energy(closed_form("random8"), cfg);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
}

}  // TEST_SUITE
