#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "pcclone/audit.hpp"

using namespace pcclone;

namespace {

const AuditCheck* find(const AuditReport& r, const std::string& name) {
  auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const AuditCheck& c) { return c.name == name; });
  return it == r.checks.end() ? nullptr : &*it;
}

}  // namespace

TEST(RunAudit, SmallRunPasses) {
  const auto r = run_audit(3, 10, 1);
  EXPECT_TRUE(r.overall);
  EXPECT_EQ(r.seed, 1u);
  for (const auto& c : r.checks) {
    EXPECT_TRUE(c.passed) << c.name << " residual " << c.residual;
    EXPECT_TRUE(std::isfinite(c.residual)) << c.name;
    EXPECT_GE(c.residual, 0.0) << c.name;
    EXPECT_TRUE(c.error.empty()) << c.name << ": " << c.error;
    if (c.tolerance == kEqTol) {
      EXPECT_LT(c.residual, 1e-12) << c.name;
    }
  }
}

TEST(RunAudit, ContainsLevelChecks) {
  const auto r = run_audit(3, 2, 1);
  const auto* l2 = find(r, "level2");
  const auto* l3 = find(r, "level3");
  ASSERT_NE(l2, nullptr);
  ASSERT_NE(l3, nullptr);
  EXPECT_EQ(l2->d_min, 2u);
  EXPECT_EQ(l3->d_min, 3u);
  EXPECT_LT(l2->residual, 1e-12);
  EXPECT_LT(l3->residual, 1e-12);
  EXPECT_EQ(find(run_audit(2, 1, 1), "level3"), nullptr);
}

TEST(RunAudit, CoversExpectedChecks) {
  const auto r = run_audit(5, 2, 3);
  for (const char* name :
       {"isometry", "output_hermitian_unit_trace", "output_psd", "output_expression", "swap_symmetry",
        "clone_symmetry", "reduced_output_closed_form", "fidelity_oracle", "scalar_form", "phase_covariance",
        "fidelity_constancy", "optimal_params_normalization", "optimal_fidelity_consistency", "numeric_optimum",
        "numeric_argmax", "sweep_unimodal", "uqcm_superiority", "uqcm_gap_decreasing",
        "optimal_fidelity_decreasing", "mub_orthonormal", "mub_unbiased", "mub_cloning_uniformity"})
    EXPECT_NE(find(r, name), nullptr) << name;
  const auto* mub = find(r, "mub_unbiased");
  ASSERT_NE(mub, nullptr);
  EXPECT_EQ(mub->d_min, 3u);
  EXPECT_EQ(mub->d_max, 5u);
}

TEST(RunAudit, SimulationChecksCappedAtSixteen) {
  const auto r = run_audit(20, 1, 1);
  EXPECT_TRUE(r.overall);
  EXPECT_EQ(find(r, "fidelity_oracle")->d_max, kSimulationDMax);
  EXPECT_EQ(find(r, "numeric_optimum")->d_max, 20u);
  EXPECT_EQ(find(r, "mub_unbiased")->d_max, 19u);
  EXPECT_EQ(find(r, "mub_cloning_uniformity")->d_max, 13u);
}

TEST(RunAudit, ReproducibleForFixedSeed) {
  const auto a = run_audit(6, 5, 42);
  const auto b = run_audit(6, 5, 42);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].name, b.checks[i].name);
    EXPECT_EQ(a.checks[i].residual, b.checks[i].residual);  // bit-for-bit
    EXPECT_EQ(a.checks[i].passed, b.checks[i].passed);
  }
}

TEST(RunAudit, CorruptedMachineFailsIsometryOnly) {
  AuditHooks hooks;
  hooks.corrupt_norm2 = 0.9;
  const auto r = run_audit(4, 3, 1, hooks);
  EXPECT_FALSE(r.overall);
  const auto* iso = find(r, "isometry");
  ASSERT_NE(iso, nullptr);
  EXPECT_FALSE(iso->passed);
  EXPECT_GT(iso->residual, 0.1);
  for (const auto& c : r.checks) {
    if (c.name != "isometry") {
      EXPECT_TRUE(c.passed) << c.name;
    }
  }
}

TEST(RunAudit, Preconditions) {
  EXPECT_THROW(run_audit(1, 1, 0), DimensionError);
  EXPECT_THROW(run_audit(3, 0, 0), ParameterError);
}

TEST(CovarianceStructure, SmallResidualAcrossParameters) {
  UniformSource src(8);
  for (std::size_t d = 2; d <= 8; ++d)
    for (int i = 0; i < 3; ++i) {
      const double theta = src.next(0.0, kPi / 2);
      EXPECT_LT(check_covariance_structure(d, std::cos(theta), std::sin(theta), 10, d + i), 1e-12);
    }
}

TEST(CovarianceStructure, DephasedMachine) {
  EXPECT_LT(check_covariance_structure(5, 1.0, 0.0, 10, 1), 1e-15);
}

TEST(CovarianceStructure, QubitSignFlip) {
  const auto p = optimal_params(2);
  const auto m = build_machine(2, p.alpha, p.beta);
  const auto base = reduced_clone(clone_state(m, phase_state(PhaseVector::zero(2))));
  const auto flipped = reduced_clone(clone_state(m, phase_state(PhaseVector({0.0, kPi}))));
  EXPECT_NEAR(std::abs(flipped.mat(0, 1) + base.mat(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(flipped.mat(1, 0) + base.mat(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(flipped.mat(0, 0) - base.mat(0, 0)), 0.0, 1e-15);
}
