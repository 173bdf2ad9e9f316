#pragma once

// Monte Carlo and algorithmic checks on the dyadic model: weight generators,
// the Rubio de Francia iteration, weight composition, the weighted
// square-function inequality and the drift of the special function along
// simulated paths.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wsq/parallel.hpp"
#include "wsq/rng.hpp"
#include "wsq/scan_report.hpp"

namespace wsq::dyadic {

enum class WeightFamily { Unit, LogNormal, Spike, PowerLike };

std::string_view family_name(WeightFamily family);

/// Constant 1; exp(sigma g) with sigma ~ U[0, 2]; a single leaf raised by a log-uniform
/// factor in [1, 1e3]; or (1 + |l - l0|)^gamma with gamma ~ U[-0.9, 2].
std::vector<double> generate_weight(WeightFamily family, int depth, CounterRng& rng);

enum class MartingaleFamily { Gaussian, Rademacher, SparseJump };

/// Terminal values of a test martingale.
std::vector<double> generate_terminal(MartingaleFamily family, int depth, CounterRng& rng);

struct RubioResult {
  std::vector<double> rf;
  double m = 0.0;                  ///< norm bound used, (p e/(p-1)) [W]^{1/(p-1)}
  double char_W = 0.0;
  double min_excess = 0.0;         ///< min over leaves of Rf - f (property i: >= 0)
  double norm_ratio = 0.0;         ///< ||Rf|| / ||f|| in L^p(W)
  double norm_bound = 0.0;         ///< 2 + 2^{-k_max}
  double a1 = 0.0;                 ///< [Rf]_{A_1}
  double a1_bound = 0.0;           ///< 2m plus the truncation term
  double empirical_m_ratio = 0.0;  ///< ||Mf|| / ||f|| for this f
  bool ok() const;
};

/// Rf = sum_{k <= k_max} M^k f / (2m)^k. Throws DomainError for negative f.
RubioResult rubio_de_francia(std::span<const double> f, double p, std::span<const double> w,
                             int k_max = 64);

enum class ComposeMode { I, II };

struct ComposeResult {
  std::vector<double> leaves;
  double characteristic = 0.0;  ///< [result]_{A_{p0}}
  double bound = 0.0;
  double char_W = 0.0;
  double char_U = 0.0;
};

/// Mode I (p < p0): W U^{p-p0}; mode II (p0 < p): (W^{p0-1} U^{p-p0})^{1/(p-1)}.
ComposeResult compose_weights(std::span<const double> w, std::span<const double> u, double p, double p0,
                              ComposeMode mode);

struct SuiteConfig {
  std::uint64_t trials = 1000;
  int max_depth = 10;
  std::uint64_t seed = 42;
  Exec exec = Exec::OpenMP;
};

/// Rubio properties (i)-(iii) on random (f, W) instances, p cycling over {1.5, 2, 3, 4}.
ScanReport check_rubio(const SuiteConfig& cfg);

/// Composition bounds on random (W, U) pairs; U is produced by the Rubio iteration
/// or drawn as an A_1 weight directly.
ScanReport check_compose(const SuiteConfig& cfg, double p, double p0);

/// ||Mf||_{L^p(W)} <= (p e/(p-1)) [W]^{1/(p-1)} ||f|| and the unweighted Doob bound.
ScanReport check_maximal_bound(const SuiteConfig& cfg, double p);

struct MainInequalityStats {
  double p = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t skipped = 0;
  std::uint64_t violations = 0;
  double max_ratio = 0.0;
  double max_ratio_over_bound = 0.0;
  double max_char = 0.0;
  double unweighted_max_ratio = 0.0;  ///< over trials drawn with W = 1
  std::vector<double> ratios;         ///< per trial, NaN for skipped
  std::vector<double> chars;
  ScanReport report;
};

/// ||S||_{L^p(W)} / ||X_n||_{L^p(W)} against K_p [W]^{max(1/2, 1/(p-1))}.
MainInequalityStats test_main_inequality(double p, std::uint64_t trials, int depth, std::uint64_t seed,
                                         Exec exec = Exec::OpenMP);

struct DriftConfig {
  double c = 2.0;
  double h = 0.05;
  int n_steps = 200;
  std::uint64_t trials = 20000;
  std::uint64_t seed = 42;
  double x0 = 1.0;
  double w0 = 1.0;
  double v0 = 0.0;          ///< 0 picks v0 with w0 v0^2 = c^{1/2}
  double x_scale = 1.0;     ///< 0 freezes X
  double weight_vol = 0.3;  ///< relative size of the (W, V) steps
  double radial_share = 0.1; ///< share of the step that moves t = wv^2 at first order
  Exec exec = Exec::OpenMP;
};

struct DriftStats {
  std::vector<double> mean;  ///< E B after each step (index 0 = start, last = after terminal jump)
  std::vector<double> se;
  std::vector<double> drift_mean;  ///< mean one-step increment
  std::vector<double> drift_se;
  double max_positive_drift = 0.0;       ///< max over steps of (drift_mean - 3 drift_se)
  double max_relative_positive_drift = 0.0;  ///< max of drift_mean / E|B| over steps
  std::uint64_t frozen_steps = 0;
  std::uint64_t total_steps = 0;
  double terminal_functional = 0.0;  ///< E[(Y^{3/2} - 64^3 c^{3/2} |X|^3) W] at the end
  double terminal_functional_se = 0.0;
  ScanReport report;
};

/// Symmetric +-h steps of (X, W, V) with Y accumulating (dX)^2; (W, V) steps that
/// would leave 1 <= wv^2 <= c are frozen; a final two-point jump lands on wv^2 = 1.
DriftStats bellman_drift_probe(const DriftConfig& cfg);

}  // namespace wsq::dyadic
