#pragma once

// Constructive lower bounds on the completely bounded norm. Every witness
// substitutes contractions for the variables and reports the operator norm
// it reached, so `achieved` never exceeds ||f||_cb when the substituted
// matrices are unitary.

#include <optional>
#include <string>
#include <vector>

#include "cbforms/forms.hpp"
#include "cbforms/matnum.hpp"
#include "cbforms/ncpoly.hpp"
#include "cbforms/rng.hpp"

namespace cbforms::witness {

using forms::BlockMultilinearForm;
using matnum::Matrix;

enum class WitnessMethod { kSignBaseline, kScalarPhase, kPolarHomogeneous, kPolarGeneral };

std::string to_string(WitnessMethod m);
WitnessMethod witness_method_from_string(const std::string& s);

struct WitnessReport {
  double achieved = 0.0;
  double target = 0.0;
  int N = 1;
  Seed seed;
  double unitarity_residual = 0.0;
  WitnessMethod method = WitnessMethod::kSignBaseline;
  std::optional<int> selected_block;  // 0-based
  /// Best achieved value per dimension when a schedule was run.
  std::vector<std::pair<int, double>> schedule_results;
  /// Wall-clock seconds; filled only when the caller asks for timing.
  std::optional<double> seconds;
};

inline const std::vector<int> kDefaultSchedule = {64, 128, 256};

/// Commutative baseline for homogeneous f: for each block b, pull out x_b,
/// draw the other blocks uniformly and set x_b(i) = sign(f_i). The value
/// is sum_i |f_i| = f(x). achieved is the best per-block empirical mean over
/// `trials` draws; target is 2^{-d/2} sum_i sqrt(Inf_{b,i}) for that block.
WitnessReport sign_baseline(const BlockMultilinearForm& f, int trials, const Seed& seed);

/// Unit-modulus scalars x_b(1) = 1, x_b(2) = i on the address blocks, data
/// block phases aligned with the address part. Reaches 2^{d/2} exactly.
WitnessReport scalar_phase_witness_address(int d);

/// Scalar (1 x 1) unit-modulus assignment for every block but the last,
/// with the last block chosen to align phases. Returns |f| at that point.
double scalar_phase_align_last(const BlockMultilinearForm& f,
                               const std::vector<std::vector<matnum::Complex>>& phases);

struct PolarWitness {
  WitnessReport report;
  /// V_1 .. V_m for the outer variables (identity where q_i = 0).
  std::vector<Matrix> outer;
  /// Haar samples W_1 .. W_t for the inner variables.
  std::vector<Matrix> inner;
};

/// Haar unitaries for the inner variables, polar factors M_i = U_i P_i of
/// M_i = q_i(W), and V_i = U_0 U_i^* (U_0 = I when q_0 = 0). The right split
/// uses M_i = P_i U_i and V_i = U_i^* U_0. target is
/// sum ||q_i||_2 / sqrt(e (deg+1)) for homogeneous p and
/// sum ||q_i||_2 / (sqrt(e) (deg+1)) otherwise.
PolarWitness polar_witness(const ncpoly::SplitPolynomial& p, int N, const Seed& seed);

enum class Side { kFirst, kLast };

/// Pulls out the first (or last) block of homogeneous f and runs the polar
/// construction at every N of the schedule, keeping the best. target is
/// sum_i sqrt(Inf_{b,i}(f)) / sqrt(e (d+1)).
WitnessReport root_influence_witness(const BlockMultilinearForm& f, Side side,
                                     const std::vector<int>& schedule, const Seed& seed,
                                     ncpoly::MatrixAssignment* best_assignment = nullptr);

/// The non-homogeneous pipeline: block beta maximizes Var[f_beta] (lowest
/// on ties), earlier blocks are set to zero and the block-beta variables
/// are pulled out over the support set. target is
/// Var[f] / (sqrt(e) (d+1)^2 sqrt(MaxInf(f))).
WitnessReport aa_witness(const BlockMultilinearForm& f, const std::vector<int>& schedule,
                         const Seed& seed, ncpoly::MatrixAssignment* best_assignment = nullptr);

/// Var[f]^2 / (e (d+1)^4), the influence lower bound for cb-bounded forms.
double aa_influence_bound(const BlockMultilinearForm& f);

/// MaxInf(f) >= aa_influence_bound(f).
bool aa_inequality_holds(const BlockMultilinearForm& f);

}  // namespace cbforms::witness
