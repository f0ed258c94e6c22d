#pragma once

#include <utility>
#include <vector>

#include "devcorr/deviation.hpp"

namespace devcorr {

// Local projective-measurement directions. Each party's projector pair is
// built from |par> = cos(theta)|0> + e^{i phi} sin(theta)|1> and
// |perp> = e^{-i phi} sin(theta)|0> - cos(theta)|1>.
struct MeasurementBasis {
    double theta_A = 0.0;
    double phi_A = 0.0;
    double theta_B = 0.0;
    double phi_B = 0.0;
};

// Maps (theta, phi) onto the canonical representative in
// [0, pi] x [0, 2pi); (theta, phi) and (2pi - theta, phi + pi) generate the
// same state, so every angle pair has one such representative.
void canonicalize_angles(double& theta, double& phi);
MeasurementBasis canonicalize(MeasurementBasis b);

// Lexicographic order on (theta_A, phi_A, theta_B, phi_B), used for
// deterministic tie-breaking.
bool basis_less(const MeasurementBasis& a, const MeasurementBasis& b);

struct OptimizerConfig {
    int grid_points = 24;        // per angle; joint grid is n^4 (K) or n^2 (discord)
    int refine_starts = 5;       // simplex restarts from the best grid points
    double objective_tol = 1e-9; // simplex value-spread convergence criterion
    int max_iterations = 500;    // per simplex run
    bool parallel = true;        // OpenMP over grid points; result is identical either way
};

enum class Mode { Expansion, Exact };

struct CorrelationReport {
    double total_I;     // I = K + Q, exactly by construction
    double classical_K;
    double quantum_Q;
    MeasurementBasis optimal_basis;
    Mode mode = Mode::Expansion;
};

// ---- Expansion path (values in eps^2/ln2 units, independent of eps) -------

// I = 2 Tr d^2 - Tr d_A^2 - Tr d_B^2.
double mutual_information_expansion(const DeviationMatrix& d);

// Measured deviation sum_ij (Pi_i x Pi_j) d (Pi_i x Pi_j); idempotent.
DeviationMatrix measured_deviation(const DeviationMatrix& d, const MeasurementBasis& b);

// Mutual information of the measured deviation. This is the reference
// route through measured_deviation and partial traces; the optimizer's
// inner loop uses the outcome-table kernel below, which is checked against
// this implementation in the tests.
double classical_mi_expansion(const DeviationMatrix& d, const MeasurementBasis& b);

// Maximal classical mutual information over all local projective bases,
// with the optimizing basis. Coarse grid scan plus simplex refinement;
// throws OptimizerFailure if no refinement run converges.
std::pair<double, MeasurementBasis> classical_correlation_K(const DeviationMatrix& d,
                                                            const OptimizerConfig& opt = {});

// Full expansion-path report: I, K and Q = I - K.
CorrelationReport quantum_correlation_Q(const DeviationMatrix& d,
                                        const OptimizerConfig& opt = {});

// Converts an eps^2/ln2-unit value to bits for a given epsilon.
double expansion_to_bits(double value, double epsilon);

// ---- Exact path (values in bits) -------------------------------------------

double mutual_information_exact(const ThermalState& s);

// One-sided quantum discord; the projective extremization runs over the
// measured party's Bloch angles.
double discord_exact(const ThermalState& s, Party measured,
                     const OptimizerConfig& opt = {});

// Henderson-Vedral classical correlation, I - D for the same measured party.
double classical_exact_C(const ThermalState& s, Party measured,
                         const OptimizerConfig& opt = {});

namespace detail {

// Fast objective kernel: classical MI from the 2x2 table of measurement
// outcomes, no matrix construction.
double classical_mi_objective(const DeviationMatrix& d, double theta_A, double phi_A,
                              double theta_B, double phi_B);

// Fills values[idx] with the objective on the joint grid, idx running
// lexicographically over (i_thA, i_phA, i_thB, i_phB) with
// theta_i = i*pi/(n-1) and phi_j = j*2pi/n. The parallel path writes the
// same array as the serial one; reductions over it are done in index
// order, so optimizer results do not depend on the thread count.
void scan_classical_mi_grid(const DeviationMatrix& d, int n, std::vector<double>& values,
                            bool parallel);

MeasurementBasis grid_index_to_basis(int n, std::size_t idx);

}  // namespace detail

}  // namespace devcorr
