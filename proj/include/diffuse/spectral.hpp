#pragma once

#include "diffuse/epsilon.hpp"
#include "diffuse/kernels.hpp"

#include <variant>

namespace diffuse {

struct KernelParams {
  double epsilon = 1.0; // Gaussian scale; the kernel is exp(-d^2/(2*epsilon))
};

/// Scale selection: a fixed value, the log-log linear-section scan, or the
/// median of the positive squared distances (robust fallback for very small
/// point sets, e.g. video windows).
struct AutoScan {};
struct AutoMedian {};
using EpsilonSpec = std::variant<double, AutoScan, AutoMedian>;

double resolve_epsilon(const Matrix& sq_dist, const EpsilonSpec& spec,
                       int ambient_dim);

enum class EmbeddingKind { DM, DB, MDM, MDB };

/// Full spectral state of one affinity graph: the Markov matrix P, its
/// symmetric conjugate A, and the bi-orthogonal eigensystem
///   nu_k = theta_k / theta_1 (right),  mu_k = theta_k * theta_1 (left),
/// with eigenvalues sorted by descending magnitude and eigenvector signs
/// fixed so the largest-magnitude entry is positive.
struct SpectralModel {
  Matrix W;       // affinity
  Vector d;       // degrees
  Matrix P;       // row-stochastic
  Matrix A;       // symmetric conjugate
  Vector lambdas; // shared spectrum, |l1| >= |l2| >= ...
  Matrix theta;   // orthonormal eigenvectors of A (columns)
  Matrix nu;      // right eigenvectors of P (columns)
  Matrix mu;      // left eigenvectors of P (columns)
  int eta = 0;    // smallest truncation reproducing P^t within delta
  bool eta_saturated = false; // no eta < N met the tolerance
  double delta = 1e-3;
  int time = 1;
};

/// Which eigensolve backs the model. `symmetric` decomposes the conjugate A
/// and recovers nu/mu (the numerically enhanced route); `direct` runs a
/// general eigensolver on P itself. Both agree to tight tolerance on
/// connected graphs.
enum class SpectralRoute { symmetric, direct };

struct EigenPairs {
  Vector lambdas;
  Matrix vectors; // columns, orthonormal, sign-fixed
};

/// Dense symmetric eigendecomposition sorted by descending |lambda|
/// (magnitude ties keep solver order). Sign rule: the largest-magnitude
/// entry of each vector is made positive, ties broken by lowest index.
/// Throws ConvergenceFailure if the residual exceeds 1e-8 * ||A||_F.
EigenPairs spectral_decompose(const Matrix& A);

/// nu_k = theta_k / theta_1 and mu_k = theta_k * theta_1, elementwise.
/// Throws DegenerateLeadVector if theta_1 has a near-zero entry.
std::pair<Matrix, Matrix> recover_biorthogonal(const Matrix& theta);

struct EtaResult {
  int eta = 0;
  bool saturated = false;
};

/// Smallest eta such that the rank-eta spectral expansion reproduces P^t
/// within Frobenius error delta. Saturates at N when the tolerance is
/// never met.
EtaResult eta_for_delta(const Matrix& P, const Vector& lambdas,
                        const Matrix& nu, const Matrix& mu, int time,
                        double delta);

SpectralModel build_spectral_model(const Matrix& W, int time, double delta,
                                   SpectralRoute route = SpectralRoute::symmetric);

SpectralModel spectral_model_from_points(const Matrix& data,
                                         const EpsilonSpec& epsilon, int time,
                                         double delta,
                                         SpectralRoute route = SpectralRoute::symmetric);

enum class DistanceMethod { definitional, spectral };

/// Squared diffusion distance between points i and j at time t. The
/// definitional method compares the t-step transition profiles weighted by
/// the stationary distribution; the spectral method sums
/// lambda_k^(2t) (nu_k(i)-nu_k(j))^2 over k >= 2. Returns D_t^2.
double diffusion_distance_sq(const SpectralModel& model, int t, int i, int j,
                             DistanceMethod method);

struct Embedding {
  Matrix coords;
  EmbeddingKind kind = EmbeddingKind::DM;
  int eta = 0;
  bool eta_saturated = false;
};

/// Diffusion-map embedding: column k-1 of coords is lambda_k^t * nu_k over
/// the points, k = 2..eta. Kind DM solves P directly; kind MDM goes through
/// the symmetric conjugate. Optionally force eta (0 = use eta(delta)).
Embedding dm_embed(const Matrix& data, const EpsilonSpec& epsilon, int time,
                   double delta, EmbeddingKind kind = EmbeddingKind::MDM,
                   int force_eta = 0);
Embedding dm_embed_from_affinity(const Matrix& W, int time, double delta,
                                 EmbeddingKind kind = EmbeddingKind::MDM,
                                 int force_eta = 0);

struct DbOptions {
  EpsilonSpec epsilon = AutoScan{};
  double delta = 1e-3;
  int time = 1; // used by the eta truncation rule
  EmbeddingKind variant = EmbeddingKind::DB; // DB projects on nu, MDB on theta
  int force_eta = 0;
};

struct DbResult {
  Embedding embedding;  // N x eta projections of the points
  Matrix basis;         // eta basis vectors (columns)
  SpectralModel model;  // model over the coordinate vectors (n x n)
  double epsilon_used = 0.0;
};

/// Diffusion-bases embedding: builds the spectral model on the coordinate
/// vectors of `data` (an n x n graph), keeps the leading eta(delta) basis
/// vectors, and projects every data row onto them.
DbResult db_embed(const Matrix& data, const DbOptions& options);

} // namespace diffuse
