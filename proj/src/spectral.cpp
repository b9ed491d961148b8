#include "diffuse/spectral.hpp"

#include "diffuse/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace diffuse {

double resolve_epsilon(const Matrix& sq_dist, const EpsilonSpec& spec,
                       int ambient_dim) {
  if (std::holds_alternative<double>(spec)) {
    const double eps = std::get<double>(spec);
    if (eps <= 0.0) throw Error("InvalidInput", "epsilon must be positive");
    return eps;
  }
  if (std::holds_alternative<AutoMedian>(spec)) {
    const double med = median_positive_sq_dist(sq_dist);
    if (med <= 0.0)
      throw Error("InvalidInput",
                  "all points coincide; cannot derive a kernel scale");
    return med;
  }
  const EpsilonGrid grid = default_epsilon_grid(sq_dist);
  return choose_epsilon(sq_dist, grid, 0.1, static_cast<double>(ambient_dim))
      .chosen_epsilon;
}

namespace {

// Sort order: descending |lambda|, magnitude ties by original solver index.
std::vector<Eigen::Index> magnitude_order(const Vector& lambdas) {
  std::vector<Eigen::Index> idx(static_cast<size_t>(lambdas.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(lambdas(a)) > std::abs(lambdas(b));
  });
  return idx;
}

// Largest-magnitude entry positive; magnitude ties broken by lowest index.
void fix_sign(Eigen::Ref<Vector> v) {
  Eigen::Index best = 0;
  double mag = std::abs(v(0));
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > mag) {
      mag = std::abs(v(i));
      best = i;
    }
  }
  if (v(best) < 0.0) v = -v;
}

} // namespace

EigenPairs spectral_decompose(const Matrix& A) {
  if (A.rows() != A.cols())
    throw Error("InvalidInput", "matrix must be square");
  if (!A.allFinite())
    throw Error("InvalidInput", "matrix contains non-finite entries");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(A);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("symmetric eigensolver did not converge");

  const auto order = magnitude_order(solver.eigenvalues());
  EigenPairs out;
  out.lambdas.resize(A.rows());
  out.vectors.resize(A.rows(), A.cols());
  for (Eigen::Index k = 0; k < A.rows(); ++k) {
    out.lambdas(k) = solver.eigenvalues()(order[static_cast<size_t>(k)]);
    out.vectors.col(k) = solver.eigenvectors().col(order[static_cast<size_t>(k)]);
    fix_sign(out.vectors.col(k));
  }

  const double scale = A.norm();
  for (Eigen::Index k = 0; k < A.rows(); ++k) {
    const double resid =
        (A * out.vectors.col(k) - out.lambdas(k) * out.vectors.col(k)).norm();
    if (resid > 1e-8 * std::max(scale, 1.0))
      throw ConvergenceFailure("eigenpair residual " + std::to_string(resid) +
                               " exceeds tolerance");
  }
  return out;
}

std::pair<Matrix, Matrix> recover_biorthogonal(const Matrix& theta) {
  const Vector lead = theta.col(0);
  for (Eigen::Index i = 0; i < lead.size(); ++i)
    if (std::abs(lead(i)) < 1e-12)
      throw DegenerateLeadVector(static_cast<int>(i));
  Matrix nu(theta.rows(), theta.cols());
  Matrix mu(theta.rows(), theta.cols());
  for (Eigen::Index k = 0; k < theta.cols(); ++k) {
    nu.col(k) = theta.col(k).array() / lead.array();
    mu.col(k) = theta.col(k).array() * lead.array();
  }
  return {std::move(nu), std::move(mu)};
}

EtaResult eta_for_delta(const Matrix& P, const Vector& lambdas,
                        const Matrix& nu, const Matrix& mu, int time,
                        double delta) {
  if (time < 1) throw Error("InvalidInput", "time must be >= 1");
  if (delta <= 0.0) throw Error("InvalidInput", "delta must be positive");
  const Eigen::Index n = P.rows();

  Matrix Pt = P;
  for (int s = 1; s < time; ++s) Pt = Pt * P;

  // Peel one spectral term at a time off the residual; stop at the first
  // eta whose Frobenius norm drops below delta.
  Matrix resid = Pt;
  const double powt = static_cast<double>(time);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lt = std::pow(lambdas(k), powt);
    resid.noalias() -= lt * (nu.col(k) * mu.col(k).transpose());
    if (resid.norm() < delta)
      return {static_cast<int>(k) + 1, false};
  }
  return {static_cast<int>(n), true};
}

namespace {

// Direct route: general eigensolver on P, rescaled to the same
// normalisation the symmetric route produces (theta columns orthonormal).
void decompose_direct(SpectralModel& m) {
  Eigen::EigenSolver<Matrix> solver(m.P);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("general eigensolver did not converge");

  const Eigen::Index n = m.P.rows();
  Vector lambdas(n);
  Matrix vecs(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    lambdas(k) = solver.eigenvalues()(k).real();
    for (Eigen::Index i = 0; i < n; ++i)
      vecs(i, k) = solver.eigenvectors()(i, k).real();
  }

  const auto order = magnitude_order(lambdas);
  const Vector root = m.d.array().sqrt();
  m.lambdas.resize(n);
  m.theta.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    m.lambdas(k) = lambdas(order[static_cast<size_t>(k)]);
    Vector th = root.array() * vecs.col(order[static_cast<size_t>(k)]).array();
    th /= th.norm();
    fix_sign(th);
    m.theta.col(k) = th;
  }

  const double scale = m.P.norm();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Vector v = m.theta.col(k).array() / root.array();
    const double resid = (m.P * v - m.lambdas(k) * v).norm() / v.norm();
    if (resid > 1e-8 * std::max(scale, 1.0))
      throw ConvergenceFailure("eigenpair residual " + std::to_string(resid) +
                               " exceeds tolerance");
  }
}

} // namespace

SpectralModel build_spectral_model(const Matrix& W, int time, double delta,
                                   SpectralRoute route) {
  SpectralModel m;
  m.W = W;
  m.time = time;
  m.delta = delta;
  std::tie(m.P, m.d) = markov_normalize(W);
  std::tie(m.A, std::ignore) = symmetric_conjugate(W);

  if (route == SpectralRoute::symmetric) {
    EigenPairs pairs = spectral_decompose(m.A);
    m.lambdas = std::move(pairs.lambdas);
    m.theta = std::move(pairs.vectors);
  } else {
    decompose_direct(m);
  }
  std::tie(m.nu, m.mu) = recover_biorthogonal(m.theta);

  const EtaResult eta = eta_for_delta(m.P, m.lambdas, m.nu, m.mu, time, delta);
  m.eta = eta.eta;
  m.eta_saturated = eta.saturated;
  return m;
}

SpectralModel spectral_model_from_points(const Matrix& data,
                                         const EpsilonSpec& epsilon, int time,
                                         double delta, SpectralRoute route) {
  check_data_matrix(data);
  const Matrix sq = pairwise_sq_dist(data);
  const double eps = resolve_epsilon(sq, epsilon, static_cast<int>(data.cols()));
  return build_spectral_model(gaussian_affinity(sq, eps), time, delta, route);
}

double diffusion_distance_sq(const SpectralModel& model, int t, int i, int j,
                             DistanceMethod method) {
  const Eigen::Index n = model.P.rows();
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw Error("InvalidInput", "point index out of range");
  if (method == DistanceMethod::spectral) {
    double sum = 0.0;
    for (Eigen::Index k = 1; k < n; ++k) {
      const double diff = model.nu(i, k) - model.nu(j, k);
      sum += std::pow(model.lambdas(k), 2.0 * t) * diff * diff;
    }
    return sum;
  }
  Matrix Pt = model.P;
  for (int s = 1; s < t; ++s) Pt = Pt * model.P;
  const Vector stationary = model.mu.col(0);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double diff = Pt(i, k) - Pt(j, k);
    sum += diff * diff / stationary(k);
  }
  return sum;
}

namespace {

Embedding dm_embedding_from_model(const SpectralModel& m, int time,
                                  EmbeddingKind kind, int force_eta) {
  const Eigen::Index n = m.P.rows();
  const int eta = force_eta > 0 ? std::min<int>(force_eta, static_cast<int>(n))
                                : m.eta;
  Embedding e;
  e.kind = kind;
  e.eta = eta;
  e.eta_saturated = force_eta > 0 ? false : m.eta_saturated;
  e.coords.resize(n, std::max(eta - 1, 0));
  for (int k = 1; k < eta; ++k) {
    const double lt = std::pow(m.lambdas(k), static_cast<double>(time));
    e.coords.col(k - 1) = lt * m.nu.col(k);
  }
  return e;
}

} // namespace

Embedding dm_embed_from_affinity(const Matrix& W, int time, double delta,
                                 EmbeddingKind kind, int force_eta) {
  if (kind != EmbeddingKind::DM && kind != EmbeddingKind::MDM)
    throw Error("InvalidInput", "dm_embed expects kind DM or MDM");
  const SpectralRoute route = kind == EmbeddingKind::DM
                                  ? SpectralRoute::direct
                                  : SpectralRoute::symmetric;
  const SpectralModel m = build_spectral_model(W, time, delta, route);
  return dm_embedding_from_model(m, time, kind, force_eta);
}

Embedding dm_embed(const Matrix& data, const EpsilonSpec& epsilon, int time,
                   double delta, EmbeddingKind kind, int force_eta) {
  check_data_matrix(data);
  const Matrix sq = pairwise_sq_dist(data);
  const double eps = resolve_epsilon(sq, epsilon, static_cast<int>(data.cols()));
  return dm_embed_from_affinity(gaussian_affinity(sq, eps), time, delta, kind,
                                force_eta);
}

DbResult db_embed(const Matrix& data, const DbOptions& options) {
  check_data_matrix(data);
  if (options.variant != EmbeddingKind::DB &&
      options.variant != EmbeddingKind::MDB)
    throw Error("InvalidInput", "db_embed expects variant DB or MDB");

  const Matrix coords = coordinate_vectors(data);
  const Matrix sq = pairwise_sq_dist(coords);
  const double eps =
      resolve_epsilon(sq, options.epsilon, static_cast<int>(coords.cols()));
  const SpectralRoute route = options.variant == EmbeddingKind::DB
                                  ? SpectralRoute::direct
                                  : SpectralRoute::symmetric;

  DbResult out;
  out.epsilon_used = eps;
  out.model = build_spectral_model(gaussian_affinity(sq, eps), options.time,
                                   options.delta, route);
  const int eta = options.force_eta > 0
                      ? std::min<int>(options.force_eta,
                                      static_cast<int>(coords.rows()))
                      : out.model.eta;

  out.basis = options.variant == EmbeddingKind::DB
                  ? out.model.nu.leftCols(eta)
                  : out.model.theta.leftCols(eta);

  out.embedding.kind = options.variant;
  out.embedding.eta = eta;
  out.embedding.eta_saturated =
      options.force_eta > 0 ? false : out.model.eta_saturated;
  out.embedding.coords.noalias() = data * out.basis;
  return out;
}

} // namespace diffuse
