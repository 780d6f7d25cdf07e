#pragma once

// Per-subgraph Laplacian eigenbases with deterministic canonical form.
//
// Raw eigenvectors from a dense solver are only defined up to sign, and up to
// an arbitrary rotation inside repeated eigenspaces. The canonical form here
// depends only on the eigenspaces themselves:
//   * the kernel vector of a connected Laplacian is the exact constant vector;
//   * inside an eigenspace of dimension m, the i-th vector (0-based) vanishes
//     on the m-1-i lowest "pivot" positions and is orthogonal to the vectors
//     before it (see canonicalize_degenerate);
//   * the first coefficient with |c| > 1e-12 * ||v||_2 is positive.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "cosub/error.hpp"

namespace cosub {

/// Column normalization exponent of the analysis basis.
enum class Norm { L1 = 1, L2 = 2 };

inline double lp_norm(const Eigen::VectorXd& v, Norm p) {
  return p == Norm::L1 ? v.lpNorm<1>() : v.norm();
}

/// v / ||v||_p. Throws InputError for the zero vector.
inline Eigen::VectorXd lp_normalize(const Eigen::VectorXd& v, Norm p) {
  const double s = lp_norm(v, p);
  if (!(s > 0.0)) throw InputError("lp_normalize: zero vector");
  return v / s;
}

/// Flips v so that its first non-negligible coefficient is positive.
inline void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  const double threshold = 1e-12 * v.norm();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > threshold) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

namespace detail {

inline constexpr double kPivotTolerance = 1e-9;

// Orthonormal basis of span(E) with the span of `fixed` removed.
inline Eigen::MatrixXd remove_fixed_directions(const Eigen::MatrixXd& eigenspace, const Eigen::MatrixXd& fixed) {
  if (fixed.cols() == 0) return eigenspace;
  auto orthonormal_basis = [](const Eigen::MatrixXd& a, double threshold) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(threshold);
    return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), qr.rank()));
  };
  const Eigen::MatrixXd f = orthonormal_basis(fixed, 1e-10);
  const Eigen::MatrixXd reduced = eigenspace - f * (f.transpose() * eigenspace);
  return orthonormal_basis(reduced, 1e-8);
}

}  // namespace detail

/// Deterministic basis of a repeated eigenspace.
///
/// `eigenspace` holds (as columns) any basis of the subspace; `fixed` holds
/// already-determined vectors the result must be orthogonal to (their
/// directions are removed first). Rows are scanned from the last node upward;
/// each row with a non-negligible component in the remaining free directions
/// becomes a pivot and is eliminated from them. The i-th output vector
/// vanishes on the first m-1-i pivots and is orthogonal to outputs 0..i-1.
/// For generic subspaces the pivots are simply the last m-1 positions. Rows on
/// which the whole subspace vanishes are skipped, which moves the zero pattern
/// to the closest admissible positions. Output columns are Lp-normalized and
/// sign-canonical.
inline Eigen::MatrixXd canonicalize_degenerate(const Eigen::MatrixXd& eigenspace, const Eigen::MatrixXd& fixed,
                                               Norm p) {
  if (fixed.cols() > 0 && fixed.rows() != eigenspace.rows())
    throw InputError("canonicalize_degenerate: dimension mismatch");
  Eigen::MatrixXd work = detail::remove_fixed_directions(eigenspace, fixed);
  const Eigen::Index n = work.rows();
  const Eigen::Index m = work.cols();
  if (m == 0) return Eigen::MatrixXd(n, 0);

  for (Eigen::Index j = 0; j < m; ++j) work.col(j).normalize();

  std::vector<char> free(static_cast<std::size_t>(m), 1);
  std::vector<Eigen::Index> pivot_cols;  // in pivot order
  std::vector<Eigen::Index> pivot_rows;
  for (Eigen::Index row = n - 1; row >= 0 && static_cast<Eigen::Index>(pivot_cols.size()) + 1 < m; --row) {
    Eigen::Index best = -1;
    double best_abs = detail::kPivotTolerance;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (free[static_cast<std::size_t>(j)] && std::abs(work(row, j)) > best_abs) {
        best_abs = std::abs(work(row, j));
        best = j;
      }
    }
    if (best < 0) continue;
    free[static_cast<std::size_t>(best)] = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!free[static_cast<std::size_t>(j)]) continue;
      const double factor = work(row, j) / work(row, best);
      work.col(j) -= factor * work.col(best);
      work(row, j) = 0.0;
      work.col(j).normalize();
    }
    pivot_cols.push_back(best);
    pivot_rows.push_back(row);
  }
  if (static_cast<Eigen::Index>(pivot_cols.size()) + 1 != m)
    throw NumericError("canonicalize_degenerate: eigenspace basis is rank deficient");

  Eigen::Index remaining = -1;
  for (Eigen::Index j = 0; j < m; ++j)
    if (free[static_cast<std::size_t>(j)]) remaining = j;

  // Nested order: the fully constrained vector first, then pivots from the
  // most recent back to the first.
  std::vector<Eigen::Index> order{remaining};
  for (auto it = pivot_cols.rbegin(); it != pivot_cols.rend(); ++it) order.push_back(*it);

  Eigen::MatrixXd out(n, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::VectorXd v = work.col(order[static_cast<std::size_t>(i)]);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < i; ++k) v -= out.col(k).dot(v) * out.col(k);
    v.normalize();
    // Exact zeros on the positions this vector is constrained to vanish on.
    const Eigen::Index zeros = m - 1 - i;
    for (Eigen::Index z = 0; z < zeros; ++z) v[pivot_rows[static_cast<std::size_t>(z)]] = 0.0;
    out.col(i) = v;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::VectorXd v = lp_normalize(out.col(i), p);
    canonicalize_sign(v);
    out.col(i) = v;
  }
  return out;
}

/// P = (Q^{-1})^T, computed by solving Q^T P = I.
inline Eigen::MatrixXd dual_basis(const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols()) throw InputError("dual_basis: matrix must be square");
  if (q.rows() == 0) return q;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(q.transpose());
  if (!(lu.rcond() > 1e-13)) throw NumericError("dual_basis: basis is singular or ill-conditioned");
  return lu.solve(Eigen::MatrixXd::Identity(q.rows(), q.cols()));
}

/// Eigen decomposition L = Q diag(eigenvalues) P^T of one subgraph Laplacian.
struct LocalEigenBasis {
  Eigen::VectorXd eigenvalues;  ///< ascending, eigenvalues[0] == 0
  Eigen::MatrixXd analysis;     ///< Q: columns Lp-normalized local Fourier modes
  Eigen::MatrixXd synthesis;    ///< P with P^T Q = I (P == Q for L2)
  Norm norm = Norm::L1;

  Eigen::Index size() const { return eigenvalues.size(); }
};

/// Canonical eigenbasis of the Laplacian of a connected (sub)graph.
///
/// Eigenvalues closer than 1e-8 * max(1, lambda_max) are treated as one
/// repeated eigenvalue. Throws InputError for a non-symmetric matrix, non-zero
/// row sums, or a disconnected graph (repeated zero eigenvalue).
inline LocalEigenBasis local_eigenbasis(const Eigen::MatrixXd& lap, Norm p) {
  const Eigen::Index n = lap.rows();
  if (lap.cols() != n || n == 0) throw InputError("local_eigenbasis: expected a non-empty square matrix");
  const double scale = std::max(1.0, lap.cwiseAbs().maxCoeff());
  if ((lap - lap.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InputError("local_eigenbasis: matrix is not symmetric");
  if (lap.rowwise().sum().cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw InputError("local_eigenbasis: rows do not sum to zero");

  LocalEigenBasis out;
  out.norm = p;
  if (n == 1) {
    out.eigenvalues = Eigen::VectorXd::Zero(1);
    out.analysis = Eigen::MatrixXd::Ones(1, 1);
    out.synthesis = Eigen::MatrixXd::Ones(1, 1);
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success) throw NumericError("local_eigenbasis: eigensolver did not converge");
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  const double group_tol = 1e-8 * std::max(1.0, values[n - 1]);

  out.eigenvalues = values;
  out.eigenvalues[0] = 0.0;
  out.analysis.resize(n, n);
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && values[end] - values[end - 1] <= group_tol) ++end;
    const Eigen::Index m = end - start;
    if (start == 0) {
      if (m > 1) throw InputError("local_eigenbasis: graph is not connected (repeated zero eigenvalue)");
      out.analysis.col(0) = lp_normalize(Eigen::VectorXd::Ones(n), p);
    } else if (m == 1) {
      Eigen::VectorXd v = lp_normalize(vectors.col(start), p);
      canonicalize_sign(v);
      out.analysis.col(start) = v;
    } else {
      out.analysis.middleCols(start, m) =
          canonicalize_degenerate(vectors.middleCols(start, m), Eigen::MatrixXd(n, 0), p);
    }
    start = end;
  }
  out.synthesis = (p == Norm::L2) ? out.analysis : dual_basis(out.analysis);
  return out;
}

}  // namespace cosub
