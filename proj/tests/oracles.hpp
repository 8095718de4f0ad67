#pragma once
// Reference constructions for tests. Nothing here calls into the library's
// Hamiltonian or simulator code.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Single-qubit operator `op` on qubit q of n, where qubit q is bit q of
/// the basis index (so the highest qubit is the leftmost Kronecker factor).
inline Mat embed(const Mat& op, int q, int n) {
  const Mat id = Mat::Identity(2, 2);
  Mat out = Mat::Identity(1, 1);
  for (int k = n - 1; k >= 0; --k) out = kron(out, k == q ? op : id);
  return out;
}

/// Annihilation operator a_q with a Z string on qubits below q.
inline Mat annihilate(int q, int n) {
  Mat lower = Mat::Zero(2, 2);
  lower(0, 1) = 1.0;  // |1> -> |0>
  Mat z = Mat::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  Mat out = embed(lower, q, n);
  for (int k = 0; k < q; ++k) out = embed(z, k, n) * out;
  return out;
}

/// Site grid cell for snake ordering, written out independently.
inline int snake(int row, int col, int cols) {
  return row * cols + (row % 2 == 0 ? col : cols - 1 - col);
}

/// Full Fock-space Hubbard matrix on a rows x cols open grid, t = 1.
inline Mat hubbard_fock(int rows, int cols, double u) {
  const int ns = rows * cols;
  const int n = 2 * ns;
  std::vector<Mat> a;
  for (int q = 0; q < n; ++q) a.push_back(annihilate(q, n));
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat h = Mat::Zero(dim, dim);
  auto hop = [&](int i, int j) {
    for (int s = 0; s < 2; ++s) {
      const int qi = i + s * ns, qj = j + s * ns;
      h -= a[static_cast<std::size_t>(qi)].adjoint() * a[static_cast<std::size_t>(qj)];
      h -= a[static_cast<std::size_t>(qj)].adjoint() * a[static_cast<std::size_t>(qi)];
    }
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) hop(snake(r, c, cols), snake(r, c + 1, cols));
      if (r + 1 < rows) hop(snake(r, c, cols), snake(r + 1, c, cols));
    }
  }
  for (int i = 0; i < ns; ++i) {
    const Mat nu = a[static_cast<std::size_t>(i)].adjoint() * a[static_cast<std::size_t>(i)];
    const Mat nd = a[static_cast<std::size_t>(i + ns)].adjoint() * a[static_cast<std::size_t>(i + ns)];
    h += u * nu * nd;
  }
  return h;
}

/// Eigenvalues of `h` restricted to basis states with the given spin counts.
inline std::vector<double> sector_eigenvalues(const Mat& h, int ns, int n_up, int n_down) {
  std::vector<Eigen::Index> idx;
  const std::uint64_t up_mask = (std::uint64_t{1} << ns) - 1;
  for (Eigen::Index s = 0; s < h.rows(); ++s) {
    const auto b = static_cast<std::uint64_t>(s);
    if (std::popcount(b & up_mask) == n_up && std::popcount(b >> ns) == n_down) idx.push_back(s);
  }
  Mat block(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h(idx[i], idx[j]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(block, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Half-filled two-site ground energy.
inline double two_site_ground(double u) { return (u - std::sqrt(u * u + 16.0)) / 2.0; }

/// Open-chain single-particle energies -2 cos(k pi / (L + 1)), ascending.
inline std::vector<double> chain_modes(int length) {
  std::vector<double> e;
  for (int k = 1; k <= length; ++k) {
    e.push_back(-2.0 * std::cos(k * std::numbers::pi / (length + 1)));
  }
  std::sort(e.begin(), e.end());
  return e;
}

inline double fill(const std::vector<double>& modes, int n_up, int n_down) {
  double e = 0.0;
  for (int k = 0; k < n_up; ++k) e += modes[static_cast<std::size_t>(k)];
  for (int k = 0; k < n_down; ++k) e += modes[static_cast<std::size_t>(k)];
  return e;
}

/// exp(i * t * H) for Hermitian H by eigendecomposition.
inline Mat expi(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::VectorXcd ph(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < ph.size(); ++k) ph(k) = std::exp(cplx(0.0, t * es.eigenvalues()(k)));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline Mat pauli(char p) {
  Mat m = Mat::Zero(2, 2);
  switch (p) {
    case 'X': m(0, 1) = m(1, 0) = 1.0; break;
    case 'Y': m(0, 1) = cplx(0, -1); m(1, 0) = cplx(0, 1); break;
    case 'Z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: m = Mat::Identity(2, 2);
  }
  return m;
}

/// Richardson-extrapolated central difference of a scalar function.
template <class F>
double richardson_derivative(F&& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2 * h);
  const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
  return d2 + (d2 - d1) / 3.0;
}

}  // namespace oracle
