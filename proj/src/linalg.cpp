#include "qbattery/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <type_traits>
#include <utility>
#include <string>
#include <vector>

#include <lapacke.h>

#include "qbattery/errors.hpp"

namespace qbattery {

namespace pauli {

LocalOperator identity() { return LocalOperator::Identity(); }

LocalOperator x() {
    LocalOperator m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

LocalOperator y() {
    LocalOperator m;
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

LocalOperator z() {
    LocalOperator m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

}  // namespace pauli

std::size_t hilbert_dimension(int n_sites) {
    if (n_sites < 1 || n_sites > 62) {
        throw ValidationError("n_sites must lie in [1, 62], got " + std::to_string(n_sites));
    }
    return std::size_t{1} << n_sites;
}

int sites_for_dimension(Eigen::Index dim) {
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw ValidationError("operator dimension " + std::to_string(dim) + " is not a power of two");
    }
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    return n;
}

Operator kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Operator kron_embed(const LocalOperator& local, int site, int n_sites) {
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
    if (site < 1 || site > n_sites) {
        throw ValidationError("site " + std::to_string(site) + " outside [1, " +
                              std::to_string(n_sites) + "]");
    }
    // Acts on bit `b`; every other bit passes through unchanged.
    const int b = site_bit(site, n_sites);
    const Eigen::Index mask = Eigen::Index{1} << b;
    Operator out = Operator::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const int in_bit = (col & mask) ? 1 : 0;
        for (int out_bit = 0; out_bit < 2; ++out_bit) {
            const Complex amp = local(out_bit, in_bit);
            if (amp == Complex(0.0)) continue;
            const Eigen::Index row = out_bit ? (col | mask) : (col & ~mask);
            out(row, col) = amp;
        }
    }
    return out;
}

double hermiticity_defect(const Operator& op) {
    if (op.rows() != op.cols()) {
        throw ValidationError("operator is not square");
    }
    return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

void require_hermitian(const Operator& op) {
    const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
    const double defect = hermiticity_defect(op);
    if (defect > 1e-10 * scale) {
        throw ValidationError("operator is not Hermitian (defect " + std::to_string(defect) + ")");
    }
}

bool is_real(const Operator& op) {
    return op.imag().cwiseAbs().maxCoeff() == 0.0;
}

// Divide-and-conquer symmetric/Hermitian solvers; `a` is overwritten by the
// eigenvectors when `vectors` is set.
RealVector lapack_syevd(Eigen::MatrixXd& a, bool vectors) {
    const auto n = static_cast<lapack_int>(a.rows());
    RealVector w(n);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, a.data(), n, w.data());
    if (info != 0) {
        throw Error("dsyevd failed with info = " + std::to_string(info));
    }
    return w;
}

RealVector lapack_heevd(Operator& a, bool vectors) {
    const auto n = static_cast<lapack_int>(a.rows());
    RealVector w(n);
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
                                           reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
    if (info != 0) {
        throw Error("zheevd failed with info = " + std::to_string(info));
    }
    return w;
}

// Spot-check a few eigenpairs; some BLAS kernels return garbage silently.
template <typename Matrix>
bool residuals_ok(const Matrix& op, const RealVector& values, const Matrix& vectors) {
    const Eigen::Index n = op.rows();
    const double scale = std::max(1.0, op.cwiseAbs().maxCoeff() * static_cast<double>(n));
    for (Eigen::Index k : {Eigen::Index{0}, n / 2, n - 1}) {
        const auto v = vectors.col(k);
        if (std::abs(v.norm() - 1.0) > 1e-8) return false;
        if ((op * v - values(k) * v).norm() > 1e-9 * scale) return false;
    }
    return true;
}

void warn_fallback_once() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        std::cerr << "qbattery: LAPACK eigensolver failed its residual check; using the slower Eigen solver. "
                     "With OpenBLAS, setting OPENBLAS_CORETYPE=Haswell usually fixes this.\n";
    });
}

template <typename Matrix>
std::pair<RealVector, Matrix> solve(const Matrix& op, bool vectors) {
    Matrix a = op;
    RealVector w;
    if constexpr (std::is_same_v<Matrix, Eigen::MatrixXd>) {
        w = lapack_syevd(a, true);
    } else {
        w = lapack_heevd(a, true);
    }
    if (residuals_ok(op, w, a)) return {std::move(w), std::move(a)};
    warn_fallback_once();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error("Hermitian eigensolver did not converge");
    }
    return {solver.eigenvalues(), vectors ? Matrix(solver.eigenvectors()) : Matrix()};
}

}  // namespace

EigenDecomposition eig_hermitian(const Operator& op) {
    require_hermitian(op);
    EigenDecomposition out;
    if (is_real(op)) {
        auto [w, v] = solve<Eigen::MatrixXd>(op.real(), true);
        out.eigenvalues = std::move(w);
        out.eigenvectors = v.cast<Complex>();
    } else {
        auto [w, v] = solve<Operator>(op, true);
        out.eigenvalues = std::move(w);
        out.eigenvectors = std::move(v);
    }
    return out;
}

RealVector eigenvalues_hermitian(const Operator& op) {
    require_hermitian(op);
    // Eigenvectors are always computed so the residual check can run.
    if (is_real(op)) return solve<Eigen::MatrixXd>(op.real(), false).first;
    return solve<Operator>(op, false).first;
}

namespace {

// MRRR solver restricted to eigenpairs il..iu (1-based).
RealVector lapack_syevr(Eigen::MatrixXd& a, lapack_int count, Eigen::MatrixXd& z) {
    const auto n = static_cast<lapack_int>(a.rows());
    RealVector w(n);
    z.resize(n, count);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, count,
                                           0.0, &found, w.data(), z.data(), n, support.data());
    if (info != 0 || found != count) {
        throw Error("dsyevr failed with info = " + std::to_string(info));
    }
    return w.head(count);
}

RealVector lapack_heevr(Operator& a, lapack_int count, Operator& z) {
    const auto n = static_cast<lapack_int>(a.rows());
    RealVector w(n);
    z.resize(n, count);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n,
                                           reinterpret_cast<lapack_complex_double*>(a.data()), n, 0.0, 0.0, 1,
                                           count, 0.0, &found, w.data(),
                                           reinterpret_cast<lapack_complex_double*>(z.data()), n, support.data());
    if (info != 0 || found != count) {
        throw Error("zheevr failed with info = " + std::to_string(info));
    }
    return w.head(count);
}

template <typename Matrix>
bool all_residuals_ok(const Matrix& op, const RealVector& values, const Matrix& vectors) {
    const double scale = std::max(1.0, op.cwiseAbs().maxCoeff() * static_cast<double>(op.rows()));
    for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
        const auto v = vectors.col(k);
        if (std::abs(v.norm() - 1.0) > 1e-8) return false;
        if ((op * v - values(k) * v).norm() > 1e-9 * scale) return false;
    }
    return true;
}

template <typename Matrix>
std::pair<RealVector, Matrix> solve_lowest(const Matrix& op, Eigen::Index count) {
    Matrix a = op;
    Matrix z;
    RealVector w;
    if constexpr (std::is_same_v<Matrix, Eigen::MatrixXd>) {
        w = lapack_syevr(a, static_cast<lapack_int>(count), z);
    } else {
        w = lapack_heevr(a, static_cast<lapack_int>(count), z);
    }
    if (all_residuals_ok(op, w, z)) return {std::move(w), std::move(z)};
    warn_fallback_once();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op);
    if (solver.info() != Eigen::Success) {
        throw Error("Hermitian eigensolver did not converge");
    }
    return {solver.eigenvalues().head(count), solver.eigenvectors().leftCols(count)};
}

}  // namespace

EigenDecomposition lowest_eigenpairs(const Operator& op, Eigen::Index count) {
    require_hermitian(op);
    if (count < 1 || count > op.rows()) {
        throw ValidationError("requested " + std::to_string(count) + " eigenpairs of a " +
                              std::to_string(op.rows()) + "-dimensional operator");
    }
    EigenDecomposition out;
    if (is_real(op)) {
        auto [w, v] = solve_lowest<Eigen::MatrixXd>(op.real(), count);
        out.eigenvalues = std::move(w);
        out.eigenvectors = v.cast<Complex>();
    } else {
        auto [w, v] = solve_lowest<Operator>(op, count);
        out.eigenvalues = std::move(w);
        out.eigenvectors = std::move(v);
    }
    return out;
}

EigenDecomposition eig_hermitian_sectors(const Operator& op, std::span<const int> sector_of_index) {
    const Eigen::Index dim = op.rows();
    if (static_cast<Eigen::Index>(sector_of_index.size()) != dim) {
        throw ValidationError("sector labels do not cover the operator dimension");
    }
    require_hermitian(op);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (sector_of_index[i] != sector_of_index[j] && op(i, j) != Complex(0.0)) {
                throw ValidationError("operator couples different symmetry sectors");
            }
        }
    }

    std::vector<int> labels(sector_of_index.begin(), sector_of_index.end());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    struct Eigenpair {
        double value;
        int sector_rank;
        Eigen::Index local;
        std::size_t block;
    };
    std::vector<std::vector<Eigen::Index>> members(labels.size());
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto rank = std::lower_bound(labels.begin(), labels.end(), sector_of_index[i]) - labels.begin();
        members[static_cast<std::size_t>(rank)].push_back(i);
    }

    std::vector<EigenDecomposition> blocks(labels.size());
    std::vector<Eigenpair> pairs;
    pairs.reserve(static_cast<std::size_t>(dim));
    for (std::size_t b = 0; b < labels.size(); ++b) {
        const auto& idx = members[b];
        const auto m = static_cast<Eigen::Index>(idx.size());
        Operator sub(m, m);
        for (Eigen::Index j = 0; j < m; ++j)
            for (Eigen::Index i = 0; i < m; ++i) sub(i, j) = op(idx[i], idx[j]);
        blocks[b] = eig_hermitian(sub);
        for (Eigen::Index k = 0; k < m; ++k) {
            pairs.push_back({blocks[b].eigenvalues(k), static_cast<int>(b), k, b});
        }
    }
    // Ascending; ties keep the lower sector label first.
    std::stable_sort(pairs.begin(), pairs.end(), [](const Eigenpair& x, const Eigenpair& y) {
        return x.value < y.value || (x.value == y.value && x.sector_rank < y.sector_rank);
    });

    EigenDecomposition out;
    out.eigenvalues.resize(dim);
    out.eigenvectors = Operator::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const auto& pr = pairs[static_cast<std::size_t>(col)];
        out.eigenvalues(col) = pr.value;
        const auto& idx = members[pr.block];
        for (std::size_t i = 0; i < idx.size(); ++i) {
            out.eigenvectors(idx[i], col) = blocks[pr.block].eigenvectors(static_cast<Eigen::Index>(i), pr.local);
        }
    }
    return out;
}

Operator unitary_exp(const EigenDecomposition& eig, double t) {
    const Eigen::VectorXcd phases =
        (eig.eigenvalues.cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
    return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

Operator unitary_exp(const Operator& op, double t) {
    return unitary_exp(eig_hermitian(op), t);
}

namespace {

struct SiteSplit {
    std::vector<int> kept_bits;    // bit positions, most significant kept site first
    std::vector<int> traced_bits;
};

SiteSplit split_sites(std::span<const int> keep_sites, int n_sites) {
    if (keep_sites.empty()) {
        throw ValidationError("partial trace needs at least one kept site");
    }
    std::vector<int> sites(keep_sites.begin(), keep_sites.end());
    std::sort(sites.begin(), sites.end());
    if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
        throw ValidationError("duplicate site in keep set");
    }
    if (sites.front() < 1 || sites.back() > n_sites) {
        throw ValidationError("keep set has a site outside [1, " + std::to_string(n_sites) + "]");
    }
    SiteSplit split;
    std::size_t k = 0;
    for (int s = 1; s <= n_sites; ++s) {
        if (k < sites.size() && sites[k] == s) {
            split.kept_bits.push_back(site_bit(s, n_sites));
            ++k;
        } else {
            split.traced_bits.push_back(site_bit(s, n_sites));
        }
    }
    return split;
}

// Scatter the bits of `local` (most significant first) onto `positions`.
Eigen::Index deposit(Eigen::Index local, const std::vector<int>& positions) {
    Eigen::Index out = 0;
    const auto n = positions.size();
    for (std::size_t i = 0; i < n; ++i) {
        if ((local >> (n - 1 - i)) & 1) out |= Eigen::Index{1} << positions[i];
    }
    return out;
}

}  // namespace

Operator partial_trace(const Operator& rho, std::span<const int> keep_sites, int n_sites) {
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
    if (rho.rows() != dim || rho.cols() != dim) {
        throw ValidationError("density matrix dimension does not match n_sites");
    }
    const SiteSplit split = split_sites(keep_sites, n_sites);
    const Eigen::Index kept_dim = Eigen::Index{1} << split.kept_bits.size();
    const Eigen::Index traced_dim = Eigen::Index{1} << split.traced_bits.size();

    std::vector<Eigen::Index> kept_offsets(kept_dim), traced_offsets(traced_dim);
    for (Eigen::Index i = 0; i < kept_dim; ++i) kept_offsets[i] = deposit(i, split.kept_bits);
    for (Eigen::Index t = 0; t < traced_dim; ++t) traced_offsets[t] = deposit(t, split.traced_bits);

    Operator out = Operator::Zero(kept_dim, kept_dim);
    for (Eigen::Index t = 0; t < traced_dim; ++t) {
        for (Eigen::Index j = 0; j < kept_dim; ++j) {
            const Eigen::Index col = kept_offsets[j] | traced_offsets[t];
            for (Eigen::Index i = 0; i < kept_dim; ++i) {
                out(i, j) += rho(kept_offsets[i] | traced_offsets[t], col);
            }
        }
    }
    return out;
}

Operator partial_trace(const StateVector& psi, std::span<const int> keep_sites, int n_sites) {
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
    if (psi.size() != dim) {
        throw ValidationError("state dimension does not match n_sites");
    }
    const SiteSplit split = split_sites(keep_sites, n_sites);
    const Eigen::Index kept_dim = Eigen::Index{1} << split.kept_bits.size();
    const Eigen::Index traced_dim = Eigen::Index{1} << split.traced_bits.size();

    // Reshape psi into a kept x traced amplitude matrix A; rho_kept = A A^dagger.
    Operator amplitudes(kept_dim, traced_dim);
    for (Eigen::Index i = 0; i < kept_dim; ++i) {
        const Eigen::Index ki = deposit(i, split.kept_bits);
        for (Eigen::Index t = 0; t < traced_dim; ++t) {
            amplitudes(i, t) = psi(ki | deposit(t, split.traced_bits));
        }
    }
    return amplitudes * amplitudes.adjoint();
}

Operator partial_transpose(const Operator& rho, int subsystem) {
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw ValidationError("partial transpose expects a two-qubit (4x4) operator");
    }
    if (subsystem != 1 && subsystem != 2) {
        throw ValidationError("subsystem must be 1 or 2");
    }
    Operator out(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                    // rho[(a b), (c d)]
                    const int row = 2 * a + b;
                    const int col = 2 * c + d;
                    if (subsystem == 1) {
                        out(2 * c + b, 2 * a + d) = rho(row, col);
                    } else {
                        out(2 * a + d, 2 * c + b) = rho(row, col);
                    }
                }
    return out;
}

double trace_norm(const Operator& op) {
    if (hermiticity_defect(op) <= 1e-10 * std::max(1.0, op.cwiseAbs().maxCoeff())) {
        return eigenvalues_hermitian(op).cwiseAbs().sum();
    }
    Eigen::JacobiSVD<Operator> svd(op);
    return svd.singularValues().sum();
}

Operator clip_to_density(const Operator& rho, double tol) {
    EigenDecomposition eig = eig_hermitian(rho);
    if (eig.eigenvalues.minCoeff() < -tol) {
        throw ValidationError("density matrix has eigenvalue " +
                              std::to_string(eig.eigenvalues.minCoeff()) + " below tolerance");
    }
    RealVector weights = eig.eigenvalues.cwiseMax(0.0);
    const double total = weights.sum();
    if (total <= 0.0) {
        throw ValidationError("density matrix has zero trace");
    }
    weights /= total;
    return eig.eigenvectors * weights.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace qbattery
