#include "keller/matrix.hpp"

#include <lapacke.h>

#include <algorithm>

namespace keller {

ComplexMatrix pauli(int k) {
    ComplexMatrix s(2, 2);
    switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I_unit, I_unit, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw PreconditionError("pauli: index must be in {0,1,2,3}");
    }
    return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const Eigen::Index br = b.rows(), bc = b.cols();
    ComplexMatrix out(a.rows() * br, a.cols() * bc);
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    return out;
}

ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors) {
    require(!factors.empty(), "kron_all: empty factor list");
    ComplexMatrix out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
    return out;
}

ComplexMatrix kron_pow(const ComplexMatrix& m, int k) {
    require(k >= 0, "kron_pow: negative power");
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int i = 0; i < k; ++i) out = kron(out, m);
    return out;
}

double spectral_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

ComplexMatrix nullspace(const ComplexMatrix& m, double tol) {
    const Eigen::Index cols = m.cols();
    if (cols == 0) return ComplexMatrix(0, 0);
    if (m.rows() == 0) return ComplexMatrix::Identity(cols, cols);
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > cut) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

namespace {

EigenDecomposition run_zgeev(const ComplexMatrix& m, bool vectors) {
    require(m.rows() == m.cols(), "eigenvalues: matrix must be square");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    EigenDecomposition out;
    out.values.resize(n);
    if (n == 0) return out;
    ComplexMatrix work = m;
    if (vectors) out.vectors.resize(n, n);
    auto* a = reinterpret_cast<lapack_complex_double*>(work.data());
    auto* w = reinterpret_cast<lapack_complex_double*>(out.values.data());
    auto* vr = vectors ? reinterpret_cast<lapack_complex_double*>(out.vectors.data()) : nullptr;
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, a, n,
                                          w, nullptr, 1, vr, vectors ? n : 1);
    if (info != 0)
        throw NumericalError("eigenvalues: QR iteration failed to converge (zgeev info=" +
                             std::to_string(info) + ")");
    return out;
}

} // namespace

ComplexVector eigenvalues(const ComplexMatrix& m) { return run_zgeev(m, false).values; }

EigenDecomposition eigen_decompose(const ComplexMatrix& m) { return run_zgeev(m, true); }

ComplexMatrix herm_sqrt(const ComplexMatrix& m, double tol) {
    require(m.rows() == m.cols(), "herm_sqrt: matrix must be square");
    if (m.size() == 0) return m;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
        throw PreconditionError("herm_sqrt: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success) throw NumericalError("herm_sqrt: eigensolver failed");
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -tol * scale)
        throw PreconditionError("herm_sqrt: matrix is not positive semidefinite");
    ev = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shape mismatch");
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace keller
