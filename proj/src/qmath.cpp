#include "ppqkd/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ppqkd {

namespace {

void check_dim(int dim) {
    if (dim != 2 && dim != 4) {
        throw std::invalid_argument("dimension must be 2 or 4, got " + std::to_string(dim));
    }
}

void check_finite(const Complex& c, const char* what) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw std::invalid_argument(std::string(what) + ": non-finite component");
    }
}

void check_same_dim(int a, int b) {
    if (a != b) {
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " +
                                    std::to_string(b));
    }
}

}  // namespace

StateVector::StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
    check_dim(static_cast<int>(amps_.size()));
    for (const auto& a : amps_) check_finite(a, "StateVector");
}

StateVector StateVector::basis(int dim, int index) {
    check_dim(dim);
    if (index < 0 || index >= dim) throw std::invalid_argument("basis index out of range");
    std::vector<Complex> amps(static_cast<std::size_t>(dim), Complex{0.0, 0.0});
    amps[static_cast<std::size_t>(index)] = Complex{1.0, 0.0};
    return StateVector(std::move(amps));
}

StateVector StateVector::zero(int dim) {
    check_dim(dim);
    return StateVector(std::vector<Complex>(static_cast<std::size_t>(dim), Complex{0.0, 0.0}));
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

double StateVector::norm() const { return std::sqrt(norm_sq()); }

bool StateVector::is_normalized(double eps) const { return std::abs(norm_sq() - 1.0) <= eps; }

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n <= 0.0) throw std::invalid_argument("cannot normalize a zero vector");
    std::vector<Complex> amps = amps_;
    for (auto& a : amps) a /= n;
    return StateVector(std::move(amps));
}

StateVector operator+(const StateVector& u, const StateVector& v) {
    check_same_dim(u.dim(), v.dim());
    std::vector<Complex> amps(static_cast<std::size_t>(u.dim()));
    for (int k = 0; k < u.dim(); ++k) amps[static_cast<std::size_t>(k)] = u[k] + v[k];
    return StateVector(std::move(amps));
}

StateVector operator-(const StateVector& u, const StateVector& v) {
    check_same_dim(u.dim(), v.dim());
    std::vector<Complex> amps(static_cast<std::size_t>(u.dim()));
    for (int k = 0; k < u.dim(); ++k) amps[static_cast<std::size_t>(k)] = u[k] - v[k];
    return StateVector(std::move(amps));
}

StateVector operator*(const Complex& c, const StateVector& v) {
    std::vector<Complex> amps(static_cast<std::size_t>(v.dim()));
    for (int k = 0; k < v.dim(); ++k) amps[static_cast<std::size_t>(k)] = c * v[k];
    return StateVector(std::move(amps));
}

Complex inner_product(const StateVector& u, const StateVector& v) {
    check_same_dim(u.dim(), v.dim());
    Complex s{0.0, 0.0};
    for (int k = 0; k < u.dim(); ++k) s += std::conj(u[k]) * v[k];
    return s;
}

StateVector tensor_product(const StateVector& v, const StateVector& w) {
    if (v.dim() != 2 || w.dim() != 2) {
        throw std::invalid_argument("tensor_product expects two qubit states");
    }
    std::vector<Complex> amps(4);
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            amps[static_cast<std::size_t>(2 * j + k)] = v[j] * w[k];
        }
    }
    return StateVector(std::move(amps));
}

ComplexMatrix::ComplexMatrix(int dim)
    : dim_(dim), entries_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
    check_dim(dim);
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int k = 0; k < dim; ++k) m.set(k, k, Complex{1.0, 0.0});
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::vector<std::vector<Complex>> rows) {
    const int dim = static_cast<int>(rows.size());
    ComplexMatrix m(dim);
    for (int r = 0; r < dim; ++r) {
        if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != dim) {
            throw std::invalid_argument("from_rows: ragged rows");
        }
        for (int c = 0; c < dim; ++c) m.set(r, c, rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    }
    return m;
}

void ComplexMatrix::set(int r, int c, const Complex& value) {
    check_finite(value, "ComplexMatrix");
    entries_[static_cast<std::size_t>(r) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)] = value;
}

Complex ComplexMatrix::trace() const {
    Complex s{0.0, 0.0};
    for (int k = 0; k < dim_; ++k) s += at(k, k);
    return s;
}

ComplexMatrix ComplexMatrix::dagger() const {
    ComplexMatrix m(dim_);
    for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < dim_; ++c) m.set(r, c, std::conj(at(c, r)));
    }
    return m;
}

bool ComplexMatrix::is_hermitian(double eps) const {
    for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < dim_; ++c) {
            if (std::abs(at(r, c) - std::conj(at(c, r))) > eps) return false;
        }
    }
    return true;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_dim(a.dim(), b.dim());
    ComplexMatrix m(a.dim());
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c) m.set(r, c, a.at(r, c) + b.at(r, c));
    return m;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_dim(a.dim(), b.dim());
    ComplexMatrix m(a.dim());
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c) m.set(r, c, a.at(r, c) - b.at(r, c));
    return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_dim(a.dim(), b.dim());
    ComplexMatrix m(a.dim());
    for (int r = 0; r < a.dim(); ++r) {
        for (int c = 0; c < a.dim(); ++c) {
            Complex s{0.0, 0.0};
            for (int k = 0; k < a.dim(); ++k) s += a.at(r, k) * b.at(k, c);
            m.set(r, c, s);
        }
    }
    return m;
}

ComplexMatrix operator*(const Complex& c, const ComplexMatrix& a) {
    ComplexMatrix m(a.dim());
    for (int r = 0; r < a.dim(); ++r)
        for (int k = 0; k < a.dim(); ++k) m.set(r, k, c * a.at(r, k));
    return m;
}

StateVector apply(const ComplexMatrix& m, const StateVector& v) {
    check_same_dim(m.dim(), v.dim());
    std::vector<Complex> amps(static_cast<std::size_t>(m.dim()));
    for (int r = 0; r < m.dim(); ++r) {
        Complex s{0.0, 0.0};
        for (int c = 0; c < m.dim(); ++c) s += m.at(r, c) * v[c];
        amps[static_cast<std::size_t>(r)] = s;
    }
    return StateVector(std::move(amps));
}

ComplexMatrix outer_product(const StateVector& v) {
    ComplexMatrix m(v.dim());
    for (int r = 0; r < v.dim(); ++r)
        for (int c = 0; c < v.dim(); ++c) m.set(r, c, v[r] * std::conj(v[c]));
    return m;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != 2 || b.dim() != 2) {
        throw std::invalid_argument("matrix tensor_product expects two 2x2 factors");
    }
    ComplexMatrix m(4);
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q) m.set(2 * j + p, 2 * k + q, a.at(j, k) * b.at(p, q));
    return m;
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : matrix_(std::move(m)) {
    if (!matrix_.is_hermitian()) {
        throw std::invalid_argument("HermitianOperator: conjugate symmetry violated");
    }
}

namespace {

// Cyclic Jacobi on a small real symmetric matrix, eigenvectors accumulated.
// n is at most 8 (the embedding of a 4x4 complex Hermitian matrix).
constexpr int kMaxEmbedded = 8;
constexpr int kMaxSweeps = 100;

struct SmallSym {
    int n = 0;
    double a[kMaxEmbedded][kMaxEmbedded] = {};
    double v[kMaxEmbedded][kMaxEmbedded] = {};
};

double max_off_diagonal(const SmallSym& s) {
    double m = 0.0;
    for (int p = 0; p < s.n; ++p)
        for (int q = p + 1; q < s.n; ++q) m = std::max(m, std::abs(s.a[p][q]));
    return m;
}

void rotate(SmallSym& s, int p, int q) {
    const double apq = s.a[p][q];
    if (apq == 0.0) return;
    const double theta = (s.a[q][q] - s.a[p][p]) / (2.0 * apq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double sn = t * c;
    for (int k = 0; k < s.n; ++k) {
        const double akp = s.a[k][p];
        const double akq = s.a[k][q];
        s.a[k][p] = c * akp - sn * akq;
        s.a[k][q] = sn * akp + c * akq;
    }
    for (int k = 0; k < s.n; ++k) {
        const double apk = s.a[p][k];
        const double aqk = s.a[q][k];
        s.a[p][k] = c * apk - sn * aqk;
        s.a[q][k] = sn * apk + c * aqk;
    }
    for (int k = 0; k < s.n; ++k) {
        const double vkp = s.v[k][p];
        const double vkq = s.v[k][q];
        s.v[k][p] = c * vkp - sn * vkq;
        s.v[k][q] = sn * vkp + c * vkq;
    }
}

void jacobi_diagonalize(SmallSym& s) {
    for (int k = 0; k < s.n; ++k) s.v[k][k] = 1.0;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (max_off_diagonal(s) < tol::eig_off_diag) return;
        for (int p = 0; p < s.n; ++p)
            for (int q = p + 1; q < s.n; ++q) rotate(s, p, q);
    }
    if (max_off_diagonal(s) >= tol::eig_off_diag) {
        throw std::runtime_error("Jacobi eigensolver did not converge in 100 sweeps");
    }
}

}  // namespace

HermitianEigen hermitian_eigensystem(const HermitianOperator& h) {
    const ComplexMatrix& m = h.matrix();
    const int n = m.dim();

    // Real-symmetric embedding [[Re, -Im], [Im, Re]] doubles each eigenvalue.
    SmallSym s;
    s.n = 2 * n;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const double re = m.at(r, c).real();
            const double im = m.at(r, c).imag();
            s.a[r][c] = re;
            s.a[r + n][c + n] = re;
            s.a[r][c + n] = -im;
            s.a[r + n][c] = im;
        }
    }
    jacobi_diagonalize(s);

    std::vector<int> order(static_cast<std::size_t>(s.n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&s](int i, int j) { return s.a[i][i] > s.a[j][j]; });

    HermitianEigen out;
    for (int k = 0; k < s.n; k += 2) {  // every other entry of the doubled spectrum
        const int col = order[static_cast<std::size_t>(k)];
        out.values.push_back(s.a[col][col]);
        std::vector<Complex> amps(static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) {
            amps[static_cast<std::size_t>(r)] = Complex{s.v[r][col], s.v[r + n][col]};
        }
        out.vectors.emplace_back(StateVector(std::move(amps)).normalized());
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const HermitianOperator& h) {
    return hermitian_eigensystem(h).values;
}

double trace_norm(const ComplexMatrix& m) {
    if (!m.is_hermitian()) {
        throw std::invalid_argument("trace_norm: input must be Hermitian");
    }
    double s = 0.0;
    for (double lambda : hermitian_eigenvalues(HermitianOperator(m))) s += std::abs(lambda);
    return s;
}

}  // namespace ppqkd
