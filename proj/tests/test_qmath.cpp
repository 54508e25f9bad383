#include <cmath>
#include <random>

#include "doctest.h"
#include "ppqkd/qmath.hpp"
#include "quartic_oracle.hpp"

using namespace ppqkd;

namespace {

const Complex kI{0.0, 1.0};
const double kSqrtHalf = 1.0 / std::sqrt(2.0);

StateVector vec(std::vector<Complex> a) { return StateVector(std::move(a)); }

// Random Hermitian with entries of magnitude O(1).
ComplexMatrix random_hermitian(std::mt19937_64& gen, int dim) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ComplexMatrix m(dim);
    for (int r = 0; r < dim; ++r) {
        m.set(r, r, Complex{dist(gen), 0.0});
        for (int c = r + 1; c < dim; ++c) {
            Complex z{dist(gen), dist(gen)};
            m.set(r, c, z);
            m.set(c, r, std::conj(z));
        }
    }
    return m;
}

StateVector random_state(std::mt19937_64& gen, int dim) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Complex> a(static_cast<std::size_t>(dim));
    for (auto& x : a) x = Complex{dist(gen), dist(gen)};
    return StateVector(std::move(a));
}

}  // namespace

TEST_CASE("tensor product basis and ordering convention") {
    StateVector e0 = StateVector::basis(2, 0);
    StateVector e1 = StateVector::basis(2, 1);

    StateVector t = tensor_product(e0, e0);
    CHECK(t.dim() == 4);
    CHECK(t[0] == Complex{1.0, 0.0});
    CHECK(t[1] == Complex{0.0, 0.0});

    // (1/sqrt2)(1,1) (x) (1,0) -> (1/sqrt2)(1,0,1,0): first factor is the
    // left-hand subsystem, component (j,k) lands at index 2j+k.
    StateVector plus = vec({kSqrtHalf, kSqrtHalf});
    StateVector p = tensor_product(plus, e0);
    CHECK(p[0].real() == doctest::Approx(kSqrtHalf).epsilon(1e-15));
    CHECK(std::abs(p[1]) == doctest::Approx(0.0));
    CHECK(p[2].real() == doctest::Approx(kSqrtHalf).epsilon(1e-15));
    CHECK(std::abs(p[3]) == doctest::Approx(0.0));

    // (1/sqrt2)[|0>|0> + |1>|1>] assembles the maximally entangled pair state
    StateVector bell =
        Complex{kSqrtHalf, 0.0} * (tensor_product(e0, e0) + tensor_product(e1, e1));
    CHECK(bell[0].real() == doctest::Approx(kSqrtHalf));
    CHECK(std::abs(bell[1]) == doctest::Approx(0.0));
    CHECK(std::abs(bell[2]) == doctest::Approx(0.0));
    CHECK(bell[3].real() == doctest::Approx(kSqrtHalf));
}

TEST_CASE("tensor product bilinearity") {
    std::mt19937_64 gen(42);
    for (int rep = 0; rep < 100; ++rep) {
        StateVector u = random_state(gen, 2);
        StateVector v = random_state(gen, 2);
        StateVector w = random_state(gen, 2);
        Complex a{0.3, -0.2}, b{-1.1, 0.7};
        StateVector lhs = tensor_product(a * u + b * v, w);
        StateVector rhs = a * tensor_product(u, w) + b * tensor_product(v, w);
        for (int k = 0; k < 4; ++k) CHECK(std::abs(lhs[k] - rhs[k]) < 1e-12);
    }
}

TEST_CASE("inner product basics and conjugate symmetry") {
    StateVector e0 = StateVector::basis(2, 0);
    StateVector e1 = StateVector::basis(2, 1);
    CHECK(inner_product(e0, e0) == Complex{1.0, 0.0});
    CHECK(inner_product(e0, e1) == Complex{0.0, 0.0});

    // conjugate-linear in the first argument
    StateVector iu = kI * e0;
    CHECK(inner_product(iu, e0).imag() == doctest::Approx(1.0));

    std::mt19937_64 gen(1);
    for (int rep = 0; rep < 100; ++rep) {
        StateVector u = random_state(gen, 4);
        StateVector v = random_state(gen, 4);
        CHECK(std::abs(inner_product(u, v) - std::conj(inner_product(v, u))) < 1e-12);
    }

    CHECK_THROWS_AS(inner_product(e0, StateVector::basis(4, 0)), std::invalid_argument);
}

TEST_CASE("apply") {
    StateVector v = vec({Complex{0.8, 0.0}, Complex{0.0, 0.6}});
    StateVector idv = apply(ComplexMatrix::identity(2), v);
    CHECK(std::abs(idv[0] - v[0]) == doctest::Approx(0.0));
    CHECK(std::abs(idv[1] - v[1]) == doctest::Approx(0.0));

    ComplexMatrix d(2);
    d.set(0, 0, Complex{1.0, 0.0});
    StateVector dv = apply(d, v);
    CHECK(std::abs(dv[0] - v[0]) == doctest::Approx(0.0));
    CHECK(std::abs(dv[1]) == doctest::Approx(0.0));

    // projector onto the +1 outcome of the x observable applied to |0>
    ComplexMatrix px = ComplexMatrix::from_rows(
        {{Complex{0.5, 0.0}, Complex{0.5, 0.0}}, {Complex{0.5, 0.0}, Complex{0.5, 0.0}}});
    StateVector half = apply(px, StateVector::basis(2, 0));
    CHECK(half[0].real() == doctest::Approx(0.5));
    CHECK(half[1].real() == doctest::Approx(0.5));

    CHECK_THROWS_AS(apply(ComplexMatrix::identity(4), v), std::invalid_argument);
}

TEST_CASE("finiteness is enforced") {
    CHECK_THROWS_AS(vec({Complex{std::nan(""), 0.0}, Complex{0.0, 0.0}}), std::invalid_argument);
    ComplexMatrix m(2);
    CHECK_THROWS_AS(m.set(0, 0, Complex{0.0, INFINITY}), std::invalid_argument);
    CHECK_THROWS_AS(vec({Complex{1.0, 0.0}}), std::invalid_argument);  // dim 1 unsupported
}

TEST_CASE("hermitian eigenvalues: fixed spectra") {
    HermitianOperator id4(ComplexMatrix::identity(4));
    auto ev = hermitian_eigenvalues(id4);
    REQUIRE(ev.size() == 4);
    for (double l : ev) CHECK(l == doctest::Approx(1.0).epsilon(1e-12));

    ComplexMatrix d(4);
    d.set(0, 0, Complex{3.0, 0.0});
    d.set(1, 1, Complex{1.0, 0.0});
    d.set(2, 2, Complex{-1.0, 0.0});
    d.set(3, 3, Complex{-3.0, 0.0});
    auto dv = hermitian_eigenvalues(HermitianOperator(d));
    CHECK(dv[0] == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(dv[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(dv[2] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(dv[3] == doctest::Approx(-3.0).epsilon(1e-13));
}

TEST_CASE("hermitian eigensystem: trace and residual properties") {
    std::mt19937_64 gen(1234);
    for (int rep = 0; rep < 60; ++rep) {
        const int dim = (rep % 2 == 0) ? 4 : 2;
        ComplexMatrix m = random_hermitian(gen, dim);
        HermitianOperator h(m);
        HermitianEigen eig = hermitian_eigensystem(h);

        double sum = 0.0;
        for (double l : eig.values) sum += l;
        CHECK(std::abs(sum - m.trace().real()) < 1e-10);

        for (std::size_t k = 0; k + 1 < eig.values.size(); ++k) {
            CHECK(eig.values[k] >= eig.values[k + 1] - 1e-12);  // descending
        }

        for (std::size_t k = 0; k < eig.values.size(); ++k) {
            StateVector hv = apply(m, eig.vectors[k]);
            StateVector lv = Complex{eig.values[k], 0.0} * eig.vectors[k];
            CHECK((hv - lv).norm() <= 1e-9);
            CHECK(eig.vectors[k].is_normalized(1e-10));
        }
    }
}

TEST_CASE("eigenvalues agree with characteristic-polynomial roots") {
    std::mt19937_64 gen(99);
    for (int rep = 0; rep < 40; ++rep) {
        ComplexMatrix m = random_hermitian(gen, 4);
        auto jacobi = hermitian_eigenvalues(HermitianOperator(m));
        auto poly = testing::eigenvalues_via_char_poly(m);
        REQUIRE(poly.size() == 4);
        for (int k = 0; k < 4; ++k) {
            CHECK(jacobi[static_cast<std::size_t>(k)] ==
                  doctest::Approx(poly[static_cast<std::size_t>(k)]).epsilon(1e-8));
        }
    }
}

TEST_CASE("non-hermitian input is rejected") {
    ComplexMatrix m(2);
    m.set(0, 1, Complex{1.0, 0.0});  // upper triangle only
    CHECK_THROWS_AS(HermitianOperator{m}, std::invalid_argument);
    CHECK_THROWS_AS(trace_norm(m), std::invalid_argument);
}

TEST_CASE("trace norm: fixed values and properties") {
    CHECK(trace_norm(ComplexMatrix(4)) == doctest::Approx(0.0));

    ComplexMatrix d(4);
    d.set(0, 0, Complex{1.0, 0.0});
    d.set(1, 1, Complex{-1.0, 0.0});
    CHECK(trace_norm(d) == doctest::Approx(2.0).epsilon(1e-13));

    std::mt19937_64 gen(7);
    for (int rep = 0; rep < 60; ++rep) {
        ComplexMatrix m = random_hermitian(gen, 4);
        const double tn = trace_norm(m);
        CHECK(tn >= std::abs(m.trace().real()) - 1e-10);
        ComplexMatrix neg = Complex{-1.0, 0.0} * m;
        CHECK(trace_norm(neg) == doctest::Approx(tn).epsilon(1e-11));
    }
}

TEST_CASE("hermitian operator accepts tiny asymmetry within tolerance") {
    ComplexMatrix m(2);
    m.set(0, 1, Complex{0.5, 1e-13});
    m.set(1, 0, Complex{0.5, -1e-13 + 5e-14});
    CHECK_NOTHROW(HermitianOperator{m});
}
