#include <doctest.h>

#include "envsdr/numeric.hpp"
#include "envsdr/rng.hpp"

using namespace envsdr;

namespace {

Matrix random_sym(int p, Rng& rng) {
    Matrix m(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) m(i, j) = rng.gauss();
    return symmetrize(m);
}

Matrix random_spd(int p, Rng& rng) {
    Matrix a(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) a(i, j) = rng.gauss();
    return a * a.transpose() + 0.1 * Matrix::Identity(p, p);
}

}  // namespace

TEST_CASE("sym_eigen identity") {
    EigenSystem es = sym_eigen(Matrix::Identity(3, 3));
    for (int j = 0; j < 3; ++j) CHECK(es.values[j] == doctest::Approx(1.0));
    CHECK((es.vectors.transpose() * es.vectors - Matrix::Identity(3, 3)).norm() < 1e-10);
}

TEST_CASE("sym_eigen diagonal") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 3.0;
    m(1, 1) = 1.0;
    EigenSystem es = sym_eigen(m);
    CHECK(es.values[0] == doctest::Approx(3.0));
    CHECK(es.values[1] == doctest::Approx(1.0));
    CHECK(std::abs(es.vectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(es.vectors(1, 1)) == doctest::Approx(1.0));
    // sign rule: dominant entry positive
    CHECK(es.vectors(0, 0) > 0.0);
    CHECK(es.vectors(1, 1) > 0.0);
}

TEST_CASE("sym_eigen reconstruction and determinism") {
    Rng rng(42);
    for (int t = 0; t < 5; ++t) {
        Matrix m = random_sym(5, rng);
        EigenSystem es = sym_eigen(m);
        Matrix rec = es.vectors * es.values.asDiagonal() * es.vectors.transpose();
        CHECK((rec - m).norm() / std::max(1.0, m.norm()) < 1e-8);
        for (int j = 1; j < 5; ++j) CHECK(es.values[j - 1] >= es.values[j]);
        EigenSystem again = sym_eigen(m);
        CHECK((again.vectors - es.vectors).norm() == 0.0);
    }
}

TEST_CASE("sym_eigen rejects bad input") {
    Matrix m = Matrix::Identity(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(sym_eigen(m), InvalidInput);
    CHECK_THROWS_AS(sym_eigen(Matrix::Ones(2, 3)), InvalidInput);
}

TEST_CASE("inv_sqrt identity and diagonal") {
    CHECK((inv_sqrt(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() < 1e-12);
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 4.0;
    m(1, 1) = 9.0;
    Matrix s = inv_sqrt(m);
    CHECK(s(0, 0) == doctest::Approx(0.5));
    CHECK(s(1, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(std::abs(s(0, 1)) < 1e-14);
}

TEST_CASE("inv_sqrt reconstruction") {
    Rng rng(7);
    for (int t = 0; t < 5; ++t) {
        Matrix m = random_spd(4, rng);
        Matrix s = inv_sqrt(m);
        CHECK((s * m * s - Matrix::Identity(4, 4)).norm() < 1e-8);
    }
}

TEST_CASE("inv_sqrt rejects indefinite input") {
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = -1.0;
    CHECK_THROWS_AS(inv_sqrt(m), NotPSD);
}

TEST_CASE("projection basics") {
    Matrix e1 = Matrix::Zero(2, 1);
    e1(0, 0) = 1.0;
    Matrix p = projection(e1);
    CHECK(p(0, 0) == doctest::Approx(1.0));
    CHECK(p(1, 1) == doctest::Approx(0.0));
    CHECK(p(0, 1) == doctest::Approx(0.0));

    CHECK((projection(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() < 1e-12);

    Matrix diag = Matrix::Constant(2, 1, 1.0 / std::sqrt(2.0));
    Matrix pd = projection(diag);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(pd(i, j) == doctest::Approx(0.5));
}

TEST_CASE("projection idempotent with 0/1 spectrum") {
    Rng rng(11);
    Matrix raw(5, 2);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 2; ++j) raw(i, j) = rng.gauss();
    Matrix b = orthonormalize(raw);
    Matrix p = projection(b);
    CHECK((p * p - p).norm() < 1e-10);
    CHECK(p.trace() == doctest::Approx(2.0));
    EigenSystem es = sym_eigen(p);
    for (int j = 0; j < 5; ++j) {
        const double v = es.values[j];
        CHECK(std::min(std::abs(v), std::abs(v - 1.0)) < 1e-10);
    }
}

TEST_CASE("orthonormalize keeps the span") {
    Rng rng(13);
    Matrix raw(6, 3);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 3; ++j) raw(i, j) = rng.gauss();
    raw.col(2) = 2.5 * raw.col(2);  // non-unit columns
    Matrix q = orthonormalize(raw);
    CHECK((q.transpose() * q - Matrix::Identity(3, 3)).norm() < 1e-10);
    CHECK((projection(q) * raw - raw).norm() < 1e-8);
}

TEST_CASE("trace_correlation endpoints") {
    Matrix e1 = Matrix::Zero(2, 1), e2 = Matrix::Zero(2, 1);
    e1(0, 0) = 1.0;
    e2(1, 0) = 1.0;
    CHECK(trace_correlation(e1, e1) == doctest::Approx(1.0));
    CHECK(trace_correlation(e1, e2) == doctest::Approx(0.0));

    Matrix mid = Matrix::Constant(2, 1, 1.0 / std::sqrt(2.0));
    CHECK(trace_correlation(e1, mid) == doctest::Approx(std::sqrt(0.5)));
    CHECK(trace_correlation(mid, e1) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("trace_correlation rank mismatch") {
    Matrix a = Matrix::Identity(3, 1), b = Matrix::Identity(3, 2);
    CHECK_THROWS_AS(trace_correlation(a, b), RankMismatch);
    Matrix c = Matrix::Identity(4, 1);
    CHECK_THROWS_AS(trace_correlation(a, c), RankMismatch);
}

TEST_CASE("trace_correlation invariant to orthogonal rotation of a basis") {
    Rng rng(17);
    for (int t = 0; t < 10; ++t) {
        Matrix raw1(6, 2), raw2(6, 2), rot(2, 2);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 2; ++j) {
                raw1(i, j) = rng.gauss();
                raw2(i, j) = rng.gauss();
            }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) rot(i, j) = rng.gauss();
        Matrix b1 = orthonormalize(raw1);
        Matrix b2 = orthonormalize(raw2);
        Matrix q = orthonormalize(rot);
        CHECK(trace_correlation(b1, b2) == doctest::Approx(trace_correlation(b1 * q, b2)).epsilon(1e-8));
    }
}
