#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adsim/pauli.hpp"

#include <set>

using namespace adsim;
using Complex = std::complex<double>;

TEST_CASE("single-letter matrices") {
    Eigen::MatrixXcd x = pauli_matrix(PauliString("X"));
    CHECK(x(0, 1) == Complex(1.0, 0.0));
    CHECK(x(1, 0) == Complex(1.0, 0.0));
    CHECK(x(0, 0) == Complex(0.0, 0.0));

    Eigen::MatrixXcd y = pauli_matrix(PauliString("Y"));
    CHECK(y(0, 1) == Complex(0.0, -1.0));
    CHECK(y(1, 0) == Complex(0.0, 1.0));

    Eigen::MatrixXcd z = pauli_matrix(PauliString("Z"));
    CHECK(z(0, 0) == Complex(1.0, 0.0));
    CHECK(z(1, 1) == Complex(-1.0, 0.0));
}

TEST_CASE("kronecker products") {
    CHECK(pauli_matrix(PauliString("II")).isApprox(Eigen::MatrixXcd::Identity(4, 4)));
    Eigen::MatrixXcd zz = pauli_matrix(PauliString("ZZ"));
    Eigen::VectorXcd diag = zz.diagonal();
    CHECK(diag(0) == Complex(1.0, 0.0));
    CHECK(diag(1) == Complex(-1.0, 0.0));
    CHECK(diag(2) == Complex(-1.0, 0.0));
    CHECK(diag(3) == Complex(1.0, 0.0));

    // brute-force Kronecker oracle for a mixed word
    PauliString p("XZ");
    Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(4, 4);
    Eigen::MatrixXcd x = pauli_matrix(PauliString("X"));
    Eigen::MatrixXcd z = pauli_matrix(PauliString("Z"));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) expect.block(2 * i, 2 * j, 2, 2) = x(i, j) * z;
    CHECK(pauli_matrix(p).isApprox(expect, 1e-14));
}

TEST_CASE("pauli matrices are Hermitian, unitary, traceless") {
    for (const char* w : {"X", "YZ", "XIZ", "YYY"}) {
        Eigen::MatrixXcd m = pauli_matrix(PauliString(w));
        CHECK((m - m.adjoint()).norm() < 1e-14);
        CHECK((m * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).norm() < 1e-13);
        CHECK(std::abs(m.trace()) < 1e-13);
    }
    CHECK(std::abs(pauli_matrix(PauliString("II")).trace() - Complex(4.0, 0.0)) < 1e-14);
}

TEST_CASE("string validation and weight") {
    CHECK(PauliString("IXYZ").weight() == 3);
    CHECK(PauliString("III").weight() == 0);
    CHECK_THROWS_AS(PauliString("XA"), std::invalid_argument);
    CHECK_THROWS_AS(PauliString(""), std::invalid_argument);
}

TEST_CASE("parameter count closed form at locality two") {
    for (int n = 2; n <= 6; ++n) {
        auto closed = std::uint64_t(9 * n * n - 3 * n + 2) / 2;
        CHECK(count_parameters(n, 2) == closed);
        CHECK(enumerate_strings(n, 2).size() == closed);
    }
    // binomial convention: requesting locality beyond n adds nothing
    CHECK(count_parameters(1, 1) == 4);
    CHECK(count_parameters(1, 2) == 4);
    CHECK(count_parameters(2, 2) == 16);
    CHECK(count_parameters(2, 3) == 16);
    CHECK(count_parameters(3, 0) == 1);
    CHECK_THROWS_AS(count_parameters(2, -1), std::invalid_argument);
}

TEST_CASE("enumeration is exhaustive and unique") {
    auto strings = enumerate_strings(3, 2);
    std::set<std::string> seen;
    for (const auto& p : strings) {
        CHECK(p.weight() <= 2);
        CHECK(p.qubits() == 3);
        seen.insert(p.letters);
    }
    CHECK(seen.size() == strings.size());
    CHECK(seen.size() == count_parameters(3, 2));
}
