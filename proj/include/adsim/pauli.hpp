#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace adsim {

/// A word over {I,X,Y,Z} identifying one tensor-product operator on n qubits.
struct PauliString {
    std::string letters;

    explicit PauliString(std::string w);

    int qubits() const { return int(letters.size()); }
    /// Number of non-identity letters.
    int weight() const;

    bool operator==(const PauliString& other) const { return letters == other.letters; }
};

/// Dense Kronecker-product matrix of the Pauli string (dimension 2^n).
Eigen::MatrixXcd pauli_matrix(const PauliString& p);

/// Number of independent real parameters of an L-local n-qubit Hamiltonian:
/// sum_{j<=L} C(n,j) 3^j, with C(n,j) = 0 for j > n. Throws if L < 0.
std::uint64_t count_parameters(int n, int L);

/// All Pauli strings on n qubits with weight <= L, lexicographic order.
std::vector<PauliString> enumerate_strings(int n, int L);

} // namespace adsim
