#include "adsim/pauli.hpp"

#include <algorithm>
#include <stdexcept>

namespace adsim {

namespace {

Eigen::Matrix2cd single_pauli(char c) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    const std::complex<double> i{0.0, 1.0};
    switch (c) {
    case 'I':
        m.setIdentity();
        break;
    case 'X':
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        break;
    case 'Y':
        m(0, 1) = -i;
        m(1, 0) = i;
        break;
    case 'Z':
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
        break;
    default:
        throw std::invalid_argument(std::string("PauliString: bad letter '") + c + "'");
    }
    return m;
}

} // namespace

PauliString::PauliString(std::string w) : letters(std::move(w)) {
    if (letters.empty()) throw std::invalid_argument("PauliString: empty word");
    for (char c : letters)
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
            throw std::invalid_argument(std::string("PauliString: bad letter '") + c + "'");
}

int PauliString::weight() const {
    int w = 0;
    for (char c : letters)
        if (c != 'I') ++w;
    return w;
}

Eigen::MatrixXcd pauli_matrix(const PauliString& p) {
    Eigen::MatrixXcd acc = single_pauli(p.letters[0]);
    for (std::size_t k = 1; k < p.letters.size(); ++k) {
        Eigen::Matrix2cd next = single_pauli(p.letters[k]);
        Eigen::MatrixXcd out(acc.rows() * 2, acc.cols() * 2);
        for (Eigen::Index r = 0; r < acc.rows(); ++r)
            for (Eigen::Index c = 0; c < acc.cols(); ++c)
                out.block(2 * r, 2 * c, 2, 2) = acc(r, c) * next;
        acc = std::move(out);
    }
    return acc;
}

std::uint64_t count_parameters(int n, int L) {
    if (n < 1) throw std::invalid_argument("count_parameters: n must be >= 1");
    if (L < 0) throw std::invalid_argument("count_parameters: L must be >= 0");
    std::uint64_t total = 0;
    std::uint64_t binom = 1; // C(n, j)
    std::uint64_t pow3 = 1;
    for (int j = 0; j <= std::min(L, n); ++j) { // C(n, j) = 0 past j = n
        total += binom * pow3;
        binom = binom * std::uint64_t(n - j) / std::uint64_t(j + 1);
        pow3 *= 3;
    }
    return total;
}

std::vector<PauliString> enumerate_strings(int n, int L) {
    if (n < 1) throw std::invalid_argument("enumerate_strings: n must be >= 1");
    std::vector<PauliString> out;
    std::string word(std::size_t(n), 'I');
    const char alphabet[4] = {'I', 'X', 'Y', 'Z'};
    // counted radix-4 walk, pruned by weight
    std::vector<int> digits(std::size_t(n), 0);
    while (true) {
        int w = 0;
        for (int d : digits) w += (d != 0);
        if (w <= L) {
            for (int k = 0; k < n; ++k) word[std::size_t(k)] = alphabet[digits[std::size_t(k)]];
            out.emplace_back(word);
        }
        int pos = n - 1;
        while (pos >= 0 && digits[std::size_t(pos)] == 3) digits[std::size_t(pos--)] = 0;
        if (pos < 0) break;
        ++digits[std::size_t(pos)];
    }
    return out;
}

} // namespace adsim
