// Walks the word 1 2 1 on the non-minimum example and prints G at each step,
// then the decreasing sequence and the minimum matrix of its class.

#include <iostream>

#include "ccfan/ccfan.hpp"

using namespace ccfan;

int main() {
    auto B = validate(Mat3<double>::from_rows({0, -228, 1795, 228, 0, -409252, -1795, 409252, 0}));
    std::cout << "Markov constant " << markov_constant(B) << "\n";

    Seed<double> s = initial_seed(B);
    for (int k : {0, 1, 0}) {
        s = mutate_seed(s, k);
        std::cout << "G at [" << word_string(s.word, ",") << "] = " << s.st() << "\n" << format_matrix(s.G);
    }

    Descent<double> ds = decreasing_sequence(B, 32);
    std::cout << "delta(B) = " << word_string(ds.word) << "\nminimum:\n" << format_matrix(ds.minimum.b);
}
