// Writes markov_fan.svg: the G-fan of the Markov matrix to depth 6 with the
// global bound, the maximal-branch local bounds and the separating planes.

#include <fstream>
#include <iostream>

#include "ccfan/ccfan.hpp"

using namespace ccfan;

int main(int argc, char** argv) {
    const char* out = argc > 1 ? argv[1] : "markov_fan.svg";
    auto B = validate(Mat3<double>::from_rows({0, -2, 2, 2, 0, -2, -2, 2, 0}));
    RenderScene sc = build_scene(B, 6, {"cones", "orthants", "global", "local", "planes"});
    std::ofstream(out) << to_svg(sc);
    for (const auto& [layer, n] : sc.counts) std::cout << layer << ": " << n << "\n";
    std::cout << "wrote " << out << "\n";
}
