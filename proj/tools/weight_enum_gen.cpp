// Generates exact weight-enumerator data files for short BCH codes by
// enumerating all 2^k codewords from the generator polynomial.  The emitted
// format is the one load_weight_enumerator reads; the checked-in files under
// data/ for the tiny oracle codes were produced with this tool.
//
// usage: weight_enum_gen n k d [output-path]
#include <bit>
#include <cstdlib>
#include <iostream>
#include <string>

#include "bchdtp/code_model.hpp"
#include "bchdtp/decoder_sim.hpp"

using namespace bchdtp;

int main(int argc, char** argv) {
    if (argc != 4 && argc != 5) {
        std::cerr << "usage: weight_enum_gen n k d [output-path]\n";
        return 1;
    }
    try {
        const int n = std::stoi(argv[1]);
        const int k = std::stoi(argv[2]);
        const int d = std::stoi(argv[3]);
        CodeSpec spec = make_bch_spec(n, k, d);
        int b = std::bit_width(static_cast<unsigned>(n));
        if (((1 << b) - 1) != n || n > 63) {
            std::cerr << "need a full-length code with n = 2^b - 1 <= 63\n";
            return 1;
        }
        if (k > 24) {
            std::cerr << "enumeration over 2^k codewords needs k <= 24\n";
            return 1;
        }
        FieldContext field = FieldContext::make(b);
        uint64_t g = bch_generator_poly(spec, field);
        WeightEnumerator we = exact_weight_enumerator_by_enumeration(
            spec, cyclic_generator_rows(g, spec.n));
        std::string path = argc == 5
                               ? argv[4]
                               : "we_" + std::to_string(n) + "_" +
                                     std::to_string(k) + "_" +
                                     std::to_string(d) + ".txt";
        save_weight_enumerator(path, we);
        std::cerr << "wrote " << path << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
