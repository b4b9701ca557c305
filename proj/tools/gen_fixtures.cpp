// Regenerates the frozen oracle fixtures under tests/fixtures. The values come
// from the exact-diagonalization oracle for the default three-site chain; they
// are committed so later changes to the library have a fixed reference.

#include <cstdio>
#include <string>
#include <vector>

#include "otoc/spinchain.hpp"
#include "otoc/statevector.hpp"

using namespace otoc;

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "tests/fixtures";

    const std::vector<Temperature> temps = {
        Temperature::zero(),      Temperature::finite(0.5), Temperature::finite(1.0),
        Temperature::finite(2.0), Temperature::finite(3.5), Temperature::finite(6.0),
        Temperature::infinite(),
    };
    const std::vector<double> times = {0.0, 0.2, 0.4, 0.8};

    const SpectralDecomposition sd = diagonalize(build_hamiltonian({3, 1.0, 1.0}));
    const PauliString w = PauliString::single(3, 0, 'X');
    const PauliString v = PauliString::single(3, 0, 'Z');

    const std::string otoc_path = dir + "/oracle_otoc_n3.txt";
    std::FILE* out = std::fopen(otoc_path.c_str(), "w");
    if (!out) {
        std::fprintf(stderr, "cannot write %s\n", otoc_path.c_str());
        return 1;
    }
    std::fprintf(out, "# Thermal OTOC from the exact oracle. Three-site chain, J = g = 1,\n");
    std::fprintf(out, "# open boundaries, W = X on site 1, V = Z on site 1.\n");
    std::fprintf(out, "# Columns: temperature  t  otoc\n");
    for (const Temperature& temp : temps) {
        for (double t : times) {
            std::fprintf(out, "%s %.12g %.12g\n", temp.label().c_str(), t,
                         exact_otoc(sd, temp, t, w, v));
        }
    }
    std::fclose(out);
    std::printf("wrote %s\n", otoc_path.c_str());

    const std::string decay_path = dir + "/decay_rates_n3.txt";
    out = std::fopen(decay_path.c_str(), "w");
    if (!out) {
        std::fprintf(stderr, "cannot write %s\n", decay_path.c_str());
        return 1;
    }
    std::fprintf(out, "# Finite-difference decay rate lambda = (O(0.8) - O(0.4)) / 0.4\n");
    std::fprintf(out, "# from the exact oracle, same chain as oracle_otoc_n3.txt.\n");
    std::fprintf(out, "# Columns: temperature  lambda\n");
    for (const Temperature& temp : temps) {
        const double lambda =
            (exact_otoc(sd, temp, 0.8, w, v) - exact_otoc(sd, temp, 0.4, w, v)) / 0.4;
        std::fprintf(out, "%s %.12g\n", temp.label().c_str(), lambda);
    }
    std::fclose(out);
    std::printf("wrote %s\n", decay_path.c_str());
    return 0;
}
