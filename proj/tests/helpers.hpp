#ifndef MORSEOPT_TEST_HELPERS_HPP
#define MORSEOPT_TEST_HELPERS_HPP

#include <array>
#include <cstdio>
#include <random>
#include <string>

#include "morseopt/polynomial.hpp"

namespace morseopt::testing {

// Random sparse polynomial with integer coefficients, at most `max_terms`
// terms of total degree <= max_degree.
inline Polynomial random_polynomial(std::mt19937_64& rng, std::size_t nvars, unsigned max_degree,
                                    std::size_t max_terms, int coeff_bound) {
    std::uniform_int_distribution<int> coeff(-coeff_bound, coeff_bound);
    std::uniform_int_distribution<unsigned> expo(0, max_degree);
    std::uniform_int_distribution<std::size_t> nterms(1, max_terms);

    Polynomial p(nvars);
    const std::size_t t = nterms(rng);
    for (std::size_t k = 0; k < t; ++k) {
        std::vector<std::uint32_t> exps(nvars, 0u);
        unsigned budget = max_degree;
        for (std::size_t i = 0; i < nvars; ++i) {
            const unsigned e = expo(rng) % (budget + 1);
            exps[i] = e;
            budget -= e;
        }
        const int c = coeff(rng);
        if (c != 0) p.add_term(Monomial(std::move(exps)), Rational(c));
    }
    return p;
}

// Dense random polynomial: every monomial of degree <= degree gets an
// integer coefficient drawn from [-bound, bound].
inline Polynomial random_dense_polynomial(std::mt19937_64& rng, std::size_t nvars, unsigned degree,
                                          int bound, const std::vector<Monomial>& monomials) {
    std::uniform_int_distribution<int> coeff(-bound, bound);
    Polynomial p(nvars);
    for (const auto& m : monomials) {
        const int c = coeff(rng);
        if (c != 0) p.add_term(m, Rational(c));
    }
    (void)degree;
    return p;
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

// Runs a shell command, capturing stdout (stderr folded in).
inline CommandResult run_command(const std::string& cmd) {
    CommandResult res;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return res;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) res.output.append(buf.data(), n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

inline std::string cli_binary() {
    if (const char* p = std::getenv("MORSE_OPT_BIN")) return p;
    return "./morse-opt";
}

}  // namespace morseopt::testing

#endif
