#include "morseopt/monomial.hpp"

#include <stdexcept>

namespace morseopt {

bool Monomial::grevlex_less(const Monomial& a, const Monomial& b) {
    const auto da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    // Ties break on the rightmost differing exponent, larger exponent loses.
    for (std::size_t i = a.exps_.size(); i-- > 0;) {
        if (a.exps_[i] != b.exps_[i]) return a.exps_[i] > b.exps_[i];
    }
    return false;
}

bool Monomial::lex_less(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.exps_.size(); ++i) {
        if (a.exps_[i] != b.exps_[i]) return a.exps_[i] < b.exps_[i];
    }
    return false;
}

bool Monomial::grlex_less(const Monomial& a, const Monomial& b) {
    const auto da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    return lex_less(a, b);
}

std::string Monomial::to_string() const {
    if (is_one()) return "1";
    std::string s;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (exps_[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += "x" + std::to_string(i + 1);
        if (exps_[i] > 1) s += "^" + std::to_string(exps_[i]);
    }
    return s;
}

namespace {

Monomial permuted(const Monomial& m, const std::vector<std::size_t>& perm) {
    std::vector<std::uint32_t> e(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) e[k] = m.exponent(perm[k]);
    return Monomial(std::move(e));
}

}  // namespace

bool MonomialOrder::less(const Monomial& a, const Monomial& b) const {
    const Monomial* pa = &a;
    const Monomial* pb = &b;
    Monomial ta, tb;
    if (!permutation.empty()) {
        ta = permuted(a, permutation);
        tb = permuted(b, permutation);
        pa = &ta;
        pb = &tb;
    }
    switch (kind) {
        case OrderKind::grevlex: return Monomial::grevlex_less(*pa, *pb);
        case OrderKind::lex: return Monomial::lex_less(*pa, *pb);
        case OrderKind::grlex: return Monomial::grlex_less(*pa, *pb);
    }
    return false;
}

MonomialOrder MonomialOrder::from_name(const std::string& name) {
    if (name == "grevlex") return grevlex();
    if (name == "lex") return lex();
    if (name == "grlex") return grlex();
    throw std::invalid_argument("unknown monomial order: " + name);
}

std::string MonomialOrder::name() const {
    switch (kind) {
        case OrderKind::grevlex: return "grevlex";
        case OrderKind::lex: return "lex";
        case OrderKind::grlex: return "grlex";
    }
    return "?";
}

}  // namespace morseopt
