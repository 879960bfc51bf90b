#ifndef MORSEOPT_MONOMIAL_HPP
#define MORSEOPT_MONOMIAL_HPP

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace morseopt {

// Exponent vector x1^e1 * ... * xn^en. Length is the ambient variable count.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::size_t nvars) : exps_(nvars, 0u) {}
    explicit Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {}

    std::size_t nvars() const { return exps_.size(); }
    std::uint32_t exponent(std::size_t i) const { return exps_[i]; }
    const std::vector<std::uint32_t>& exponents() const { return exps_; }

    std::uint64_t total_degree() const {
        return std::accumulate(exps_.begin(), exps_.end(), std::uint64_t{0});
    }

    bool is_one() const {
        for (auto e : exps_)
            if (e != 0) return false;
        return true;
    }

    // True iff exactly one exponent is nonzero (or all are zero).
    bool is_pure_power(std::size_t var) const {
        for (std::size_t i = 0; i < exps_.size(); ++i)
            if (i != var && exps_[i] != 0) return false;
        return true;
    }

    bool divides(const Monomial& other) const {
        for (std::size_t i = 0; i < exps_.size(); ++i)
            if (exps_[i] > other.exps_[i]) return false;
        return true;
    }

    Monomial operator*(const Monomial& other) const {
        Monomial r(*this);
        for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += other.exps_[i];
        return r;
    }

    // Exact quotient; caller guarantees divisibility.
    Monomial operator/(const Monomial& other) const {
        Monomial r(*this);
        for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] -= other.exps_[i];
        return r;
    }

    static Monomial lcm(const Monomial& a, const Monomial& b) {
        Monomial r(a);
        for (std::size_t i = 0; i < r.exps_.size(); ++i)
            if (b.exps_[i] > r.exps_[i]) r.exps_[i] = b.exps_[i];
        return r;
    }

    bool operator==(const Monomial& other) const { return exps_ == other.exps_; }
    bool operator!=(const Monomial& other) const { return exps_ != other.exps_; }

    // Canonical storage order: graded reverse lexicographic with x1 > x2 > ...
    bool operator<(const Monomial& other) const { return grevlex_less(*this, other); }

    static bool grevlex_less(const Monomial& a, const Monomial& b);
    static bool lex_less(const Monomial& a, const Monomial& b);
    static bool grlex_less(const Monomial& a, const Monomial& b);

    std::string to_string() const;

private:
    std::vector<std::uint32_t> exps_;
};

enum class OrderKind { grevlex, lex, grlex };

// Total multiplicative monomial order: one of the three classic kinds
// composed with a variable permutation. permutation[k] is the index of the
// k-th most significant variable; empty means identity.
struct MonomialOrder {
    OrderKind kind = OrderKind::grevlex;
    std::vector<std::size_t> permutation;

    bool less(const Monomial& a, const Monomial& b) const;
    bool greater(const Monomial& a, const Monomial& b) const { return less(b, a); }

    static MonomialOrder grevlex() { return {OrderKind::grevlex, {}}; }
    static MonomialOrder lex() { return {OrderKind::lex, {}}; }
    static MonomialOrder grlex() { return {OrderKind::grlex, {}}; }
    static MonomialOrder from_name(const std::string& name);
    std::string name() const;
};

}  // namespace morseopt

#endif
