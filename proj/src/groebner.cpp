#include "morseopt/groebner.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace morseopt {

GroebnerLimits GroebnerLimits::from_env() {
    GroebnerLimits l;
    if (const char* s = std::getenv("MORSE_OPT_MAX_COEFF_BITS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(s, &end, 10);
        if (end && *end == '\0' && v > 0) l.max_coeff_bits = static_cast<std::size_t>(v);
    }
    return l;
}

bool GroebnerBasis::is_unit_ideal() const {
    return generators.size() == 1 && generators[0].is_constant() && !generators[0].is_zero();
}

std::pair<Monomial, Rational> leading_term(const Polynomial& p, const MonomialOrder& order) {
    if (p.is_zero()) throw InternalConsistencyError("leading_term of zero polynomial");
    // Canonical storage is grevlex-ascending, so the default order reads the
    // last term directly.
    if (order.kind == OrderKind::grevlex && order.permutation.empty()) {
        auto it = p.terms().rbegin();
        return {it->first, it->second};
    }
    auto best = p.terms().begin();
    for (auto it = std::next(p.terms().begin()); it != p.terms().end(); ++it) {
        if (order.less(best->first, it->first)) best = it;
    }
    return {best->first, best->second};
}

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& order) {
    const auto [lmf, lcf] = leading_term(f, order);
    const auto [lmg, lcg] = leading_term(g, order);
    const Monomial l = Monomial::lcm(lmf, lmg);
    const Polynomial uf = Polynomial::term(f.nvars(), l / lmf, Rational(1) / lcf);
    const Polynomial ug = Polynomial::term(g.nvars(), l / lmg, Rational(1) / lcg);
    return uf * f - ug * g;
}

namespace {

void check_coeff_growth(const Polynomial& p, const GroebnerLimits& limits) {
    if (p.max_coefficient_bits() > limits.max_coeff_bits)
        throw ResourceLimitError("coefficient bit size exceeded cap of " +
                                 std::to_string(limits.max_coeff_bits) +
                                 " bits during basis computation");
}

Polynomial reduce_full(const Polynomial& p, const std::vector<Polynomial>& gens,
                       const std::vector<Monomial>& lms, const MonomialOrder& order,
                       const GroebnerLimits& limits) {
    Polynomial h = p;
    Polynomial rem(p.nvars());
    while (!h.is_zero()) {
        const auto [lm, lc] = leading_term(h, order);
        bool reduced = false;
        for (std::size_t k = 0; k < gens.size(); ++k) {
            if (!lms[k].divides(lm)) continue;
            const auto [glm, glc] = leading_term(gens[k], order);
            const Polynomial q = Polynomial::term(h.nvars(), lm / glm, lc / glc);
            h = h - q * gens[k];
            check_coeff_growth(h, limits);
            reduced = true;
            break;
        }
        if (!reduced) {
            rem.add_term(lm, lc);
            h = h - Polynomial::term(h.nvars(), lm, lc);
        }
    }
    return rem;
}

Polynomial make_monic(const Polynomial& p, const MonomialOrder& order) {
    const auto [lm, lc] = leading_term(p, order);
    return p * (Rational(1) / lc);
}

struct PairKey {
    std::uint64_t lcm_degree;
    Monomial lcm;
    std::size_t i, j;
};

}  // namespace

GroebnerBasis buchberger(const std::vector<Polynomial>& gens, const MonomialOrder& order,
                         const GroebnerLimits& limits) {
    if (gens.empty()) throw std::invalid_argument("buchberger: at least one generator required");
    const std::size_t nvars = gens[0].nvars();
    for (const auto& g : gens)
        if (g.nvars() != nvars)
            throw DimensionMismatchError("generators live in different variable contexts");

    GroebnerBasis result;
    result.order = order;
    result.original = gens;
    result.nvars = nvars;

    std::vector<Polynomial> basis;
    for (const auto& g : gens)
        if (!g.is_zero()) basis.push_back(make_monic(g, order));
    if (basis.empty()) {
        // Zero ideal: empty basis.
        return result;
    }

    std::vector<Monomial> lms;
    for (const auto& g : basis) lms.push_back(leading_term(g, order).first);

    auto pair_less = [&](const std::pair<std::size_t, std::size_t>& a,
                         const std::pair<std::size_t, std::size_t>& b) {
        const Monomial la = Monomial::lcm(lms[a.first], lms[a.second]);
        const Monomial lb = Monomial::lcm(lms[b.first], lms[b.second]);
        const auto da = la.total_degree(), db = lb.total_degree();
        if (da != db) return da < db;
        if (la != lb) return order.less(la, lb);
        return a < b;
    };

    std::vector<std::pair<std::size_t, std::size_t>> queue;
    std::set<std::pair<std::size_t, std::size_t>> done;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) queue.emplace_back(i, j);

    std::size_t processed = 0;
    while (!queue.empty()) {
        // Normal strategy: minimal lcm degree first.
        auto best = std::min_element(queue.begin(), queue.end(), pair_less);
        const auto [i, j] = *best;
        queue.erase(best);
        done.insert({i, j});

        if (++processed > limits.max_pairs)
            throw ResourceLimitError("pair queue cap of " + std::to_string(limits.max_pairs) +
                                     " exceeded during basis computation");

        const Monomial l = Monomial::lcm(lms[i], lms[j]);

        // First criterion: coprime leading monomials.
        if (l.total_degree() == lms[i].total_degree() + lms[j].total_degree()) continue;

        // Chain criterion: some k with LM_k | lcm and both (i,k), (j,k) done.
        bool chained = false;
        for (std::size_t k = 0; k < basis.size() && !chained; ++k) {
            if (k == i || k == j || !lms[k].divides(l)) continue;
            const auto p1 = std::minmax(i, k);
            const auto p2 = std::minmax(j, k);
            if (done.count({p1.first, p1.second}) && done.count({p2.first, p2.second})) chained = true;
        }
        if (chained) continue;

        const Polynomial s = s_polynomial(basis[i], basis[j], order);
        const Polynomial r = reduce_full(s, basis, lms, order, limits);
        if (r.is_zero()) continue;

        basis.push_back(make_monic(r, order));
        lms.push_back(leading_term(basis.back(), order).first);
        for (std::size_t k = 0; k + 1 < basis.size(); ++k) queue.emplace_back(k, basis.size() - 1);
    }

    // Minimalize: drop generators whose leading monomial is divisible by
    // another's.
    std::vector<std::size_t> idx(basis.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (lms[a] != lms[b]) return order.less(lms[a], lms[b]);
        return a < b;
    });
    std::vector<Polynomial> minimal;
    std::vector<Monomial> minimal_lms;
    for (std::size_t k : idx) {
        bool redundant = false;
        for (const auto& lm : minimal_lms) {
            if (lm.divides(lms[k])) {
                redundant = true;
                break;
            }
        }
        if (!redundant) {
            minimal.push_back(basis[k]);
            minimal_lms.push_back(lms[k]);
        }
    }

    // Tail-reduce to the unique reduced basis.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k < minimal.size(); ++k) {
            std::vector<Polynomial> others;
            std::vector<Monomial> other_lms;
            for (std::size_t t = 0; t < minimal.size(); ++t) {
                if (t == k) continue;
                others.push_back(minimal[t]);
                other_lms.push_back(minimal_lms[t]);
            }
            if (others.empty()) continue;
            const Polynomial r = reduce_full(minimal[k], others, other_lms, order, limits);
            if (r != minimal[k]) {
                minimal[k] = make_monic(r, order);
                changed = true;
            }
        }
    }

    result.generators = std::move(minimal);
    result.leading = std::move(minimal_lms);

    if (!verify_groebner(result))
        throw InternalConsistencyError("computed basis failed the Buchberger criterion");
    return result;
}

Polynomial normal_form(const Polynomial& p, const GroebnerBasis& gb) {
    if (p.nvars() != gb.nvars)
        throw DimensionMismatchError("polynomial does not match the basis variable context");
    if (gb.generators.empty()) return p;  // zero ideal
    GroebnerLimits relaxed;
    relaxed.max_coeff_bits = static_cast<std::size_t>(-1);
    return reduce_full(p, gb.generators, gb.leading, gb.order, relaxed);
}

bool is_zero_dimensional(const GroebnerBasis& gb) {
    if (gb.is_unit_ideal()) return true;  // empty variety
    if (gb.generators.empty()) return gb.nvars == 0;
    for (std::size_t i = 0; i < gb.nvars; ++i) {
        bool found = false;
        for (const auto& lm : gb.leading) {
            if (lm.exponent(i) >= 1 && lm.is_pure_power(i)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

QuotientBasis quotient_basis(const GroebnerBasis& gb) {
    if (!is_zero_dimensional(gb))
        throw PositiveDimensionalError("quotient basis requested for a positive-dimensional ideal");
    QuotientBasis qb;
    if (gb.is_unit_ideal()) return qb;  // trivial quotient

    // Pure-power leading monomials bound the staircase box.
    std::vector<std::uint32_t> bound(gb.nvars, 0u);
    for (std::size_t i = 0; i < gb.nvars; ++i) {
        std::uint32_t best = 0;
        for (const auto& lm : gb.leading)
            if (lm.exponent(i) >= 1 && lm.is_pure_power(i))
                best = best == 0 ? lm.exponent(i) : std::min(best, lm.exponent(i));
        bound[i] = best;
    }

    std::vector<std::uint32_t> exps(gb.nvars, 0u);
    std::vector<Monomial> box;
    for (;;) {
        Monomial m{std::vector<std::uint32_t>(exps)};
        bool divisible = false;
        for (const auto& lm : gb.leading) {
            if (lm.divides(m)) {
                divisible = true;
                break;
            }
        }
        if (!divisible) box.push_back(std::move(m));
        // Odometer increment over the box.
        std::size_t pos = 0;
        while (pos < gb.nvars) {
            if (++exps[pos] < bound[pos]) break;
            exps[pos] = 0;
            ++pos;
        }
        if (pos == gb.nvars) break;
    }
    std::sort(box.begin(), box.end(),
              [&](const Monomial& a, const Monomial& b) { return gb.order.less(a, b); });
    qb.standard_monomials = std::move(box);
    return qb;
}

std::optional<std::size_t> total_milnor_number(const Polynomial& f, const MonomialOrder& order,
                                               const GroebnerLimits& limits) {
    const auto deg = f.degree();
    if (!deg || *deg == 0) throw std::invalid_argument("total Milnor number requires a non-constant polynomial");
    const GroebnerBasis gb = buchberger(gradient(f), order, limits);
    if (!is_zero_dimensional(gb)) return std::nullopt;
    return quotient_basis(gb).size();
}

bool verify_groebner(const GroebnerBasis& gb) {
    for (std::size_t i = 0; i < gb.generators.size(); ++i)
        for (std::size_t j = i + 1; j < gb.generators.size(); ++j) {
            const Polynomial s = s_polynomial(gb.generators[i], gb.generators[j], gb.order);
            if (!normal_form(s, gb).is_zero()) return false;
        }
    for (const auto& g : gb.original)
        if (!normal_form(g, gb).is_zero()) return false;
    return true;
}

}  // namespace morseopt
