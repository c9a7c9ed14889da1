#include "kstab/groebner.hpp"

#include "kstab/errors.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

namespace kstab {

namespace {

std::string join_degrees(const std::vector<int>& ds) {
    std::string s;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        s += (i == 0 ? "" : " vs ") + std::to_string(ds[i]);
    }
    return s;
}

// Index of the first basis element whose leading monomial divides m, or -1.
int find_reducer(const std::vector<Monomial>& leads, const Monomial& m) {
    for (std::size_t i = 0; i < leads.size(); ++i) {
        if (leads[i].divides(m)) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

Polynomial reduce(Polynomial f, const std::vector<Polynomial>& basis, const std::vector<Monomial>& leads,
                  const TermOrder& order) {
    Polynomial remainder(f.nvars());
    while (!f.is_zero()) {
        auto [lm, lc] = f.leading_term(order);
        const int r = find_reducer(leads, lm);
        if (r < 0) {
            remainder.add_term(lm, lc);
            f.add_term(lm, -lc);
            continue;
        }
        // basis elements are monic
        f -= basis[static_cast<std::size_t>(r)].times_term(leads[static_cast<std::size_t>(r)].quotient_of(lm), lc);
    }
    return remainder;
}

Polynomial s_polynomial(const Polynomial& f, const Monomial& lf, const Polynomial& g, const Monomial& lg) {
    const Monomial l = lf.lcm(lg);
    return f.times_term(lf.quotient_of(l), Rational(1)) - g.times_term(lg.quotient_of(l), Rational(1));
}

}  // namespace

Ideal::Ideal(std::size_t nvars, std::vector<Polynomial> generators) : nvars_(nvars) {
    for (std::size_t i = 0; i < generators.size(); ++i) {
        auto& g = generators[i];
        if (g.nvars() != nvars && !g.is_zero()) {
            throw ValidationError("generator " + std::to_string(i) + " has the wrong number of variables");
        }
        if (!g.is_homogeneous()) {
            throw ValidationError("generator " + std::to_string(i) + " is not homogeneous (degrees " +
                                  join_degrees(g.degrees()) + ")");
        }
        if (!g.is_zero()) {
            generators_.push_back(std::move(g));
        }
    }
}

std::vector<Monomial> GroebnerBasis::leading_monomials() const {
    std::vector<Monomial> out;
    out.reserve(elements.size());
    for (const auto& g : elements) {
        out.push_back(g.leading_term(order).first);
    }
    return out;
}

bool GroebnerBasis::is_unit() const {
    return std::any_of(elements.begin(), elements.end(), [](const Polynomial& g) { return g.degree() == 0; });
}

GroebnerBasis buchberger(const Ideal& ideal, const TermOrder& order) {
    if (order.size() != ideal.nvars()) {
        throw std::invalid_argument("term order length does not match the ideal");
    }
    std::vector<Polynomial> basis;
    std::vector<Monomial> leads;
    auto add = [&](const Polynomial& p) {
        Polynomial m = p.monic(order);
        leads.push_back(m.leading_term(order).first);
        basis.push_back(std::move(m));
    };

    // Pairs keyed by (lcm degree, lcm in term order, i, j): the normal strategy.
    struct Pair {
        Monomial lcm;
        std::size_t i;
        std::size_t j;
    };
    auto pair_less = [&](const Pair& a, const Pair& b) {
        if (a.lcm.degree() != b.lcm.degree()) {
            return a.lcm.degree() < b.lcm.degree();
        }
        const auto c = order.compare(a.lcm, b.lcm);
        if (c != 0) {
            return c < 0;
        }
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    };
    std::vector<Pair> pairs;
    auto push_pairs = [&](std::size_t j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (!leads[i].coprime(leads[j])) {
                pairs.push_back({leads[i].lcm(leads[j]), i, j});
            }
        }
    };

    for (const auto& g : ideal.generators()) {
        Polynomial r = reduce(g, basis, leads, order);
        if (!r.is_zero()) {
            add(r);
            push_pairs(basis.size() - 1);
        }
    }

    while (!pairs.empty()) {
        auto it = std::min_element(pairs.begin(), pairs.end(), pair_less);
        const Pair p = *it;
        pairs.erase(it);
        Polynomial s = s_polynomial(basis[p.i], leads[p.i], basis[p.j], leads[p.j]);
        Polynomial r = reduce(std::move(s), basis, leads, order);
        if (!r.is_zero()) {
            add(r);
            push_pairs(basis.size() - 1);
        }
    }

    // Minimalize: drop elements whose leading monomial is divisible by another's.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
            if (i == j || !leads[j].divides(leads[i])) {
                continue;
            }
            // equal leading monomials: keep the earlier one
            redundant = leads[j] != leads[i] || j < i;
        }
        if (!redundant) {
            keep.push_back(i);
        }
    }
    std::vector<Polynomial> minimal;
    std::vector<Monomial> minimal_leads;
    for (std::size_t i : keep) {
        minimal.push_back(basis[i]);
        minimal_leads.push_back(leads[i]);
    }

    // Inter-reduce the tails.
    GroebnerBasis out{{}, order};
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Polynomial> others;
        std::vector<Monomial> other_leads;
        for (std::size_t j = 0; j < minimal.size(); ++j) {
            if (j != i) {
                others.push_back(minimal[j]);
                other_leads.push_back(minimal_leads[j]);
            }
        }
        Polynomial tail = minimal[i] - Polynomial::monomial(minimal_leads[i]);
        Polynomial reduced = Polynomial::monomial(minimal_leads[i]) + reduce(tail, others, other_leads, order);
        out.elements.push_back(std::move(reduced));
    }
    std::sort(out.elements.begin(), out.elements.end(), [&](const Polynomial& a, const Polynomial& b) {
        return order.precedes(a.leading_term(order).first, b.leading_term(order).first);
    });
    return out;
}

Polynomial normal_form(const Polynomial& f, const GroebnerBasis& basis) {
    if (!basis.elements.empty() && !f.is_zero() && f.nvars() != basis.elements.front().nvars()) {
        throw std::invalid_argument("normal_form: ambient dimension mismatch");
    }
    std::vector<Polynomial> monic;
    for (const auto& g : basis.elements) {
        monic.push_back(g.monic(basis.order));
    }
    return reduce(f, monic, basis.leading_monomials(), basis.order);
}

InitialIdeal initial_ideal(const GroebnerBasis& basis) {
    InitialIdeal out;
    out.weight = basis.order.weight();
    out.nvars = basis.order.size();
    for (const auto& g : basis.elements) {
        out.generators.push_back(g.min_weight_part(out.weight));
    }
    out.leading = basis.leading_monomials();
    return out;
}

InitialIdeal initial_ideal(const Ideal& ideal, const WeightVector& eta) {
    return initial_ideal(buchberger(ideal, TermOrder(eta)));
}

std::vector<Monomial> monomials_of_degree(std::size_t nvars, int k) {
    std::vector<Monomial> out;
    if (k < 0) {
        return out;
    }
    if (nvars == 0) {
        if (k == 0) {
            out.emplace_back(0);
        }
        return out;
    }
    std::vector<int> e(nvars, 0);
    // Recursive fill: first coordinate takes k, k-1, ..., 0.
    auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == nvars) {
            e[pos] = remaining;
            out.emplace_back(e);
            return;
        }
        for (int a = remaining; a >= 0; --a) {
            e[pos] = a;
            self(self, pos + 1, remaining - a);
        }
    };
    rec(rec, 0, k);
    return out;
}

StandardMonomialBasis standard_monomials(const std::vector<Monomial>& leading, std::size_t nvars, int k) {
    if (k < 0) {
        throw std::invalid_argument("standard_monomials: negative degree");
    }
    StandardMonomialBasis out;
    out.degree = k;
    for (auto& m : monomials_of_degree(nvars, k)) {
        const bool divisible =
            std::any_of(leading.begin(), leading.end(), [&](const Monomial& l) { return l.divides(m); });
        if (!divisible) {
            out.monomials.push_back(std::move(m));
        }
    }
    return out;
}

StandardMonomialBasis standard_monomials(const InitialIdeal& init, int k) {
    return standard_monomials(init.leading, init.nvars, k);
}

int krull_dimension(const std::vector<Monomial>& monomials, std::size_t nvars) {
    if (nvars > 24) {
        throw std::invalid_argument("krull_dimension: too many variables for subset search");
    }
    for (const auto& m : monomials) {
        if (m.degree() == 0) {
            return -1;  // unit ideal, empty scheme
        }
    }
    int best = 0;
    const unsigned long full = 1UL << nvars;
    for (unsigned long mask = 0; mask < full; ++mask) {
        const int size = __builtin_popcountl(mask);
        if (size <= best) {
            continue;
        }
        // Coordinates outside `mask` vanish; the subset is free iff no generator lives inside it.
        bool free = true;
        for (const auto& m : monomials) {
            bool inside = true;
            for (std::size_t i = 0; i < nvars && inside; ++i) {
                if (m[i] > 0 && !(mask & (1UL << i))) {
                    inside = false;
                }
            }
            if (inside) {
                free = false;
                break;
            }
        }
        if (free) {
            best = size;
        }
    }
    return best;
}

}  // namespace kstab
