#include "kstab/polynomial.hpp"

#include "kstab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>
#include <set>
#include <stdexcept>

namespace kstab {

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<int> exps) : exps_(std::move(exps)) {
    for (int e : exps_) {
        if (e < 0) {
            throw std::invalid_argument("negative exponent in monomial");
        }
        degree_ += e;
    }
}

Monomial Monomial::variable(std::size_t nvars, std::size_t index) {
    std::vector<int> e(nvars, 0);
    e.at(index) = 1;
    return Monomial(std::move(e));
}

bool Monomial::divides(const Monomial& other) const {
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (exps_[i] > other.exps_[i]) {
            return false;
        }
    }
    return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] += other.exps_[i];
    }
    return Monomial(std::move(e));
}

Monomial Monomial::quotient_of(const Monomial& other) const {
    std::vector<int> e(other.exps_);
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] -= exps_[i];
    }
    return Monomial(std::move(e));
}

Monomial Monomial::lcm(const Monomial& other) const {
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] = std::max(e[i], other.exps_[i]);
    }
    return Monomial(std::move(e));
}

bool Monomial::coprime(const Monomial& other) const {
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (exps_[i] > 0 && other.exps_[i] > 0) {
            return false;
        }
    }
    return true;
}

// ------------------------------------------------------------ WeightVector

long WeightVector::max_abs() const {
    long m = 0;
    for (long v : eta_) {
        m = std::max(m, std::labs(v));
    }
    return m;
}

WeightVector WeightVector::shifted(long c) const {
    std::vector<long> e(eta_);
    for (auto& v : e) {
        v += c;
    }
    return WeightVector(std::move(e));
}

long monomial_weight(const Monomial& p, const WeightVector& eta) {
    if (p.size() != eta.size()) {
        throw std::invalid_argument("monomial/weight length mismatch");
    }
    long w = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        w += static_cast<long>(p[i]) * eta[i];
    }
    return w;
}

// --------------------------------------------------------------- TermOrder

std::strong_ordering TermOrder::compare(const Monomial& p, const Monomial& q) const {
    if (p.size() != weight_.size() || q.size() != weight_.size()) {
        throw std::invalid_argument("monomial length does not match term order");
    }
    if (p.degree() != q.degree()) {
        // Higher degree first; never exercised inside a homogeneous polynomial.
        return q.degree() <=> p.degree();
    }
    const long wp = monomial_weight(p, weight_);
    const long wq = monomial_weight(q, weight_);
    if (wp != wq) {
        return wp <=> wq;
    }
    // grevlex: p is larger iff the last nonzero entry of p - q is negative,
    // and the larger monomial precedes.
    for (std::size_t i = p.size(); i-- > 0;) {
        if (p[i] != q[i]) {
            return p[i] < q[i] ? std::strong_ordering::less : std::strong_ordering::greater;
        }
    }
    return std::strong_ordering::equal;
}

std::strong_ordering compare_monomials(const TermOrder& order, const Monomial& p, const Monomial& q) {
    return order.compare(p, q);
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::size_t nvars, Terms terms) : nvars_(nvars) {
    for (auto& [m, c] : terms) {
        if (m.size() != nvars) {
            throw std::invalid_argument("term arity does not match polynomial");
        }
        if (!c.is_zero()) {
            terms_.emplace(m, c);
        }
    }
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars), c);
    return p;
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
    Polynomial p(m.size());
    p.add_term(m, c);
    return p;
}

Rational Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

bool Polynomial::is_homogeneous() const { return degrees().size() <= 1; }

int Polynomial::degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) {
        d = std::max(d, m.degree());
    }
    return d;
}

std::vector<int> Polynomial::degrees() const {
    std::set<int> ds;
    for (const auto& [m, c] : terms_) {
        ds.insert(m.degree());
    }
    return {ds.begin(), ds.end()};
}

std::pair<Monomial, Rational> Polynomial::leading_term(const TermOrder& order) const {
    if (terms_.empty()) {
        throw std::logic_error("leading term of zero polynomial");
    }
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
        if (order.precedes(it->first, best->first)) {
            best = it;
        }
    }
    return *best;
}

Polynomial Polynomial::min_weight_part(const WeightVector& eta) const {
    Polynomial out(nvars_);
    if (terms_.empty()) {
        return out;
    }
    long wmin = 0;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        const long w = monomial_weight(m, eta);
        if (first || w < wmin) {
            wmin = w;
            first = false;
        }
    }
    for (const auto& [m, c] : terms_) {
        if (monomial_weight(m, eta) == wmin) {
            out.terms_.emplace(m, c);
        }
    }
    return out;
}

Polynomial Polynomial::monic(const TermOrder& order) const {
    if (is_zero()) {
        return *this;
    }
    return leading_term(order).second.inverse() * *this;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (m.size() != nvars_) {
        throw std::invalid_argument("term arity does not match polynomial");
    }
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (nvars_ == 0 && terms_.empty()) {
        nvars_ = o.nvars_;
    }
    for (const auto& [m, c] : o.terms_) {
        add_term(m, c);
    }
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (nvars_ == 0 && terms_.empty()) {
        nvars_ = o.nvars_;
    }
    for (const auto& [m, c] : o.terms_) {
        add_term(m, -c);
    }
    return *this;
}

Polynomial Polynomial::operator-() const {
    Polynomial out(nvars_);
    for (const auto& [m, c] : terms_) {
        out.terms_.emplace(m, -c);
    }
    return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out(std::max(a.nvars_, b.nvars_));
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            out.add_term(ma * mb, ca * cb);
        }
    }
    return out;
}

Polynomial operator*(const Rational& c, const Polynomial& a) {
    Polynomial out(a.nvars_);
    if (c.is_zero()) {
        return out;
    }
    for (const auto& [m, coef] : a.terms_) {
        out.terms_.emplace(m, c * coef);
    }
    return out;
}

Polynomial Polynomial::times_term(const Monomial& m, const Rational& c) const {
    Polynomial out(nvars_);
    if (c.is_zero()) {
        return out;
    }
    for (const auto& [mm, coef] : terms_) {
        out.terms_.emplace(mm * m, c * coef);
    }
    return out;
}

std::string Polynomial::to_string(const std::vector<std::string>& variables, const TermOrder& order) const {
    if (terms_.empty()) {
        return "0";
    }
    std::vector<std::pair<Monomial, Rational>> sorted(terms_.begin(), terms_.end());
    std::sort(sorted.begin(), sorted.end(),
              [&](const auto& a, const auto& b) { return order.precedes(a.first, b.first); });
    std::string out;
    bool first = true;
    for (const auto& [m, c] : sorted) {
        const bool negative = c.sign() < 0;
        if (first) {
            if (negative) {
                out += "-";
            }
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        const Rational mag = c.abs();
        std::string body;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) {
                continue;
            }
            if (!body.empty()) {
                body += "*";
            }
            body += variables.at(i);
            if (m[i] > 1) {
                body += "^" + std::to_string(m[i]);
            }
        }
        if (body.empty()) {
            out += mag.to_string();
        } else if (mag == Rational(1)) {
            out += body;
        } else {
            out += mag.to_string() + "*" + body;
        }
    }
    return out;
}

std::string Polynomial::to_string(const std::vector<std::string>& variables) const {
    return to_string(variables, TermOrder(WeightVector(std::vector<long>(nvars_, 0))));
}

// ------------------------------------------------------------------ parser

namespace {

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

    Polynomial run() {
        Polynomial result(vars_.size());
        skip_ws();
        int sign = 1;
        if (peek() == '+' || peek() == '-') {
            sign = get() == '-' ? -1 : 1;
            skip_ws();
        }
        result += parse_term(sign);
        for (;;) {
            skip_ws();
            if (at_end()) {
                break;
            }
            const char c = peek();
            if (c != '+' && c != '-') {
                throw ParseError(std::string("unexpected '") + c + "'", pos_);
            }
            get();
            skip_ws();
            result += parse_term(c == '-' ? -1 : 1);
        }
        return result;
    }

private:
    Polynomial parse_term(int sign) {
        Rational coef(sign);
        Monomial mono(vars_.size());
        skip_ws();
        if (at_end()) {
            throw ParseError("expected a term", pos_);
        }
        bool need_factor = true;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coef *= parse_coeff();
            need_factor = false;
            skip_ws();
            if (peek() == '*') {
                get();
                need_factor = true;
            } else {
                return Polynomial::monomial(mono, coef);
            }
        }
        for (;;) {
            if (need_factor) {
                skip_ws();
                mono = mono * parse_factor();
            }
            skip_ws();
            if (peek() == '*') {
                get();
                need_factor = true;
                continue;
            }
            break;
        }
        return Polynomial::monomial(mono, coef);
    }

    Rational parse_coeff() {
        const std::size_t start = pos_;
        mpz_class num(read_digits(), 10);
        skip_ws();
        if (peek() == '/') {
            get();
            skip_ws();
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                throw ParseError("expected denominator", pos_);
            }
            mpz_class den(read_digits(), 10);
            if (den == 0) {
                throw ParseError("zero denominator", start);
            }
            return Rational(num, den);
        }
        return Rational(num, 1);
    }

    Monomial parse_factor() {
        const std::size_t start = pos_;
        if (at_end() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
            throw ParseError("expected a variable", pos_);
        }
        std::string name;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            name += get();
        }
        auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it == vars_.end()) {
            throw ParseError("unknown variable '" + name + "'", start);
        }
        int exponent = 1;
        skip_ws();
        if (peek() == '^') {
            get();
            skip_ws();
            if (peek() == '-') {
                throw ParseError("negative exponent", pos_);
            }
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                throw ParseError("expected exponent", pos_);
            }
            const std::string digits = read_digits();
            if (digits.size() > 6) {
                throw ParseError("exponent too large", pos_);
            }
            exponent = std::stoi(digits);
        }
        std::vector<int> e(vars_.size(), 0);
        e[static_cast<std::size_t>(it - vars_.begin())] = exponent;
        return Monomial(std::move(e));
    }

    std::string read_digits() {
        std::string s;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            s += get();
        }
        return s;
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    char get() { return text_[pos_++]; }

    std::string_view text_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables) {
    return Parser(text, variables).run();
}

}  // namespace kstab
