#include "qrr/expr.hpp"

#include <cctype>
#include <memory>

namespace qrr {

namespace {

struct Node {
    enum Kind { Num, Ident, Neg, Add, Sub, Mul, Pow } kind;
    Rat num;
    std::string name;
    std::unique_ptr<Node> a, b;
};
using NodePtr = std::unique_ptr<Node>;

class Parser {
  public:
    explicit Parser(const std::string& src) : s_(src) {}

    NodePtr parse() {
        auto e = expr();
        skip_ws();
        expect(pos_ == s_.size(), Err::ParseError, "trailing input in '" + s_ + "'");
        return e;
    }

  private:
    const std::string& s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr expr() {
        auto lhs = term();
        while (true) {
            if (eat('+')) {
                auto n = std::make_unique<Node>();
                n->kind = Node::Add;
                n->a = std::move(lhs);
                n->b = term();
                lhs = std::move(n);
            } else if (eat('-')) {
                auto n = std::make_unique<Node>();
                n->kind = Node::Sub;
                n->a = std::move(lhs);
                n->b = term();
                lhs = std::move(n);
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        auto lhs = factor();
        while (eat('*')) {
            auto n = std::make_unique<Node>();
            n->kind = Node::Mul;
            n->a = std::move(lhs);
            n->b = factor();
            lhs = std::move(n);
        }
        return lhs;
    }

    NodePtr factor() {
        if (eat('-')) {
            auto n = std::make_unique<Node>();
            n->kind = Node::Neg;
            n->a = factor();
            return n;
        }
        auto base = atom();
        if (eat('^')) {
            auto n = std::make_unique<Node>();
            n->kind = Node::Pow;
            n->a = std::move(base);
            n->b = atom();
            return n;
        }
        return base;
    }

    NodePtr atom() {
        skip_ws();
        expect(pos_ < s_.size(), Err::ParseError, "unexpected end of '" + s_ + "'");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ < s_.size() && s_[pos_] == '/') {
                std::size_t save = pos_++;
                if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                } else {
                    pos_ = save; // '/' not part of a rational literal
                }
            }
            auto n = std::make_unique<Node>();
            n->kind = Node::Num;
            n->num = rat_parse(s_.substr(start, pos_ - start));
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            auto n = std::make_unique<Node>();
            n->kind = Node::Ident;
            n->name = s_.substr(start, pos_ - start);
            return n;
        }
        if (c == '(') {
            ++pos_;
            auto e = expr();
            expect(eat(')'), Err::ParseError, "missing ')' in '" + s_ + "'");
            return e;
        }
        fail(Err::ParseError, std::string("unexpected character '") + c + "' in '" + s_ + "'");
    }
};

Poly poly_const(const Rat& c) {
    Poly p;
    if (c != 0) p[{0, 0}] = c;
    return p;
}

Poly poly_add(const Poly& a, const Poly& b, int bsign) {
    Poly r = a;
    for (const auto& [k, v] : b) {
        Rat& slot = r[k];
        slot += bsign * v;
        if (slot == 0) r.erase(k);
    }
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b) {
            auto key = std::make_pair(ka.first + kb.first, ka.second + kb.second);
            Rat& slot = r[key];
            slot += va * vb;
            if (slot == 0) r.erase(key);
        }
    return r;
}

Poly eval_poly_node(const Node* n, const std::vector<std::string>& vars, const ParamEnv& env,
                    const std::string& src) {
    switch (n->kind) {
        case Node::Num:
            return poly_const(n->num);
        case Node::Ident: {
            for (std::size_t i = 0; i < vars.size(); ++i)
                if (vars[i] == n->name) {
                    Poly p;
                    p[{i == 0 ? 1 : 0, i == 1 ? 1 : 0}] = 1;
                    return p;
                }
            auto it = env.find(n->name);
            expect(it != env.end(), Err::ParseError, "unknown identifier '" + n->name + "' in '" + src + "'");
            expect(std::holds_alternative<Rat>(it->second), Err::ParseError,
                   "parameter '" + n->name + "' is a monomial, not usable as a scalar in '" + src + "'");
            return poly_const(std::get<Rat>(it->second));
        }
        case Node::Neg:
            return poly_add(Poly{}, eval_poly_node(n->a.get(), vars, env, src), -1);
        case Node::Add:
            return poly_add(eval_poly_node(n->a.get(), vars, env, src),
                            eval_poly_node(n->b.get(), vars, env, src), 1);
        case Node::Sub:
            return poly_add(eval_poly_node(n->a.get(), vars, env, src),
                            eval_poly_node(n->b.get(), vars, env, src), -1);
        case Node::Mul:
            return poly_mul(eval_poly_node(n->a.get(), vars, env, src),
                            eval_poly_node(n->b.get(), vars, env, src));
        case Node::Pow: {
            Poly base = eval_poly_node(n->a.get(), vars, env, src);
            Poly ep = eval_poly_node(n->b.get(), vars, env, src);
            Rat e = 0;
            if (!ep.empty()) {
                expect(ep.size() == 1 && ep.begin()->first == std::make_pair(0, 0), Err::ParseError,
                       "exponent must be constant in '" + src + "'");
                e = ep.begin()->second;
            }
            expect(rat_is_int(e) && e >= 0, Err::ParseError,
                   "polynomial exponent must be a nonnegative integer in '" + src + "'");
            long k = rat_long(e);
            Poly r = poly_const(1);
            for (long t = 0; t < k; ++t) r = poly_mul(r, base);
            return r;
        }
    }
    fail(Err::ParseError, "bad expression node");
}

// (coefficient, q-exponent) pair for monomial expressions
struct Mono {
    Rat coeff = 1;
    Rat exp = 0;
};

Rat eval_scalar_node(const Node* n, const ParamEnv& env, const std::string& src) {
    Poly p = eval_poly_node(n, {}, env, src);
    if (p.empty()) return 0;
    expect(p.size() == 1 && p.begin()->first == std::make_pair(0, 0), Err::ParseError,
           "expected a constant in '" + src + "'");
    return p.begin()->second;
}

Mono eval_mono_node(const Node* n, const ParamEnv& env, const std::string& src) {
    switch (n->kind) {
        case Node::Num:
            return {n->num, 0};
        case Node::Ident: {
            if (n->name == "q") return {1, 1};
            auto it = env.find(n->name);
            expect(it != env.end(), Err::ParseError, "unknown identifier '" + n->name + "' in '" + src + "'");
            if (std::holds_alternative<SignedMonomial>(it->second)) {
                const auto& m = std::get<SignedMonomial>(it->second);
                return {Rat(m.sign), m.exp};
            }
            return {std::get<Rat>(it->second), 0};
        }
        case Node::Neg: {
            Mono m = eval_mono_node(n->a.get(), env, src);
            m.coeff = -m.coeff;
            return m;
        }
        case Node::Mul: {
            Mono x = eval_mono_node(n->a.get(), env, src);
            Mono y = eval_mono_node(n->b.get(), env, src);
            return {x.coeff * y.coeff, x.exp + y.exp};
        }
        case Node::Pow: {
            Mono base = eval_mono_node(n->a.get(), env, src);
            Rat e = eval_scalar_node(n->b.get(), env, src);
            if (!rat_is_int(e))
                expect(base.coeff == 1, Err::ParseError,
                       "fractional power of a signed monomial in '" + src + "'");
            if (rat_is_int(e)) {
                long k = rat_long(e);
                return {rat_pow(base.coeff, k), base.exp * e};
            }
            return {1, base.exp * e};
        }
        case Node::Add:
        case Node::Sub:
            fail(Err::ParseError, "sum is not a monomial in '" + src + "'");
    }
    fail(Err::ParseError, "bad expression node");
}

} // namespace

Poly parse_poly(const std::string& src, const std::vector<std::string>& vars, const ParamEnv& env) {
    expect(vars.size() <= 2, Err::InvalidParams, "at most two summation variables supported");
    Parser p(src);
    auto ast = p.parse();
    return eval_poly_node(ast.get(), vars, env, src);
}

SignedMonomial parse_monomial(const std::string& src, const ParamEnv& env) {
    Parser p(src);
    auto ast = p.parse();
    Mono m = eval_mono_node(ast.get(), env, src);
    expect(m.coeff == 1 || m.coeff == -1, Err::ParseError,
           "expression '" + src + "' is not a signed q-monomial (coefficient " + rat_str(m.coeff) + ")");
    return SignedMonomial(m.coeff == 1 ? 1 : -1, m.exp);
}

QuadForm quad_of(const Poly& p, const std::string& what) {
    QuadForm f{0, 0, 0, 0, 0, 0};
    for (const auto& [k, v] : p) {
        if (k == std::make_pair(2, 0))
            f.q20 = v;
        else if (k == std::make_pair(1, 1))
            f.q11 = v;
        else if (k == std::make_pair(0, 2))
            f.q02 = v;
        else if (k == std::make_pair(1, 0))
            f.q10 = v;
        else if (k == std::make_pair(0, 1))
            f.q01 = v;
        else if (k == std::make_pair(0, 0))
            f.q00 = v;
        else
            fail(Err::ParseError, what + " must have degree <= 2");
    }
    return f;
}

AffineForm affine_of(const Poly& p, const std::string& what) {
    AffineForm f;
    for (const auto& [k, v] : p) {
        expect(rat_is_int(v), Err::ParseError, what + " needs integer coefficients");
        if (k == std::make_pair(0, 0))
            f.c0 = rat_long(v);
        else if (k == std::make_pair(1, 0))
            f.c1 = rat_long(v);
        else if (k == std::make_pair(0, 1))
            f.c2 = rat_long(v);
        else
            fail(Err::ParseError, what + " must be affine");
    }
    return f;
}

namespace {

std::string trimmed(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

// Split at top-level occurrences of `sep` (parenthesis depth 0).
std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        else if (s[i] == sep && depth == 0) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    out.push_back(s.substr(start));
    return out;
}

} // namespace

ProductSpec parse_product(const std::string& src, const ParamEnv& env) {
    ProductSpec p;
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    };
    auto err = [&](const std::string& m) { fail(Err::ParseError, m + " in '" + src + "'"); };

    bool first = true;
    while (true) {
        skip();
        if (pos >= src.size()) break;
        int dir = 1;
        if (!first) {
            if (src[pos] == '*') {
                ++pos;
            } else if (src[pos] == '/') {
                dir = -1;
                ++pos;
            } else if (src[pos] != '(') {
                err("expected '*', '/' or a '(' group");
            }
            skip();
        }
        first = false;
        expect(pos < src.size(), Err::ParseError, "dangling operator in '" + src + "'");

        if (src[pos] == '(') {
            // find the matching ')'
            int depth = 0;
            std::size_t open = pos, close = pos;
            for (; close < src.size(); ++close) {
                if (src[close] == '(') ++depth;
                else if (src[close] == ')' && --depth == 0) break;
            }
            if (close >= src.size()) err("unbalanced '('");
            std::string inner = src.substr(open + 1, close - open - 1);
            pos = close + 1;
            long power = 1;
            skip();
            if (pos < src.size() && src[pos] == '^') {
                ++pos;
                skip();
                bool paren = pos < src.size() && src[pos] == '(';
                if (paren) ++pos, skip();
                std::size_t start = pos;
                if (pos < src.size() && src[pos] == '-') ++pos;
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
                if (start == pos) err("expected integer power after '^'");
                power = std::stol(src.substr(start, pos - start));
                if (paren && !(pos < src.size() && src[pos] == ')') ) err("missing ')' after power");
                if (paren) ++pos;
            }
            power *= dir;

            auto semi = split_top(inner, ';');
            if (semi.size() == 2) { // (arg, ..., arg; base)
                SignedMonomial base = parse_monomial(trimmed(semi[1]), env);
                for (const auto& a : split_top(semi[0], ','))
                    p.factors.push_back({parse_monomial(trimmed(a), env), base, power});
            } else if (semi.size() == 1) { // (1 +/- mono)
                std::string b = trimmed(inner);
                if (b.empty() || b[0] != '1') err("group must be '(args;base)' or '(1+-mono)'");
                std::size_t i = 1;
                while (i < b.size() && std::isspace(static_cast<unsigned char>(b[i]))) ++i;
                if (i >= b.size() || (b[i] != '+' && b[i] != '-')) err("expected '+' or '-' after '1'");
                SignedMonomial m = parse_monomial(trimmed(b.substr(i + 1)), env);
                p.bins.push_back({b[i] == '-' ? m : m.negated(), power});
            } else {
                err("too many ';' in group");
            }
            continue;
        }

        // bare token: rational constant or +/- q-power monomial; stops at a
        // top-level '*', '/' or at a '(' that does not follow '^'
        std::size_t start = pos;
        int depth = 0;
        char last = '\0';
        for (; pos < src.size(); ++pos) {
            char c = src[pos];
            if (c == '(') {
                if (depth == 0 && last != '^') break;
                ++depth;
            } else if (c == ')') {
                --depth;
            } else if (depth == 0 && (c == '*' || c == '/') && last != '^') {
                break;
            }
            if (!std::isspace(static_cast<unsigned char>(c))) last = c;
        }
        std::string tok = trimmed(src.substr(start, pos - start));
        if (tok.empty()) err("empty item");
        bool has_alpha = std::any_of(tok.begin(), tok.end(), [](unsigned char c) {
            return std::isalpha(c) || c == '_';
        });
        if (has_alpha) {
            SignedMonomial m = parse_monomial(tok, env);
            p.constant *= m.sign;
            p.monomial_exp += dir > 0 ? m.exp : -m.exp;
        } else {
            Rat r = rat_parse(tok);
            expect(r != 0, Err::ParseError, "zero constant in '" + src + "'");
            if (dir > 0)
                p.constant *= r;
            else
                p.constant /= r;
        }
    }
    return p;
}

} // namespace qrr
