#include "rankc/syslang.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

namespace rankc {

namespace {

constexpr std::size_t kMaxTerms = 100000;

void guard_size(const Polynomial& p) {
    if (p.terms.size() > kMaxTerms) throw InputError("polynomial too large to expand");
}

}  // namespace

Polynomial Polynomial::constant(const mpz_class& k) {
    Polynomial p;
    if (sgn(k) != 0) p.terms.emplace(Monomial{}, k);
    return p;
}

Polynomial Polynomial::variable(const std::string& name) {
    Polynomial p;
    Monomial m;
    m.exps[name] = 1;
    p.terms.emplace(std::move(m), mpz_class(1));
    return p;
}

Polynomial Polynomial::add(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [m, c] : o.terms) {
        auto it = r.terms.find(m);
        if (it == r.terms.end()) {
            r.terms.emplace(m, c);
        } else {
            it->second += c;
            if (sgn(it->second) == 0) r.terms.erase(it);
        }
    }
    guard_size(r);
    return r;
}

Polynomial Polynomial::sub(const Polynomial& o) const {
    Polynomial negated;
    for (const auto& [m, c] : o.terms) negated.terms.emplace(m, mpz_class(-c));
    return add(negated);
}

Polynomial Polynomial::mul(const Polynomial& o) const {
    Polynomial r;
    for (const auto& [m1, c1] : terms) {
        for (const auto& [m2, c2] : o.terms) {
            Monomial m = m1;
            for (const auto& [v, e] : m2.exps) m.exps[v] += e;
            mpz_class c(c1 * c2);
            auto it = r.terms.find(m);
            if (it == r.terms.end()) {
                r.terms.emplace(std::move(m), std::move(c));
            } else {
                it->second += c;
                if (sgn(it->second) == 0) r.terms.erase(it);
            }
        }
        guard_size(r);
    }
    return r;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial r = Polynomial::constant(1);
    for (unsigned i = 0; i < e; ++i) r = r.mul(*this);
    return r;
}

// ---------------------------------------------------------------------------
// surface syntax

namespace {

struct Token {
    enum Type { KwEq, Ident, Int, Plus, Minus, Star, Caret, LParen, RParen, Assign, Semi, End };
    Type type;
    std::string text;
    mpz_class value;
    std::size_t line, col;
};

[[noreturn]] void syntax_error(const Token& t, const std::string& what) {
    throw InputError(std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + what);
}

struct Lexer {
    std::vector<Token> tokens;
    std::vector<std::string> first_mention;

    explicit Lexer(const std::string& text) {
        std::set<std::string> seen;
        std::size_t line = 1, col = 1;
        std::size_t i = 0;
        auto push = [&](Token::Type t, std::string s) {
            tokens.push_back({t, std::move(s), 0, line, col});
        };
        while (i < text.size()) {
            char ch = text[i];
            if (ch == '\n') {
                ++line;
                col = 1;
                ++i;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(ch))) {
                ++col;
                ++i;
                continue;
            }
            if (ch == '#') {
                while (i < text.size() && text[i] != '\n') ++i;
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
                std::size_t j = i;
                while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                           text[j] == '_'))
                    ++j;
                std::string word = text.substr(i, j - i);
                if (word == "eq") {
                    push(Token::KwEq, word);
                } else {
                    push(Token::Ident, word);
                    if (seen.insert(word).second) first_mention.push_back(word);
                }
                col += j - i;
                i = j;
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                std::size_t j = i;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                Token t{Token::Int, text.substr(i, j - i), 0, line, col};
                t.value = mpz_class(t.text, 10);
                tokens.push_back(std::move(t));
                col += j - i;
                i = j;
                continue;
            }
            Token::Type tt;
            switch (ch) {
                case '+': tt = Token::Plus; break;
                case '-': tt = Token::Minus; break;
                case '*': tt = Token::Star; break;
                case '^': tt = Token::Caret; break;
                case '(': tt = Token::LParen; break;
                case ')': tt = Token::RParen; break;
                case '=': tt = Token::Assign; break;
                case ';': tt = Token::Semi; break;
                default:
                    throw InputError(std::to_string(line) + ":" + std::to_string(col) +
                                     ": unexpected character '" + std::string(1, ch) + "'");
            }
            push(tt, std::string(1, ch));
            ++col;
            ++i;
        }
        tokens.push_back({Token::End, "", 0, line, col});
    }
};

struct Parser {
    const std::vector<Token>& toks;
    std::size_t pos = 0;

    const Token& peek() const { return toks[pos]; }
    const Token& next() { return toks[pos++]; }
    bool accept(Token::Type t) {
        if (peek().type == t) {
            ++pos;
            return true;
        }
        return false;
    }
    const Token& expect(Token::Type t, const std::string& what) {
        if (peek().type != t) syntax_error(peek(), "expected " + what);
        return next();
    }

    Polynomial poly() {
        bool neg = accept(Token::Minus);
        Polynomial p = term();
        if (neg) p = Polynomial::constant(-1).mul(p);
        for (;;) {
            if (accept(Token::Plus)) {
                p = p.add(term());
            } else if (accept(Token::Minus)) {
                p = p.sub(term());
            } else {
                return p;
            }
        }
    }

    Polynomial term() {
        Polynomial p = factor();
        while (accept(Token::Star)) p = p.mul(factor());
        return p;
    }

    Polynomial factor() {
        Polynomial p = primary();
        if (accept(Token::Caret)) {
            const Token& e = toks[pos - 1];
            const Token& n = expect(Token::Int, "exponent");
            if (n.value > 65535) syntax_error(e, "exponent too large");
            p = p.pow(static_cast<unsigned>(n.value.get_ui()));
        }
        return p;
    }

    Polynomial primary() {
        const Token& t = peek();
        switch (t.type) {
            case Token::Ident:
                next();
                return Polynomial::variable(t.text);
            case Token::Int:
                next();
                return Polynomial::constant(t.value);
            case Token::LParen: {
                next();
                Polynomial p = poly();
                expect(Token::RParen, "')'");
                return p;
            }
            default:
                syntax_error(t, "expected variable, integer, or '('");
        }
    }
};

}  // namespace

PolyFormula parse_source(const std::string& text) {
    Lexer lex(text);
    Parser parser{lex.tokens};
    PolyFormula f;
    f.variables = lex.first_mention;
    while (!parser.accept(Token::End)) {
        parser.expect(Token::KwEq, "'eq'");
        PolyEquation e;
        e.lhs = parser.poly();
        parser.expect(Token::Assign, "'='");
        e.rhs = parser.poly();
        parser.expect(Token::Semi, "';'");
        f.equations.push_back(std::move(e));
    }
    return f;
}

// ---------------------------------------------------------------------------
// quadratic systems

QuadEquation QuadEquation::add(std::string c, std::string a, std::string b) {
    QuadEquation e;
    e.kind = EqKind::Add;
    e.c = std::move(c);
    e.a = std::move(a);
    e.b = std::move(b);
    return e;
}

QuadEquation QuadEquation::mul(std::string c, std::string a, std::string b) {
    QuadEquation e = add(std::move(c), std::move(a), std::move(b));
    e.kind = EqKind::Mul;
    return e;
}

QuadEquation QuadEquation::copy(std::string c, std::string a) {
    QuadEquation e;
    e.kind = EqKind::Copy;
    e.c = std::move(c);
    e.a = std::move(a);
    return e;
}

QuadEquation QuadEquation::constant(std::string c, mpz_class k) {
    QuadEquation e;
    e.kind = EqKind::Const;
    e.c = std::move(c);
    e.k = std::move(k);
    return e;
}

std::vector<std::string> equation_vars(const QuadEquation& e) {
    switch (e.kind) {
        case EqKind::Add:
        case EqKind::Mul:
            return {e.c, e.a, e.b};
        case EqKind::Copy:
            return {e.c, e.a};
        case EqKind::Const:
            return {e.c};
    }
    throw InternalError("unknown equation kind");
}

void validate_system(const QuadraticSystem& s) {
    std::set<std::string> declared;
    for (const auto& v : s.variables) {
        if (v.empty()) throw InputError("empty variable name");
        if (!declared.insert(v).second) throw InputError("duplicate variable '" + v + "'");
    }
    for (std::size_t i = 0; i < s.equations.size(); ++i)
        for (const auto& v : equation_vars(s.equations[i]))
            if (!declared.count(v))
                throw InputError("equation #" + std::to_string(i + 1) +
                                 " references undeclared variable '" + v + "'");
}

// ---------------------------------------------------------------------------
// quadratize

namespace {

// An atom is a bare variable or an integer constant.
struct Atom {
    bool is_var = false;
    std::string var;
    mpz_class k = 0;
};

std::optional<Atom> trivial_atom(const Polynomial& p) {
    if (p.terms.empty()) return Atom{false, "", 0};
    if (p.terms.size() != 1) return std::nullopt;
    const auto& [m, c] = *p.terms.begin();
    if (m.exps.empty()) return Atom{false, "", c};
    if (m.exps.size() == 1 && m.exps.begin()->second == 1 && c == 1)
        return Atom{true, m.exps.begin()->first, 0};
    return std::nullopt;
}

struct Quadratizer {
    QuadraticSystem sys;
    std::set<std::string> used;
    unsigned temps = 0;

    std::string fresh() {
        std::string t;
        do {
            t = "#t" + std::to_string(++temps);
        } while (used.count(t));
        used.insert(t);
        sys.variables.push_back(t);
        return t;
    }

    void emit(QuadEquation e) { sys.equations.push_back(std::move(e)); }

    // One product/sum step lands in `target` when provided, else in a temp.
    std::string step_target(const std::optional<std::string>& target, bool is_last) {
        return (is_last && target) ? *target : fresh();
    }

    std::string compile_term(const mpz_class& coeff, const Monomial& mono,
                             const std::optional<std::string>& target) {
        std::vector<std::string> factors;
        for (const auto& [v, e] : mono.exps)
            for (unsigned i = 0; i < e; ++i) factors.push_back(v);
        if (factors.empty()) {
            std::string t = target ? *target : fresh();
            emit(QuadEquation::constant(t, coeff));
            return t;
        }
        if (coeff == 1 && factors.size() == 1) return factors[0];
        std::string acc = factors[0];
        for (std::size_t i = 1; i < factors.size(); ++i) {
            bool last = (i + 1 == factors.size()) && coeff == 1;
            std::string t = step_target(target, last);
            emit(QuadEquation::mul(t, acc, factors[i]));
            acc = t;
        }
        if (coeff != 1) {
            std::string kvar = fresh();
            emit(QuadEquation::constant(kvar, coeff));
            std::string t = step_target(target, true);
            emit(QuadEquation::mul(t, kvar, acc));
            acc = t;
        }
        return acc;
    }

    std::string compile_side(const Polynomial& p, const std::optional<std::string>& target) {
        if (p.terms.empty()) {
            std::string t = target ? *target : fresh();
            emit(QuadEquation::constant(t, 0));
            return t;
        }
        if (p.terms.size() == 1) {
            const auto& [m, c] = *p.terms.begin();
            return compile_term(c, m, target);
        }
        std::vector<std::string> atoms;
        for (const auto& [m, c] : p.terms) atoms.push_back(compile_term(c, m, std::nullopt));
        std::string acc = atoms[0];
        for (std::size_t i = 1; i < atoms.size(); ++i) {
            std::string t = step_target(target, i + 1 == atoms.size());
            emit(QuadEquation::add(t, acc, atoms[i]));
            acc = t;
        }
        return acc;
    }

    void compile_equation(const PolyEquation& e) {
        auto al = trivial_atom(e.lhs);
        auto ar = trivial_atom(e.rhs);
        if (al && ar) {
            if (al->is_var && ar->is_var) {
                emit(QuadEquation::copy(al->var, ar->var));
            } else if (al->is_var) {
                emit(QuadEquation::constant(al->var, ar->k));
            } else if (ar->is_var) {
                emit(QuadEquation::constant(ar->var, al->k));
            } else {
                std::string t = fresh();
                emit(QuadEquation::constant(t, al->k));
                emit(QuadEquation::constant(t, ar->k));
            }
            return;
        }
        if (ar && ar->is_var) {
            compile_side(e.lhs, ar->var);
            return;
        }
        if (ar) {
            std::string a = compile_side(e.lhs, std::nullopt);
            emit(QuadEquation::constant(a, ar->k));
            return;
        }
        if (al && al->is_var) {
            compile_side(e.rhs, al->var);
            return;
        }
        if (al) {
            std::string a = compile_side(e.rhs, std::nullopt);
            emit(QuadEquation::constant(a, al->k));
            return;
        }
        std::string t = compile_side(e.lhs, std::nullopt);
        compile_side(e.rhs, t);
    }
};

}  // namespace

QuadraticSystem quadratize(const PolyFormula& f) {
    for (const auto& v : f.variables)
        if (v.find('#') != std::string::npos || v.find('@') != std::string::npos)
            throw InputError("variable '" + v + "' uses a reserved character");
    Quadratizer qz;
    qz.sys.variables = f.variables;
    qz.used.insert(f.variables.begin(), f.variables.end());
    for (const auto& e : f.equations) qz.compile_equation(e);
    validate_system(qz.sys);
    return qz.sys;
}

// ---------------------------------------------------------------------------
// normalization and assumption checks

namespace {

// Fresh copy names: base#1, base#2, ... where base is the name with any
// trailing copy suffixes stripped, skipping names already in use.
struct FreshNames {
    std::set<std::string> used;
    std::map<std::string, unsigned> next;

    static std::string root(std::string name) {
        for (;;) {
            auto pos = name.rfind('#');
            if (pos == std::string::npos || pos == 0 || pos + 1 == name.size()) return name;
            bool digits = std::all_of(name.begin() + pos + 1, name.end(), [](char c) {
                return std::isdigit(static_cast<unsigned char>(c));
            });
            if (!digits) return name;
            name.erase(pos);
        }
    }

    std::string fresh_copy(const std::string& base) {
        std::string r = root(base);
        unsigned& k = next[r];
        std::string cand;
        do {
            cand = r + "#" + std::to_string(++k);
        } while (used.count(cand));
        used.insert(cand);
        return cand;
    }
};

// Slot classes mirror the 3x3 block templates: a variable sits in the block's
// third row iff it is the target of Add/Copy/Const or the right factor of a
// Mul, and in the third column iff it sits in any slot except a Mul's right
// factor.
bool third_row_has(const QuadEquation& e, const std::string& v) {
    return e.kind == EqKind::Mul ? e.b == v : e.c == v;
}

bool third_col_has(const QuadEquation& e, const std::string& v) {
    switch (e.kind) {
        case EqKind::Add: return e.c == v || e.a == v || e.b == v;
        case EqKind::Mul: return e.c == v || e.a == v;
        case EqKind::Copy: return e.c == v || e.a == v;
        case EqKind::Const: return e.c == v;
    }
    throw InternalError("unknown equation kind");
}

bool cross_coupled(const QuadEquation& mul, const QuadEquation& partner) {
    return mul.kind == EqKind::Mul && third_col_has(partner, mul.a) &&
           third_row_has(partner, mul.b);
}

bool squaring_exempt(const QuadEquation& mul, const QuadEquation& partner) {
    return partner.kind == EqKind::Copy && partner.c == mul.b && partner.a == mul.a;
}

}  // namespace

QuadraticSystem normalize(const QuadraticSystem& in) {
    validate_system(in);
    QuadraticSystem s = in;
    FreshNames fresh{{s.variables.begin(), s.variables.end()}, {}};

    auto introduce = [&](const std::string& base, std::string& slot,
                         std::vector<QuadEquation>& copies) {
        std::string v2 = fresh.fresh_copy(base);
        copies.push_back(QuadEquation::copy(v2, base));
        s.variables.push_back(v2);
        slot = v2;
    };

    // A1: keep each equation's first occurrence, copy out later repeats.
    for (std::size_t i = 0; i < s.equations.size();) {
        std::vector<QuadEquation> copies;
        {
            QuadEquation& e = s.equations[i];
            std::set<std::string> seen;
            auto fix = [&](std::string& slot) {
                if (!seen.insert(slot).second) introduce(slot, slot, copies);
                seen.insert(slot);
            };
            fix(e.c);
            if (e.kind != EqKind::Const) fix(e.a);
            if (e.kind == EqKind::Add || e.kind == EqKind::Mul) fix(e.b);
        }
        s.equations.insert(s.equations.begin() + static_cast<std::ptrdiff_t>(i), copies.begin(),
                           copies.end());
        i += copies.size() + 1;
    }

    // A2: replace the right factor of a cross-coupled Mul by a fresh copy.
    // The copy is fresh, so one fix per Mul suffices and the loop terminates.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < s.equations.size() && !changed; ++i) {
            if (s.equations[i].kind != EqKind::Mul) continue;
            for (std::size_t l = 0; l < s.equations.size() && !changed; ++l) {
                if (l == i) continue;
                if (cross_coupled(s.equations[i], s.equations[l]) &&
                    !squaring_exempt(s.equations[i], s.equations[l])) {
                    std::vector<QuadEquation> copies;
                    introduce(s.equations[i].b, s.equations[i].b, copies);
                    s.equations.insert(s.equations.begin() + static_cast<std::ptrdiff_t>(i),
                                       copies.begin(), copies.end());
                    changed = true;
                }
            }
        }
    }

    // A3: the right factor of each Mul must occur exactly twice, the other
    // occurrence as a Copy target.
    for (std::size_t i = 0; i < s.equations.size(); ++i) {
        if (s.equations[i].kind != EqKind::Mul) continue;
        const std::string v = s.equations[i].b;
        std::size_t count = 0;
        bool other_is_copy_target = false;
        for (std::size_t l = 0; l < s.equations.size(); ++l) {
            const QuadEquation& e = s.equations[l];
            for (const auto& u : equation_vars(e))
                if (u == v) ++count;
            if (l != i && e.kind == EqKind::Copy && e.c == v) other_is_copy_target = true;
        }
        if (count == 2 && other_is_copy_target) continue;
        std::vector<QuadEquation> copies;
        introduce(v, s.equations[i].b, copies);
        s.equations.insert(s.equations.begin() + static_cast<std::ptrdiff_t>(i), copies.begin(),
                           copies.end());
        ++i;  // skip the inserted copy; the Mul moved one slot right
    }

    validate_system(s);
    return s;
}

AssumptionReport check_assumptions(const QuadraticSystem& s) {
    validate_system(s);
    AssumptionReport rep;
    auto flag = [&](AssumptionViolation v) {
        rep.ok = false;
        rep.violations.push_back(std::move(v));
    };

    for (std::size_t i = 0; i < s.equations.size(); ++i) {
        std::map<std::string, int> counts;
        for (const auto& v : equation_vars(s.equations[i])) ++counts[v];
        for (const auto& [v, c] : counts)
            if (c > 1)
                flag({1, i, std::nullopt,
                      "variable '" + v + "' occurs " + std::to_string(c) +
                          " times in equation #" + std::to_string(i + 1)});
    }

    std::set<std::pair<std::size_t, std::size_t>> flagged_pairs;
    for (std::size_t i = 0; i < s.equations.size(); ++i) {
        if (s.equations[i].kind != EqKind::Mul) continue;
        for (std::size_t l = 0; l < s.equations.size(); ++l) {
            if (l == i) continue;
            if (!cross_coupled(s.equations[i], s.equations[l]) ||
                squaring_exempt(s.equations[i], s.equations[l]))
                continue;
            auto key = std::minmax(i, l);
            if (!flagged_pairs.insert(key).second) continue;
            flag({2, i, l,
                  "equations #" + std::to_string(i + 1) + " and #" + std::to_string(l + 1) +
                      " are cross-coupled: '" + s.equations[i].a + "' fills a third-column slot"
                      " and '" + s.equations[i].b + "' a third-row slot of the partner"});
        }
    }

    for (std::size_t i = 0; i < s.equations.size(); ++i) {
        if (s.equations[i].kind != EqKind::Mul) continue;
        const std::string& v = s.equations[i].b;
        std::size_t count = 0;
        bool other_is_copy_target = false;
        for (std::size_t l = 0; l < s.equations.size(); ++l) {
            for (const auto& u : equation_vars(s.equations[l]))
                if (u == v) ++count;
            if (l != i && s.equations[l].kind == EqKind::Copy && s.equations[l].c == v)
                other_is_copy_target = true;
        }
        if (count != 2)
            flag({3, i, std::nullopt,
                  "right factor '" + v + "' of equation #" + std::to_string(i + 1) + " occurs " +
                      std::to_string(count) + " times (expected 2)"});
        else if (!other_is_copy_target)
            flag({3, i, std::nullopt,
                  "the second occurrence of right factor '" + v + "' of equation #" +
                      std::to_string(i + 1) + " is not the target of a copy"});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// evaluation and exhaustive search

bool eval_system(const QuadraticSystem& s, const std::vector<FieldElem>& sigma, const Field& F) {
    validate_system(s);
    if (sigma.size() != s.variables.size())
        throw InputError("assignment length does not match variable count");
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < s.variables.size(); ++i) idx[s.variables[i]] = i;
    for (const auto& e : s.equations) {
        const FieldElem& c = sigma[idx[e.c]];
        switch (e.kind) {
            case EqKind::Add:
                if (!F.eq(c, F.add(sigma[idx[e.a]], sigma[idx[e.b]]))) return false;
                break;
            case EqKind::Mul:
                if (!F.eq(c, F.mul(sigma[idx[e.a]], sigma[idx[e.b]]))) return false;
                break;
            case EqKind::Copy:
                if (!F.eq(c, sigma[idx[e.a]])) return false;
                break;
            case EqKind::Const:
                if (!F.eq(c, F.from_mpz(e.k))) return false;
                break;
        }
    }
    return true;
}

bool eval_formula(const PolyFormula& f, const std::vector<FieldElem>& sigma, const Field& F) {
    if (sigma.size() != f.variables.size())
        throw InputError("assignment length does not match variable count");
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < f.variables.size(); ++i) idx[f.variables[i]] = i;
    auto eval_poly = [&](const Polynomial& p) {
        FieldElem acc = F.zero();
        for (const auto& [m, c] : p.terms) {
            FieldElem t = F.from_mpz(c);
            for (const auto& [v, e] : m.exps) {
                auto it = idx.find(v);
                if (it == idx.end()) throw InputError("unknown variable '" + v + "'");
                for (unsigned i = 0; i < e; ++i) t = F.mul(t, sigma[it->second]);
            }
            acc = F.add(acc, t);
        }
        return acc;
    };
    for (const auto& e : f.equations)
        if (!F.eq(eval_poly(e.lhs), eval_poly(e.rhs))) return false;
    return true;
}

SolveResult solve_bruteforce(const QuadraticSystem& s, const Field& F, std::uint64_t budget) {
    validate_system(s);
    if (F.kind() != FieldKind::GFp)
        throw UsageError("exhaustive search requires a finite field, got " + F.spec().name());
    const std::uint64_t p = F.p();
    const std::size_t n = s.variables.size();

    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > budget / p)
            throw BudgetError("search space " + std::to_string(p) + "^" + std::to_string(n) +
                              " exceeds budget " + std::to_string(budget));
        total *= p;
    }
    if (total > budget)
        throw BudgetError("search space exceeds budget " + std::to_string(budget));

    // Residue-level compiled form of the equations.
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) idx[s.variables[i]] = i;
    struct CEq {
        EqKind kind;
        std::size_t c, a, b;
        std::uint64_t k;
    };
    std::vector<CEq> eqs;
    for (const auto& e : s.equations) {
        CEq ce{e.kind, idx[e.c], 0, 0, 0};
        if (e.kind != EqKind::Const) ce.a = idx[e.a];
        if (e.kind == EqKind::Add || e.kind == EqKind::Mul) ce.b = idx[e.b];
        if (e.kind == EqKind::Const) ce.k = std::get<0>(F.from_mpz(e.k));
        eqs.push_back(ce);
    }

    SolveResult res;
    std::vector<std::uint64_t> vals(n, 0);
    for (;;) {
        ++res.tried;
        bool ok = true;
        for (const auto& e : eqs) {
            std::uint64_t want;
            switch (e.kind) {
                case EqKind::Add: want = F.mod_add(vals[e.a], vals[e.b]); break;
                case EqKind::Mul: want = F.mod_mul(vals[e.a], vals[e.b]); break;
                case EqKind::Copy: want = vals[e.a]; break;
                case EqKind::Const: want = e.k; break;
                default: throw InternalError("unknown equation kind");
            }
            if (vals[e.c] != want) {
                ok = false;
                break;
            }
        }
        if (ok) {
            res.found = true;
            res.witness.reserve(n);
            for (std::uint64_t v : vals) res.witness.push_back(FieldElem(std::in_place_index<0>, v));
            return res;
        }
        // lexicographic odometer, last variable least significant
        std::size_t j = n;
        while (j > 0) {
            if (++vals[j - 1] < p) break;
            vals[j - 1] = 0;
            --j;
        }
        if (j == 0) return res;
    }
}

}  // namespace rankc
