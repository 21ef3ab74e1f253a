#include "pluri/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pluri {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

struct ExprNode {
    enum class Op {
        constant,
        var_re,
        var_im,
        var_abs,
        var_abs2,
        neg,
        add,
        sub,
        mul,
        div,
        pow_int,
        fn_log,
        fn_exp,
        fn_max,
        fn_min,
    };

    Op op;
    double value = 0.0;  // constant
    int var_index = 0;   // 1-based, var_* ops
    int ipow = 1;        // pow_int exponent
    std::vector<std::shared_ptr<const ExprNode>> args;
};

const ExprNode& ExprFn::root() const {
    if (!root_) throw eval_error("empty expression");
    return *root_;
}

namespace {

using Op = ExprNode::Op;
using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

int max_var(const ExprNode& n) {
    int m = n.var_index;
    for (const auto& a : n.args) m = std::max(m, max_var(*a));
    return m;
}

// ---- parser ----------------------------------------------------------------

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(msg, static_cast<int>(pos) + 1);
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        return s.substr(start, pos - start);
    }

    NodePtr parse() {
        NodePtr e = expr();
        skip_ws();
        if (pos != s.size()) fail("unexpected trailing input");
        return e;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (eat('+'))
                lhs = binary(Op::add, lhs, term());
            else if (eat('-'))
                lhs = binary(Op::sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (eat('*'))
                lhs = binary(Op::mul, lhs, factor());
            else if (eat('/'))
                lhs = binary(Op::div, lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor() {
        NodePtr b = base();
        if (eat('^')) {
            skip_ws();
            bool negexp = eat('-');
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("expected integer exponent after '^'");
            int k = std::stoi(s.substr(start, pos - start));
            ExprNode n;
            n.op = Op::pow_int;
            n.ipow = negexp ? -k : k;
            n.args = {b};
            return make_node(std::move(n));
        }
        return b;
    }

    NodePtr base() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of expression");
        const char c = s[pos];
        if (c == '(') {
            ++pos;
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (c == '-') {
            ++pos;
            ExprNode n;
            n.op = Op::neg;
            n.args = {base()};
            return make_node(std::move(n));
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string id = ident();
            if (id == "inf") return constant(std::numeric_limits<double>::infinity());
            if (id == "log" || id == "exp" || id == "max" || id == "min") return call(id);
            if (id == "re" || id == "im" || id == "abs" || id == "abs2") return variable(id);
            fail("unknown identifier '" + id + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        std::size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                                  s[pos] == '.' || s[pos] == 'e' || s[pos] == 'E' ||
                                  ((s[pos] == '+' || s[pos] == '-') &&
                                   (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
            ++pos;
        try {
            return constant(std::stod(s.substr(start, pos - start)));
        } catch (const std::exception&) {
            pos = start;
            fail("malformed number");
        }
    }

    NodePtr variable(const std::string& id) {
        if (!eat('(')) fail("expected '(' after '" + id + "'");
        skip_ws();
        if (peek() != 'z') fail("expected variable z1 or z2 inside '" + id + "'");
        ++pos;
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            fail("expected coordinate index after 'z'");
        int idx = s[pos] - '0';
        ++pos;
        if (!eat(')')) fail("expected ')'");
        if (idx < 1 || idx > 2) fail("coordinate index out of range (z1 or z2)");
        ExprNode n;
        n.op = id == "re" ? Op::var_re : id == "im" ? Op::var_im : id == "abs" ? Op::var_abs
                                                                               : Op::var_abs2;
        n.var_index = idx;
        return make_node(std::move(n));
    }

    NodePtr call(const std::string& id) {
        if (!eat('(')) fail("expected '(' after '" + id + "'");
        std::vector<NodePtr> args;
        args.push_back(expr());
        while (eat(',')) args.push_back(expr());
        if (!eat(')')) fail("expected ')'");
        const bool unary = id == "log" || id == "exp";
        if (unary && args.size() != 1) fail("'" + id + "' takes one argument");
        if (!unary && args.size() != 2) fail("'" + id + "' takes two arguments");
        ExprNode n;
        n.op = id == "log" ? Op::fn_log : id == "exp" ? Op::fn_exp : id == "max" ? Op::fn_max
                                                                                 : Op::fn_min;
        n.args = std::move(args);
        return make_node(std::move(n));
    }

    NodePtr constant(double v) {
        ExprNode n;
        n.op = Op::constant;
        n.value = v;
        return make_node(std::move(n));
    }

    NodePtr binary(Op op, NodePtr a, NodePtr b) {
        ExprNode n;
        n.op = op;
        n.args = {std::move(a), std::move(b)};
        return make_node(std::move(n));
    }
};

// ---- evaluation ------------------------------------------------------------

// Finite or -inf; +inf and NaN mark indeterminate forms.
double checked(double v, const char* what) {
    if (std::isnan(v)) throw eval_error(std::string("indeterminate value in ") + what);
    if (std::isinf(v) && v > 0.0) throw eval_error(std::string("+inf value in ") + what);
    return v;
}

double eval_node(const ExprNode& n, const Point& p) {
    switch (n.op) {
        case Op::constant:
            return n.value;  // bare 'inf' literal is caught by the consumer op / checked()
        case Op::var_re:
        case Op::var_im:
        case Op::var_abs:
        case Op::var_abs2: {
            if (n.var_index > p.n)
                throw eval_error("variable z" + std::to_string(n.var_index) +
                                 " exceeds point dimension");
            const complexd z = p.z[n.var_index - 1];
            if (n.op == Op::var_re) return z.real();
            if (n.op == Op::var_im) return z.imag();
            if (n.op == Op::var_abs) return std::abs(z);
            return std::norm(z);
        }
        case Op::neg:
            return checked(-eval_node(*n.args[0], p), "negation");
        case Op::add:
            return checked(eval_node(*n.args[0], p) + eval_node(*n.args[1], p), "addition");
        case Op::sub:
            return checked(eval_node(*n.args[0], p) - eval_node(*n.args[1], p), "subtraction");
        case Op::mul:
            return checked(eval_node(*n.args[0], p) * eval_node(*n.args[1], p), "multiplication");
        case Op::div: {
            const double b = eval_node(*n.args[1], p);
            if (b == 0.0) throw eval_error("division by zero");
            return checked(eval_node(*n.args[0], p) / b, "division");
        }
        case Op::pow_int: {
            const double b = eval_node(*n.args[0], p);
            if (n.ipow < 0 && b == 0.0) throw eval_error("division by zero in power");
            return checked(std::pow(b, n.ipow), "integer power");
        }
        case Op::fn_log: {
            const double a = eval_node(*n.args[0], p);
            if (a == 0.0) return kNegInf;
            if (a < 0.0) throw eval_error("log of negative value");
            return checked(std::log(a), "log");
        }
        case Op::fn_exp:
            return checked(std::exp(eval_node(*n.args[0], p)), "exp");
        case Op::fn_max:
            return std::max(eval_node(*n.args[0], p), eval_node(*n.args[1], p));
        case Op::fn_min:
            return std::min(eval_node(*n.args[0], p), eval_node(*n.args[1], p));
    }
    throw eval_error("unreachable expression op");
}

void print_node(const ExprNode& n, std::string& out) {
    auto bin = [&](const char* op) {
        out += '(';
        print_node(*n.args[0], out);
        out += op;
        print_node(*n.args[1], out);
        out += ')';
    };
    char buf[40];
    switch (n.op) {
        case Op::constant:
            if (std::isinf(n.value)) {
                out += n.value > 0 ? "inf" : "(-inf)";
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", n.value);
                out += buf;
            }
            return;
        case Op::var_re:
        case Op::var_im:
        case Op::var_abs:
        case Op::var_abs2: {
            const char* name = n.op == Op::var_re ? "re" : n.op == Op::var_im ? "im"
                                                       : n.op == Op::var_abs ? "abs"
                                                                             : "abs2";
            out += name;
            out += "(z";
            out += static_cast<char>('0' + n.var_index);
            out += ')';
            return;
        }
        case Op::neg:
            out += "(-";
            print_node(*n.args[0], out);
            out += ')';
            return;
        case Op::add:
            bin("+");
            return;
        case Op::sub:
            bin("-");
            return;
        case Op::mul:
            bin("*");
            return;
        case Op::div:
            bin("/");
            return;
        case Op::pow_int:
            out += '(';
            print_node(*n.args[0], out);
            out += '^';
            if (n.ipow < 0) out += '-';
            out += std::to_string(std::abs(n.ipow));
            out += ')';
            return;
        case Op::fn_log:
        case Op::fn_exp: {
            out += n.op == Op::fn_log ? "log(" : "exp(";
            print_node(*n.args[0], out);
            out += ')';
            return;
        }
        case Op::fn_max:
        case Op::fn_min: {
            out += n.op == Op::fn_max ? "max(" : "min(";
            print_node(*n.args[0], out);
            out += ',';
            print_node(*n.args[1], out);
            out += ')';
            return;
        }
    }
}

}  // namespace

int ExprFn::max_var_index() const { return root_ ? max_var(*root_) : 0; }

ExprFn parse_expr(const std::string& text) {
    if (text.empty()) throw parse_error("empty expression", 1);
    if (text.size() > 64 * 1024) throw parse_error("expression exceeds 64 KiB", 1);
    Parser p(text);
    return ExprFn(p.parse());
}

double eval_expr(const ExprFn& e, const Point& p) {
    const double v = eval_node(e.root(), p);
    return checked(v, "expression result");
}

std::string print_expr(const ExprFn& e) {
    std::string out;
    print_node(e.root(), out);
    return out;
}

}  // namespace pluri
