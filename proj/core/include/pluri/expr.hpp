#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pluri/geometry.hpp"

namespace pluri {

// Values are extended reals: finite or -inf.  Any +inf, NaN or indeterminate
// extended-arithmetic result raises eval_error.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, int column)
        : std::runtime_error(msg + " (column " + std::to_string(column) + ")"), column_(column) {}
    int column() const { return column_; }

private:
    int column_;
};

class eval_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExprNode;

class ExprFn {
public:
    ExprFn() = default;
    explicit ExprFn(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}
    bool empty() const { return root_ == nullptr; }
    const ExprNode& root() const;
    // Largest variable index referenced (0 when constant).
    int max_var_index() const;

private:
    std::shared_ptr<const ExprNode> root_;
};

// Grammar: expr := term (('+'|'-') term)*
//          term := factor (('*'|'/') factor)*
//          factor := base ('^' int)?
//          base := number | '-' base | ident '(' args ')' | var | '(' expr ')'
//          var := re(zi) | im(zi) | abs(zi) | abs2(zi); ident in {log, exp, max, min}
ExprFn parse_expr(const std::string& text);

double eval_expr(const ExprFn& e, const Point& p);
std::string print_expr(const ExprFn& e);

}  // namespace pluri
