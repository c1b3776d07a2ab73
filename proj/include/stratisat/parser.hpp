#ifndef STRATISAT_PARSER_HPP
#define STRATISAT_PARSER_HPP

#include <map>
#include <string>
#include <vector>

#include "stratisat/formula.hpp"

namespace stratisat {

struct SourcePos {
    int line = 0;
    int col = 0;
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string message;
    SourcePos pos;
};

std::string format_diagnostic(const Diagnostic& d);

// Result of parsing a `.3lqst` document:
//
//   # comment
//   sort0 x y; sort1 X; sort2 A;
//   assert <formula>.
//
// Connectives: ~ & | -> <->, quantifiers `forall`/`exists` (the latter is
// sugar for ~forall~ and is desugared immediately), membership `in`,
// equality `=`, enumerations `{x1,...,xk}`. One namespace across sorts; a
// variable may not occur both bound and free.
struct ParseResult {
    FormulaPtr formula; // null on failure
    std::map<std::string, Sort> declarations;
    std::vector<Variable> declaration_order;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return formula != nullptr; }
};

ParseResult parse_file(const std::string& text);

// Renders the formula alone, with minimal parentheses. Re-parsing text
// produced by `render` reproduces the formula structurally.
std::string render_formula(const FormulaPtr& f);

// Renders a complete document: sort declarations for every variable
// occurring in the formula (bound or free), then the assertion.
std::string render(const FormulaPtr& f);

} // namespace stratisat

#endif
