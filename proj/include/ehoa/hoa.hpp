#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ehoa/error.hpp"

namespace ehoa {

enum class TokenKind {
    Ident,
    HeaderName, // identifier immediately followed by ':'
    Int,
    String,
    AliasName, // @name
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Not,
    And,
    Or,
    BodyMarker, // --BODY--
    EndMarker,  // --END--
};

struct Token {
    TokenKind kind;
    std::string text;    // Ident/HeaderName/AliasName: name; String: body with escapes kept
    long long value = 0; // Int
    int line = 0, col = 0;
};

std::vector<Token> lex(std::string_view text);

// Boolean formula over atomic propositions, as used in edge labels.
// Alias nodes survive parsing and are substituted during validation.
struct LabelExpr {
    enum class Kind { True, False, Ap, Not, And, Or, Alias };

    Kind kind = Kind::True;
    int ap = -1;               // Kind::Ap
    std::string alias;         // Kind::Alias
    std::vector<LabelExpr> kids;

    static LabelExpr tt() { return {}; }
    static LabelExpr ff() { return {Kind::False, -1, {}, {}}; }
    static LabelExpr prop(int idx) { return {Kind::Ap, idx, {}, {}}; }
    static LabelExpr ref(std::string name) { return {Kind::Alias, -1, std::move(name), {}}; }
    static LabelExpr neg(LabelExpr e);
    static LabelExpr conj(LabelExpr l, LabelExpr r);
    static LabelExpr disj(LabelExpr l, LabelExpr r);

    bool operator==(const LabelExpr& o) const;
};

// Acceptance-condition formula over acceptance-set indices.
struct AccFormula {
    enum class Kind { Fin, Inf, And, Or, True, False };

    Kind kind = Kind::True;
    int set = -1;
    std::vector<AccFormula> kids;

    static AccFormula tt() { return {}; }
    static AccFormula ff() { return {Kind::False, -1, {}}; }
    static AccFormula fin(int s) { return {Kind::Fin, s, {}}; }
    static AccFormula inf(int s) { return {Kind::Inf, s, {}}; }
    static AccFormula conj(AccFormula l, AccFormula r);
    static AccFormula disj(AccFormula l, AccFormula r);

    bool operator==(const AccFormula& o) const;
};

struct RawEdge {
    LabelExpr label;
    long long dest = 0;
    std::vector<int> colors; // sorted, unique
};

struct RawState {
    long long index = 0;
    std::optional<std::string> name;
    std::vector<RawEdge> edges;
};

struct HeaderItem {
    std::string keyword;        // without the trailing ':'
    std::vector<Token> tokens;  // raw payload
};

struct ApDecl {
    long long count = 0;
    std::vector<std::string> names; // unescaped
};

struct AliasDef {
    std::string name;
    LabelExpr expr;
};

struct AcceptanceDecl {
    long long set_count = 0;
    AccFormula formula;
};

struct RawDocument {
    std::vector<HeaderItem> header_items; // input order, recognized items included
    std::optional<long long> state_count;
    std::optional<long long> start_state;
    std::optional<ApDecl> ap;
    std::vector<AliasDef> aliases;        // definition order
    std::optional<AcceptanceDecl> acceptance;
    std::vector<Token> acc_name;          // payload of acc-name:, empty if absent
    std::optional<std::vector<int>> controllable;
    std::vector<RawState> body;
};

RawDocument parse(std::string_view text);

LabelExpr parse_label_expr(const std::vector<Token>& tokens);
LabelExpr parse_label_text(std::string_view text);

// Payload of an Acceptance: item -> (set count, formula).
std::pair<long long, AccFormula> parse_acceptance(const std::vector<Token>& tokens);

std::string print(const RawDocument& doc);
std::string print_label(const LabelExpr& e);
std::string print_acceptance(const AccFormula& f);

// Structural equality; canonical forms are compared, so two documents are
// equal iff they print identically.
bool structurally_equal(const RawDocument& a, const RawDocument& b);

std::string unescape_string(std::string_view raw);
std::string escape_string(std::string_view value);

} // namespace ehoa
