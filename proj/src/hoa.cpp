#include "ehoa/hoa.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace ehoa {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::Lex: return "lex";
    case ErrorCode::Syntax: return "syntax";
    case ErrorCode::OutOfRangeSet: return "out-of-range-set";
    case ErrorCode::UnsupportedNegatedSet: return "unsupported-negated-set";
    case ErrorCode::BadHeader: return "bad-header";
    case ErrorCode::NotDeterministic: return "not-deterministic";
    case ErrorCode::NotComplete: return "not-complete";
    case ErrorCode::NotColored: return "not-colored";
    case ErrorCode::UnsupportedAcceptance: return "unsupported-acceptance";
    case ErrorCode::TooManyAps: return "too-many-aps";
    case ErrorCode::TooManyColors: return "too-many-colors";
    case ErrorCode::TooManyValuations: return "too-many-valuations";
    case ErrorCode::EmptyInf: return "empty-inf";
    case ErrorCode::WidthMismatch: return "width-mismatch";
    case ErrorCode::RecursionDepth: return "recursion-depth";
    case ErrorCode::Unrealizable: return "unrealizable";
    case ErrorCode::InterfaceMismatch: return "interface-mismatch";
    case ErrorCode::ProductTooLarge: return "product-too-large";
    case ErrorCode::VerifyFailed: return "verify-failed";
    case ErrorCode::Io: return "io";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

struct Lexer {
    std::string_view text;
    size_t pos = 0;
    int line = 1, col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char peek_at(size_t off) const { return pos + off < text.size() ? text[pos + off] : '\0'; }

    char advance() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& msg, int l, int c) const {
        throw Error(ErrorCode::Lex, msg, l, c);
    }

    void skip_comment() {
        int l = line, c = col;
        advance(); // '/'
        advance(); // '*'
        int depth = 1;
        while (depth > 0) {
            if (eof())
                fail("unterminated comment", l, c);
            if (peek() == '/' && peek_at(1) == '*') {
                advance();
                advance();
                ++depth;
            } else if (peek() == '*' && peek_at(1) == '/') {
                advance();
                advance();
                --depth;
            } else {
                advance();
            }
        }
    }

    Token lex_string() {
        int l = line, c = col;
        advance(); // opening quote
        std::string raw;
        while (true) {
            if (eof())
                fail("unterminated string", l, c);
            char ch = peek();
            if (ch == '\n')
                fail("unterminated string (newline before closing quote)", l, c);
            advance();
            if (ch == '"')
                break;
            raw.push_back(ch);
            if (ch == '\\') {
                if (eof())
                    fail("unterminated string", l, c);
                raw.push_back(advance()); // escaped character, kept verbatim
            }
        }
        return {TokenKind::String, raw, 0, l, c};
    }

    Token lex_delimiter() {
        int l = line, c = col;
        advance();
        if (eof() || peek() != '-')
            fail("unexpected character '-'", l, c);
        advance();
        std::string name;
        while (!eof() && std::isupper(static_cast<unsigned char>(peek())))
            name.push_back(advance());
        if (name.empty() || eof() || peek() != '-' || peek_at(1) != '-')
            fail("malformed delimiter, expected --BODY-- or --END--", l, c);
        advance();
        advance();
        if (name == "BODY")
            return {TokenKind::BodyMarker, name, 0, l, c};
        if (name == "END")
            return {TokenKind::EndMarker, name, 0, l, c};
        fail("unsupported delimiter --" + name + "--", l, c);
    }

    std::vector<Token> run() {
        std::vector<Token> out;
        while (!eof()) {
            char ch = peek();
            if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
                advance();
                continue;
            }
            if (ch == '/') {
                if (peek_at(1) != '*')
                    fail("unexpected character '/'", line, col);
                skip_comment();
                continue;
            }
            int l = line, c = col;
            if (ch == '"') {
                out.push_back(lex_string());
                continue;
            }
            if (ch == '-') {
                out.push_back(lex_delimiter());
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                std::string digits;
                while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
                    digits.push_back(advance());
                long long value = 0;
                auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
                if (ec != std::errc() || p != digits.data() + digits.size())
                    fail("integer too large: " + digits, l, c);
                out.push_back({TokenKind::Int, digits, value, l, c});
                continue;
            }
            if (ch == '@') {
                advance();
                std::string name;
                while (!eof() && ident_char(peek()))
                    name.push_back(advance());
                if (name.empty())
                    fail("empty alias name after '@'", l, c);
                out.push_back({TokenKind::AliasName, name, 0, l, c});
                continue;
            }
            if (ident_start(ch)) {
                std::string name;
                while (!eof() && ident_char(peek()))
                    name.push_back(advance());
                if (!eof() && peek() == ':') {
                    advance();
                    out.push_back({TokenKind::HeaderName, name, 0, l, c});
                } else {
                    out.push_back({TokenKind::Ident, name, 0, l, c});
                }
                continue;
            }
            TokenKind kind;
            switch (ch) {
            case '[': kind = TokenKind::LBracket; break;
            case ']': kind = TokenKind::RBracket; break;
            case '{': kind = TokenKind::LBrace; break;
            case '}': kind = TokenKind::RBrace; break;
            case '(': kind = TokenKind::LParen; break;
            case ')': kind = TokenKind::RParen; break;
            case '!': kind = TokenKind::Not; break;
            case '&': kind = TokenKind::And; break;
            case '|': kind = TokenKind::Or; break;
            default:
                fail(std::string("unexpected character '") + ch + "'", l, c);
            }
            advance();
            out.push_back({kind, std::string(1, ch), 0, l, c});
        }
        return out;
    }
};

} // namespace

std::vector<Token> lex(std::string_view text) {
    Lexer lx{text};
    return lx.run();
}

std::string unescape_string(std::string_view raw) {
    std::string out;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == '\\' && i + 1 < raw.size() && (raw[i + 1] == '"' || raw[i + 1] == '\\')) {
            out.push_back(raw[++i]);
        } else {
            out.push_back(raw[i]);
        }
    }
    return out;
}

std::string escape_string(std::string_view value) {
    std::string out;
    for (char c : value) {
        if (c == '"' || c == '\\')
            out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Expression trees

LabelExpr LabelExpr::neg(LabelExpr e) {
    LabelExpr r{Kind::Not, -1, {}, {}};
    r.kids.push_back(std::move(e));
    return r;
}

LabelExpr LabelExpr::conj(LabelExpr l, LabelExpr r) {
    LabelExpr out{Kind::And, -1, {}, {}};
    out.kids.push_back(std::move(l));
    out.kids.push_back(std::move(r));
    return out;
}

LabelExpr LabelExpr::disj(LabelExpr l, LabelExpr r) {
    LabelExpr out{Kind::Or, -1, {}, {}};
    out.kids.push_back(std::move(l));
    out.kids.push_back(std::move(r));
    return out;
}

bool LabelExpr::operator==(const LabelExpr& o) const {
    return kind == o.kind && ap == o.ap && alias == o.alias && kids == o.kids;
}

AccFormula AccFormula::conj(AccFormula l, AccFormula r) {
    AccFormula out{Kind::And, -1, {}};
    out.kids.push_back(std::move(l));
    out.kids.push_back(std::move(r));
    return out;
}

AccFormula AccFormula::disj(AccFormula l, AccFormula r) {
    AccFormula out{Kind::Or, -1, {}};
    out.kids.push_back(std::move(l));
    out.kids.push_back(std::move(r));
    return out;
}

bool AccFormula::operator==(const AccFormula& o) const {
    return kind == o.kind && set == o.set && kids == o.kids;
}

// ---------------------------------------------------------------------------
// Token cursor shared by the sub-parsers

namespace {

struct Cursor {
    const std::vector<Token>& toks;
    size_t i = 0;

    bool eof() const { return i >= toks.size(); }
    const Token& peek() const { return toks[i]; }
    const Token& next() { return toks[i++]; }
    bool at(TokenKind k) const { return !eof() && toks[i].kind == k; }

    int err_line() const {
        if (!eof())
            return toks[i].line;
        return toks.empty() ? 1 : toks.back().line;
    }
    int err_col() const {
        if (!eof())
            return toks[i].col;
        return toks.empty() ? 1 : toks.back().col;
    }

    [[noreturn]] void fail(ErrorCode code, const std::string& msg) const {
        throw Error(code, msg, err_line(), err_col());
    }
};

// Label grammar: expr := term ('|' term)*, term := factor ('&' factor)*,
// factor := '!' factor | atom. '!' binds tightest, '&' before '|'.
LabelExpr parse_label_factor(Cursor& cur);

LabelExpr parse_label_or(Cursor& cur);

LabelExpr parse_label_atom(Cursor& cur) {
    if (cur.eof())
        cur.fail(ErrorCode::Syntax, "label expression ends unexpectedly");
    const Token& t = cur.next();
    switch (t.kind) {
    case TokenKind::Int:
        return LabelExpr::prop(static_cast<int>(t.value));
    case TokenKind::Ident:
        if (t.text == "t")
            return LabelExpr::tt();
        if (t.text == "f")
            return LabelExpr::ff();
        throw Error(ErrorCode::Syntax, "unexpected identifier '" + t.text + "' in label", t.line, t.col);
    case TokenKind::AliasName:
        return LabelExpr::ref(t.text);
    case TokenKind::LParen: {
        LabelExpr e = parse_label_or(cur);
        if (!cur.at(TokenKind::RParen))
            cur.fail(ErrorCode::Syntax, "missing ')' in label");
        cur.next();
        return e;
    }
    default:
        throw Error(ErrorCode::Syntax, "unexpected token '" + t.text + "' in label", t.line, t.col);
    }
}

LabelExpr parse_label_factor(Cursor& cur) {
    if (cur.at(TokenKind::Not)) {
        cur.next();
        return LabelExpr::neg(parse_label_factor(cur));
    }
    return parse_label_atom(cur);
}

LabelExpr parse_label_and(Cursor& cur) {
    LabelExpr e = parse_label_factor(cur);
    while (cur.at(TokenKind::And)) {
        cur.next();
        e = LabelExpr::conj(std::move(e), parse_label_factor(cur));
    }
    return e;
}

LabelExpr parse_label_or(Cursor& cur) {
    LabelExpr e = parse_label_and(cur);
    while (cur.at(TokenKind::Or)) {
        cur.next();
        e = LabelExpr::disj(std::move(e), parse_label_and(cur));
    }
    return e;
}

// Acceptance grammar: same operator structure, atoms are Fin(n)/Inf(n)/t/f.
AccFormula parse_acc_or(Cursor& cur, long long set_count);

AccFormula parse_acc_atom(Cursor& cur, long long set_count) {
    if (cur.eof())
        cur.fail(ErrorCode::Syntax, "acceptance formula ends unexpectedly");
    const Token& t = cur.next();
    if (t.kind == TokenKind::LParen) {
        AccFormula f = parse_acc_or(cur, set_count);
        if (!cur.at(TokenKind::RParen))
            cur.fail(ErrorCode::Syntax, "missing ')' in acceptance formula");
        cur.next();
        return f;
    }
    if (t.kind != TokenKind::Ident)
        throw Error(ErrorCode::Syntax, "unexpected token '" + t.text + "' in acceptance formula",
                    t.line, t.col);
    if (t.text == "t")
        return AccFormula::tt();
    if (t.text == "f")
        return AccFormula::ff();
    if (t.text != "Fin" && t.text != "Inf")
        throw Error(ErrorCode::Syntax, "unknown acceptance atom '" + t.text + "'", t.line, t.col);
    if (!cur.at(TokenKind::LParen))
        cur.fail(ErrorCode::Syntax, "expected '(' after " + t.text);
    cur.next();
    if (cur.at(TokenKind::Not)) {
        const Token& bang = cur.peek();
        throw Error(ErrorCode::UnsupportedNegatedSet,
                    "negated acceptance sets like " + t.text + "(!n) are not supported",
                    bang.line, bang.col);
    }
    if (!cur.at(TokenKind::Int))
        cur.fail(ErrorCode::Syntax, "expected acceptance-set index after " + t.text + "(");
    const Token& idx = cur.next();
    if (idx.value >= set_count)
        throw Error(ErrorCode::OutOfRangeSet,
                    "acceptance set " + std::to_string(idx.value) + " out of range (declared " +
                        std::to_string(set_count) + ")",
                    idx.line, idx.col);
    if (!cur.at(TokenKind::RParen))
        cur.fail(ErrorCode::Syntax, "missing ')' after acceptance-set index");
    cur.next();
    int s = static_cast<int>(idx.value);
    return t.text == "Fin" ? AccFormula::fin(s) : AccFormula::inf(s);
}

AccFormula parse_acc_and(Cursor& cur, long long set_count) {
    AccFormula f = parse_acc_atom(cur, set_count);
    while (cur.at(TokenKind::And)) {
        cur.next();
        f = AccFormula::conj(std::move(f), parse_acc_atom(cur, set_count));
    }
    return f;
}

AccFormula parse_acc_or(Cursor& cur, long long set_count) {
    AccFormula f = parse_acc_and(cur, set_count);
    while (cur.at(TokenKind::Or)) {
        cur.next();
        f = AccFormula::disj(std::move(f), parse_acc_and(cur, set_count));
    }
    return f;
}

} // namespace

LabelExpr parse_label_expr(const std::vector<Token>& tokens) {
    Cursor cur{tokens};
    if (cur.eof())
        cur.fail(ErrorCode::Syntax, "empty label expression");
    LabelExpr e = parse_label_or(cur);
    if (!cur.eof())
        cur.fail(ErrorCode::Syntax, "trailing token '" + cur.peek().text + "' in label");
    return e;
}

LabelExpr parse_label_text(std::string_view text) {
    return parse_label_expr(lex(text));
}

std::pair<long long, AccFormula> parse_acceptance(const std::vector<Token>& tokens) {
    Cursor cur{tokens};
    if (!cur.at(TokenKind::Int))
        cur.fail(ErrorCode::Syntax, "Acceptance: must start with the number of acceptance sets");
    long long count = cur.next().value;
    if (cur.eof())
        cur.fail(ErrorCode::Syntax, "missing acceptance formula");
    AccFormula f = parse_acc_or(cur, count);
    if (!cur.eof())
        cur.fail(ErrorCode::Syntax, "trailing token '" + cur.peek().text + "' in acceptance formula");
    return {count, std::move(f)};
}

// ---------------------------------------------------------------------------
// Document parser

namespace {

bool is_recognized(const std::string& kw) {
    return kw == "HOA" || kw == "States" || kw == "Start" || kw == "AP" || kw == "Alias" ||
           kw == "Acceptance" || kw == "acc-name" || kw == "controllable-AP" || kw == "tool" ||
           kw == "name" || kw == "properties";
}

[[noreturn]] void fail_at(const Token& t, ErrorCode code, const std::string& msg) {
    throw Error(code, msg, t.line, t.col);
}

void check_single_int_payload(const Token& kw, const std::vector<Token>& payload) {
    if (payload.size() != 1 || payload[0].kind != TokenKind::Int) {
        if (payload.size() > 1)
            fail_at(payload[1], ErrorCode::Syntax,
                    kw.text + ": expects a single integer (start-state conjunctions and lists are"
                              " not supported)");
        fail_at(kw, ErrorCode::Syntax, kw.text + ": expects a single integer");
    }
}

struct DocParser {
    Cursor cur;
    RawDocument doc;

    explicit DocParser(const std::vector<Token>& toks) : cur{toks} {}

    void header_item(const Token& kw, std::vector<Token> payload) {
        const std::string& k = kw.text;
        if (k == "HOA") {
            fail_at(kw, ErrorCode::Syntax, "duplicate HOA: item");
        } else if (k == "States") {
            if (doc.state_count)
                fail_at(kw, ErrorCode::Syntax, "duplicate States: item");
            check_single_int_payload(kw, payload);
            doc.state_count = payload[0].value;
        } else if (k == "Start") {
            if (doc.start_state)
                fail_at(kw, ErrorCode::Syntax, "multiple Start: items are not supported");
            check_single_int_payload(kw, payload);
            doc.start_state = payload[0].value;
        } else if (k == "AP") {
            if (doc.ap)
                fail_at(kw, ErrorCode::Syntax, "duplicate AP: item");
            if (payload.empty() || payload[0].kind != TokenKind::Int)
                fail_at(kw, ErrorCode::Syntax, "AP: expects a count followed by quoted names");
            ApDecl decl;
            decl.count = payload[0].value;
            for (size_t j = 1; j < payload.size(); ++j) {
                if (payload[j].kind != TokenKind::String)
                    fail_at(payload[j], ErrorCode::Syntax, "AP: names must be double-quoted strings");
                decl.names.push_back(unescape_string(payload[j].text));
            }
            if (static_cast<long long>(decl.names.size()) != decl.count)
                fail_at(kw, ErrorCode::Syntax,
                        "AP: declares " + std::to_string(decl.count) + " propositions but lists " +
                            std::to_string(decl.names.size()) + " names");
            doc.ap = std::move(decl);
        } else if (k == "Alias") {
            if (payload.empty() || payload[0].kind != TokenKind::AliasName)
                fail_at(kw, ErrorCode::Syntax, "Alias: expects @name followed by a label expression");
            std::vector<Token> expr(payload.begin() + 1, payload.end());
            AliasDef def{payload[0].text, parse_label_expr(expr)};
            doc.aliases.push_back(std::move(def));
        } else if (k == "Acceptance") {
            if (doc.acceptance)
                fail_at(kw, ErrorCode::Syntax, "duplicate Acceptance: item");
            auto [count, formula] = parse_acceptance(payload);
            doc.acceptance = AcceptanceDecl{count, std::move(formula)};
        } else if (k == "acc-name") {
            if (!doc.acc_name.empty())
                fail_at(kw, ErrorCode::Syntax, "duplicate acc-name: item");
            if (payload.empty())
                fail_at(kw, ErrorCode::Syntax, "acc-name: expects a name");
            doc.acc_name = payload;
        } else if (k == "controllable-AP") {
            if (doc.controllable)
                fail_at(kw, ErrorCode::Syntax, "controllable-AP: may appear at most once");
            std::vector<int> indices;
            for (const Token& t : payload) {
                if (t.kind != TokenKind::Int)
                    fail_at(t, ErrorCode::Syntax, "controllable-AP: expects integer indices");
                indices.push_back(static_cast<int>(t.value));
            }
            doc.controllable = std::move(indices);
        } else if (k == "tool") {
            for (const Token& t : payload)
                if (t.kind != TokenKind::String)
                    fail_at(t, ErrorCode::Syntax, "tool: expects quoted strings");
            if (payload.empty() || payload.size() > 2)
                fail_at(kw, ErrorCode::Syntax, "tool: expects one or two quoted strings");
        } else if (k == "name") {
            if (payload.size() != 1 || payload[0].kind != TokenKind::String)
                fail_at(kw, ErrorCode::Syntax, "name: expects a single quoted string");
        } else if (k == "properties") {
            for (const Token& t : payload)
                if (t.kind != TokenKind::Ident)
                    fail_at(t, ErrorCode::Syntax, "properties: expects identifiers");
        } else if (std::isupper(static_cast<unsigned char>(k[0]))) {
            // HOA convention: header items starting with a capital letter must
            // be understood by the consumer.
            fail_at(kw, ErrorCode::Syntax, "unknown mandatory header item '" + k + ":'");
        }
        doc.header_items.push_back(HeaderItem{k, std::move(payload)});
    }

    std::vector<Token> collect_payload() {
        std::vector<Token> payload;
        while (!cur.eof() && cur.peek().kind != TokenKind::HeaderName &&
               cur.peek().kind != TokenKind::BodyMarker && cur.peek().kind != TokenKind::EndMarker)
            payload.push_back(cur.next());
        return payload;
    }

    RawEdge parse_edge() {
        const Token& open = cur.next(); // '['
        std::vector<Token> label_toks;
        while (!cur.eof() && cur.peek().kind != TokenKind::RBracket) {
            if (cur.peek().kind == TokenKind::BodyMarker || cur.peek().kind == TokenKind::EndMarker)
                fail_at(open, ErrorCode::Syntax, "unterminated edge label, missing ']'");
            label_toks.push_back(cur.next());
        }
        if (cur.eof())
            fail_at(open, ErrorCode::Syntax, "unterminated edge label, missing ']'");
        cur.next(); // ']'
        if (label_toks.empty())
            fail_at(open, ErrorCode::Syntax, "empty edge label");
        RawEdge edge;
        edge.label = parse_label_expr(label_toks);
        if (!cur.at(TokenKind::Int))
            cur.fail(ErrorCode::Syntax, "edge expects a destination state index after the label");
        edge.dest = cur.next().value;
        if (cur.at(TokenKind::And))
            cur.fail(ErrorCode::Syntax, "destination conjunctions (universal branching) are not"
                                        " supported");
        if (cur.at(TokenKind::Int))
            cur.fail(ErrorCode::Syntax, "multiple destination states are not supported");
        if (cur.at(TokenKind::LBrace)) {
            cur.next();
            while (cur.at(TokenKind::Int))
                edge.colors.push_back(static_cast<int>(cur.next().value));
            if (!cur.at(TokenKind::RBrace))
                cur.fail(ErrorCode::Syntax, "missing '}' after edge acceptance sets");
            cur.next();
            std::sort(edge.colors.begin(), edge.colors.end());
            edge.colors.erase(std::unique(edge.colors.begin(), edge.colors.end()),
                              edge.colors.end());
        }
        return edge;
    }

    RawState parse_state() {
        cur.next(); // 'State:'
        if (cur.at(TokenKind::LBracket))
            cur.fail(ErrorCode::Syntax, "state labels are not supported");
        if (!cur.at(TokenKind::Int))
            cur.fail(ErrorCode::Syntax, "State: expects a state index");
        RawState st;
        st.index = cur.next().value;
        if (cur.at(TokenKind::String))
            st.name = cur.next().text;
        if (cur.at(TokenKind::LBrace))
            cur.fail(ErrorCode::Syntax, "state acceptance sets are not supported (colors go on"
                                        " edges)");
        while (!cur.eof()) {
            if (cur.at(TokenKind::LBracket)) {
                st.edges.push_back(parse_edge());
                continue;
            }
            if (cur.at(TokenKind::EndMarker) ||
                (cur.at(TokenKind::HeaderName) && cur.peek().text == "State"))
                break;
            if (cur.at(TokenKind::Int) || cur.at(TokenKind::LBrace))
                cur.fail(ErrorCode::Syntax, "edges must carry an explicit bracketed label");
            cur.fail(ErrorCode::Syntax, "unexpected token '" + cur.peek().text + "' in state body");
        }
        return st;
    }

    RawDocument run() {
        if (cur.eof())
            throw Error(ErrorCode::Syntax, "empty input, expected HOA: v1", 1, 1);
        if (!cur.at(TokenKind::HeaderName) || cur.peek().text != "HOA")
            cur.fail(ErrorCode::Syntax, "input must start with HOA: v1");
        const Token first = cur.next();
        std::vector<Token> version = collect_payload();
        if (version.size() != 1 || version[0].kind != TokenKind::Ident || version[0].text != "v1")
            fail_at(first, ErrorCode::Syntax, "unsupported HOA version (expected v1)");
        doc.header_items.push_back(HeaderItem{"HOA", std::move(version)});

        while (cur.at(TokenKind::HeaderName)) {
            Token kw = cur.next();
            header_item(kw, collect_payload());
        }
        if (!cur.at(TokenKind::BodyMarker))
            cur.fail(ErrorCode::Syntax, "missing --BODY--");
        cur.next();

        while (!cur.eof() && !cur.at(TokenKind::EndMarker)) {
            if (cur.at(TokenKind::HeaderName) && cur.peek().text == "State") {
                doc.body.push_back(parse_state());
                continue;
            }
            cur.fail(ErrorCode::Syntax, "expected State: or --END-- in body");
        }
        if (!cur.at(TokenKind::EndMarker))
            cur.fail(ErrorCode::Syntax, "missing --END--");
        cur.next();
        if (!cur.eof())
            cur.fail(ErrorCode::Syntax, "unexpected content after --END--");
        return std::move(doc);
    }
};

} // namespace

RawDocument parse(std::string_view text) {
    std::vector<Token> toks = lex(text);
    DocParser p(toks);
    return p.run();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

// Precedence levels: Or = 1, And = 2, Not = 3, atoms above. A child is
// parenthesized when its level is below the context, or equal on the right of
// a same-level binary node (keeps trees and their prints mutually inverse).
int label_level(const LabelExpr& e) {
    switch (e.kind) {
    case LabelExpr::Kind::Or: return 1;
    case LabelExpr::Kind::And: return 2;
    case LabelExpr::Kind::Not: return 3;
    default: return 4;
    }
}

void print_label_rec(std::string& out, const LabelExpr& e, int min_level) {
    int level = label_level(e);
    bool paren = level < min_level;
    if (paren)
        out.push_back('(');
    switch (e.kind) {
    case LabelExpr::Kind::True: out.push_back('t'); break;
    case LabelExpr::Kind::False: out.push_back('f'); break;
    case LabelExpr::Kind::Ap: out += std::to_string(e.ap); break;
    case LabelExpr::Kind::Alias:
        out.push_back('@');
        out += e.alias;
        break;
    case LabelExpr::Kind::Not:
        out.push_back('!');
        print_label_rec(out, e.kids[0], 3);
        break;
    case LabelExpr::Kind::And:
        print_label_rec(out, e.kids[0], 2);
        out += " & ";
        print_label_rec(out, e.kids[1], 3);
        break;
    case LabelExpr::Kind::Or:
        print_label_rec(out, e.kids[0], 1);
        out += " | ";
        print_label_rec(out, e.kids[1], 2);
        break;
    }
    if (paren)
        out.push_back(')');
}

int acc_level(const AccFormula& f) {
    switch (f.kind) {
    case AccFormula::Kind::Or: return 1;
    case AccFormula::Kind::And: return 2;
    default: return 3;
    }
}

void print_acc_rec(std::string& out, const AccFormula& f, int min_level) {
    int level = acc_level(f);
    bool paren = level < min_level;
    if (paren)
        out.push_back('(');
    switch (f.kind) {
    case AccFormula::Kind::True: out.push_back('t'); break;
    case AccFormula::Kind::False: out.push_back('f'); break;
    case AccFormula::Kind::Fin:
        out += "Fin(" + std::to_string(f.set) + ")";
        break;
    case AccFormula::Kind::Inf:
        out += "Inf(" + std::to_string(f.set) + ")";
        break;
    case AccFormula::Kind::And:
        print_acc_rec(out, f.kids[0], 2);
        out += " & ";
        print_acc_rec(out, f.kids[1], 3);
        break;
    case AccFormula::Kind::Or:
        print_acc_rec(out, f.kids[0], 1);
        out += " | ";
        print_acc_rec(out, f.kids[1], 2);
        break;
    }
    if (paren)
        out.push_back(')');
}

std::string print_tokens(const std::vector<Token>& toks) {
    std::string out;
    for (const Token& t : toks) {
        if (!out.empty())
            out.push_back(' ');
        switch (t.kind) {
        case TokenKind::String:
            out.push_back('"');
            out += t.text;
            out.push_back('"');
            break;
        case TokenKind::AliasName:
            out.push_back('@');
            out += t.text;
            break;
        case TokenKind::HeaderName:
            out += t.text;
            out.push_back(':');
            break;
        default:
            out += t.text;
        }
    }
    return out;
}

} // namespace

std::string print_label(const LabelExpr& e) {
    std::string out;
    print_label_rec(out, e, 0);
    return out;
}

std::string print_acceptance(const AccFormula& f) {
    std::string out;
    print_acc_rec(out, f, 0);
    return out;
}

std::string print(const RawDocument& doc) {
    std::string out;
    size_t alias_idx = 0;
    for (const HeaderItem& item : doc.header_items) {
        out += item.keyword;
        out.push_back(':');
        std::string payload;
        if (item.keyword == "Acceptance" && doc.acceptance) {
            payload = std::to_string(doc.acceptance->set_count) + " " +
                      print_acceptance(doc.acceptance->formula);
        } else if (item.keyword == "Alias" && alias_idx < doc.aliases.size()) {
            const AliasDef& def = doc.aliases[alias_idx++];
            payload = "@" + def.name + " " + print_label(def.expr);
        } else {
            payload = print_tokens(item.tokens);
        }
        if (!payload.empty()) {
            out.push_back(' ');
            out += payload;
        }
        out.push_back('\n');
    }
    out += "--BODY--\n";
    for (const RawState& st : doc.body) {
        out += "State: " + std::to_string(st.index);
        if (st.name) {
            out += " \"" + escape_string(*st.name) + "\"";
        }
        out.push_back('\n');
        for (const RawEdge& e : st.edges) {
            out += "[" + print_label(e.label) + "] " + std::to_string(e.dest);
            if (!e.colors.empty()) {
                out += " {";
                for (size_t i = 0; i < e.colors.size(); ++i) {
                    if (i)
                        out.push_back(' ');
                    out += std::to_string(e.colors[i]);
                }
                out.push_back('}');
            }
            out.push_back('\n');
        }
    }
    out += "--END--\n";
    return out;
}

bool structurally_equal(const RawDocument& a, const RawDocument& b) {
    return print(a) == print(b);
}

} // namespace ehoa
