#include "ehoa/automaton.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ehoa {

bool APTable::is_controllable(int idx) const {
    return std::binary_search(controllable.begin(), controllable.end(), idx);
}

std::vector<int> APTable::uncontrollable() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (!is_controllable(i))
            out.push_back(i);
    return out;
}

const char* parity_mode_name(ParityMode m) { return m == ParityMode::Max ? "max" : "min"; }

const char* parity_polarity_name(ParityPolarity p) {
    return p == ParityPolarity::Even ? "even" : "odd";
}

bool eval_label(const LabelExpr& e, const Valuation& v) {
    switch (e.kind) {
    case LabelExpr::Kind::True: return true;
    case LabelExpr::Kind::False: return false;
    case LabelExpr::Kind::Ap: return v.test(e.ap);
    case LabelExpr::Kind::Not: return !eval_label(e.kids[0], v);
    case LabelExpr::Kind::And: return eval_label(e.kids[0], v) && eval_label(e.kids[1], v);
    case LabelExpr::Kind::Or: return eval_label(e.kids[0], v) || eval_label(e.kids[1], v);
    case LabelExpr::Kind::Alias:
        throw Error(ErrorCode::BadHeader, "unresolved alias @" + e.alias + " in label");
    }
    return false;
}

bool eval_acc(const AccFormula& f, uint32_t inf_mask) {
    switch (f.kind) {
    case AccFormula::Kind::True: return true;
    case AccFormula::Kind::False: return false;
    case AccFormula::Kind::Fin: return ((inf_mask >> f.set) & 1u) == 0;
    case AccFormula::Kind::Inf: return ((inf_mask >> f.set) & 1u) == 1;
    case AccFormula::Kind::And: return eval_acc(f.kids[0], inf_mask) && eval_acc(f.kids[1], inf_mask);
    case AccFormula::Kind::Or: return eval_acc(f.kids[0], inf_mask) || eval_acc(f.kids[1], inf_mask);
    }
    return false;
}

bool parity_accepts(const ParitySpec& spec, uint32_t inf_mask) {
    if (inf_mask == 0)
        throw Error(ErrorCode::EmptyInf, "Inf set of a colored run cannot be empty");
    int m;
    if (spec.mode == ParityMode::Max) {
        m = 31 - __builtin_clz(inf_mask);
    } else {
        m = __builtin_ctz(inf_mask);
    }
    int p = spec.polarity == ParityPolarity::Even ? 0 : 1;
    return m % 2 == p;
}

AccFormula canonical_parity_formula(const ParitySpec& spec) {
    // Built from the least-binding color inward: max conditions test the
    // highest set first, min conditions the lowest.
    int k = spec.colors;
    int p = spec.polarity == ParityPolarity::Even ? 0 : 1;
    std::vector<int> order;
    if (spec.mode == ParityMode::Max) {
        for (int c = k - 1; c >= 0; --c)
            order.push_back(c);
    } else {
        for (int c = 0; c < k; ++c)
            order.push_back(c);
    }
    bool have = false;
    AccFormula acc;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int c = *it;
        bool good = (c % 2) == p;
        if (!have) {
            acc = good ? AccFormula::inf(c) : AccFormula::fin(c);
            have = true;
        } else if (good) {
            acc = AccFormula::disj(AccFormula::inf(c), std::move(acc));
        } else {
            acc = AccFormula::conj(AccFormula::fin(c), std::move(acc));
        }
    }
    if (!have)
        return AccFormula::ff();
    return acc;
}

std::pair<Valuation, Valuation> split(const APTable& ap, const Valuation& full) {
    if (full.width != ap.size())
        throw Error(ErrorCode::WidthMismatch,
                    "valuation width " + std::to_string(full.width) + " does not match AP count " +
                        std::to_string(ap.size()));
    Valuation u{0, 0}, c{0, 0};
    for (int i = 0; i < ap.size(); ++i) {
        if (ap.is_controllable(i)) {
            c.set(c.width, full.test(i));
            ++c.width;
        } else {
            u.set(u.width, full.test(i));
            ++u.width;
        }
    }
    return {u, c};
}

Valuation join(const APTable& ap, const Valuation& u, const Valuation& c) {
    std::vector<int> unc = ap.uncontrollable();
    if (u.width != static_cast<int>(unc.size()) ||
        c.width != static_cast<int>(ap.controllable.size()))
        throw Error(ErrorCode::WidthMismatch, "split valuation widths do not match the AP table");
    Valuation full{0, ap.size()};
    for (size_t i = 0; i < unc.size(); ++i)
        full.set(unc[i], u.test(static_cast<int>(i)));
    for (size_t i = 0; i < ap.controllable.size(); ++i)
        full.set(ap.controllable[i], c.test(static_cast<int>(i)));
    return full;
}

std::pair<int, int> successor(const Automaton& aut, int state, const Valuation& v) {
    for (const Edge& e : aut.edges[state])
        if (eval_label(e.label, v))
            return {e.dest, e.color};
    throw Error(ErrorCode::NotComplete,
                "no transition from state " + std::to_string(state) + " (automaton not validated?)");
}

// ---------------------------------------------------------------------------
// Validation

namespace {

[[noreturn]] void bad_header(const std::string& msg) {
    throw Error(ErrorCode::BadHeader, msg);
}

LabelExpr resolve_aliases(const LabelExpr& e, const std::map<std::string, LabelExpr>& table,
                          int ap_count) {
    switch (e.kind) {
    case LabelExpr::Kind::Alias: {
        auto it = table.find(e.alias);
        if (it == table.end())
            bad_header("unknown alias @" + e.alias);
        return it->second;
    }
    case LabelExpr::Kind::Ap:
        if (e.ap >= ap_count)
            bad_header("label references AP " + std::to_string(e.ap) + " but only " +
                       std::to_string(ap_count) + " are declared");
        return e;
    case LabelExpr::Kind::Not:
        return LabelExpr::neg(resolve_aliases(e.kids[0], table, ap_count));
    case LabelExpr::Kind::And:
        return LabelExpr::conj(resolve_aliases(e.kids[0], table, ap_count),
                               resolve_aliases(e.kids[1], table, ap_count));
    case LabelExpr::Kind::Or:
        return LabelExpr::disj(resolve_aliases(e.kids[0], table, ap_count),
                               resolve_aliases(e.kids[1], table, ap_count));
    default:
        return e;
    }
}

ParitySpec parse_acc_name(const std::vector<Token>& toks, long long set_count) {
    auto unsupported = [&]() -> ParitySpec {
        throw Error(ErrorCode::UnsupportedAcceptance,
                    "acc-name must be 'parity (max|min) (even|odd) INT' matching the acceptance"
                    " set count",
                    toks.empty() ? 0 : toks[0].line, toks.empty() ? 0 : toks[0].col);
    };
    if (toks.size() != 4 || toks[0].kind != TokenKind::Ident || toks[0].text != "parity" ||
        toks[1].kind != TokenKind::Ident || toks[2].kind != TokenKind::Ident ||
        toks[3].kind != TokenKind::Int)
        return unsupported();
    ParitySpec spec;
    if (toks[1].text == "max")
        spec.mode = ParityMode::Max;
    else if (toks[1].text == "min")
        spec.mode = ParityMode::Min;
    else
        return unsupported();
    if (toks[2].text == "even")
        spec.polarity = ParityPolarity::Even;
    else if (toks[2].text == "odd")
        spec.polarity = ParityPolarity::Odd;
    else
        return unsupported();
    if (toks[3].value != set_count)
        throw Error(ErrorCode::UnsupportedAcceptance,
                    "acc-name declares " + std::to_string(toks[3].value) +
                        " colors but Acceptance declares " + std::to_string(set_count),
                    toks[3].line, toks[3].col);
    spec.colors = static_cast<int>(set_count);
    return spec;
}

} // namespace

Automaton validate(const RawDocument& doc) {
    Automaton aut;

    // AP table.
    if (!doc.ap)
        bad_header("missing AP: item");
    if (doc.ap->count == 0)
        bad_header("automata over zero atomic propositions are not supported");
    if (doc.ap->count > kMaxAps)
        throw Error(ErrorCode::TooManyAps, "more than " + std::to_string(kMaxAps) +
                                               " atomic propositions (exhaustive valuation"
                                               " enumeration would not terminate at desk scale)");
    aut.ap.names = doc.ap->names;
    {
        std::set<std::string> seen;
        for (const std::string& n : aut.ap.names)
            if (!seen.insert(n).second)
                bad_header("duplicate AP name \"" + n + "\"");
    }
    if (doc.controllable) {
        std::vector<int> ctrl = *doc.controllable;
        std::sort(ctrl.begin(), ctrl.end());
        if (std::adjacent_find(ctrl.begin(), ctrl.end()) != ctrl.end())
            bad_header("duplicate index in controllable-AP:");
        for (int i : ctrl)
            if (i >= aut.ap.size())
                bad_header("controllable-AP index " + std::to_string(i) + " out of range");
        aut.ap.controllable = std::move(ctrl);
    }

    // States and start.
    if (!doc.state_count)
        bad_header("missing States: item");
    if (*doc.state_count <= 0)
        bad_header("States: must declare at least one state");
    aut.state_count = static_cast<int>(*doc.state_count);
    if (!doc.start_state)
        bad_header("missing Start: item");
    if (*doc.start_state >= aut.state_count)
        bad_header("Start: state " + std::to_string(*doc.start_state) + " out of range");
    aut.start = static_cast<int>(*doc.start_state);

    // Acceptance condition.
    if (!doc.acceptance)
        throw Error(ErrorCode::UnsupportedAcceptance, "missing Acceptance: item");
    if (doc.acceptance->set_count == 0)
        throw Error(ErrorCode::UnsupportedAcceptance,
                    "Acceptance: 0 is not a parity condition (at least one color is required)");
    if (doc.acceptance->set_count > kMaxColors)
        throw Error(ErrorCode::TooManyColors,
                    "more than " + std::to_string(kMaxColors) + " acceptance sets");
    if (doc.acc_name.empty())
        throw Error(ErrorCode::UnsupportedAcceptance,
                    "missing acc-name: item (only parity automata are supported)");
    aut.parity = parse_acc_name(doc.acc_name, doc.acceptance->set_count);
    aut.acc_formula = doc.acceptance->formula;

    // Semantic equivalence of the acceptance formula with the parity
    // condition, over every nonempty Inf subset of colors.
    for (uint32_t inf = 1; inf < (1u << aut.parity.colors); ++inf) {
        if (eval_acc(aut.acc_formula, inf) != parity_accepts(aut.parity, inf))
            throw Error(ErrorCode::UnsupportedAcceptance,
                        "Acceptance formula is not equivalent to " +
                            std::string(parity_mode_name(aut.parity.mode)) + " " +
                            parity_polarity_name(aut.parity.polarity) + " " +
                            std::to_string(aut.parity.colors) +
                            " (differs on Inf mask " + std::to_string(inf) + ")");
    }

    // Body: each state index 0..n-1 exactly once.
    std::vector<char> present(aut.state_count, 0);
    aut.edges.resize(aut.state_count);
    for (const RawState& st : doc.body) {
        if (st.index >= aut.state_count)
            bad_header("State: " + std::to_string(st.index) + " out of range");
        if (present[st.index])
            bad_header("State: " + std::to_string(st.index) + " defined twice");
        present[st.index] = 1;
    }
    for (int q = 0; q < aut.state_count; ++q)
        if (!present[q])
            bad_header("state " + std::to_string(q) + " missing from the body");

    // Resolve aliases; aliases may reference earlier aliases only.
    std::map<std::string, LabelExpr> alias_table;
    for (const AliasDef& def : doc.aliases) {
        if (alias_table.count(def.name))
            bad_header("alias @" + def.name + " defined twice");
        alias_table.emplace(def.name, resolve_aliases(def.expr, alias_table, aut.ap.size()));
    }

    for (const RawState& st : doc.body) {
        int q = static_cast<int>(st.index);
        for (const RawEdge& re : st.edges) {
            if (re.colors.size() != 1) {
                Error err(ErrorCode::NotColored,
                          "state " + std::to_string(q) + ": every edge must carry exactly one"
                          " color, found " + std::to_string(re.colors.size()));
                err.state = q;
                throw err;
            }
            if (re.dest >= aut.state_count)
                bad_header("edge destination " + std::to_string(re.dest) + " out of range");
            if (re.colors[0] >= aut.parity.colors)
                bad_header("edge color " + std::to_string(re.colors[0]) + " out of range (" +
                           std::to_string(aut.parity.colors) + " declared)");
            Edge e;
            e.label = resolve_aliases(re.label, alias_table, aut.ap.size());
            e.dest = static_cast<int>(re.dest);
            e.color = re.colors[0];
            aut.edges[q].push_back(std::move(e));
        }
    }

    // Determinism and completeness, exhaustively over full valuations.
    uint32_t val_count = 1u << aut.ap.size();
    for (int q = 0; q < aut.state_count; ++q) {
        for (uint32_t bits = 0; bits < val_count; ++bits) {
            Valuation v{bits, aut.ap.size()};
            int hits = 0;
            for (const Edge& e : aut.edges[q]) {
                if (eval_label(e.label, v) && ++hits > 1)
                    break;
            }
            if (hits == 0) {
                Error err(ErrorCode::NotComplete, "state " + std::to_string(q) +
                                                      " has no transition under valuation " +
                                                      std::to_string(bits));
                err.state = q;
                err.witness_bits = bits;
                err.witness_width = aut.ap.size();
                throw err;
            }
            if (hits > 1) {
                Error err(ErrorCode::NotDeterministic,
                          "state " + std::to_string(q) +
                              " has multiple transitions under valuation " + std::to_string(bits));
                err.state = q;
                err.witness_bits = bits;
                err.witness_width = aut.ap.size();
                throw err;
            }
        }
    }

    return aut;
}

// ---------------------------------------------------------------------------
// Serialization back to a document

namespace {

Token ident_token(std::string text) { return Token{TokenKind::Ident, std::move(text), 0, 0, 0}; }

Token int_token(long long v) { return Token{TokenKind::Int, std::to_string(v), v, 0, 0}; }

Token string_token(const std::string& value) {
    return Token{TokenKind::String, escape_string(value), 0, 0, 0};
}

} // namespace

RawDocument to_document(const Automaton& aut) {
    RawDocument doc;
    doc.header_items.push_back({"HOA", {ident_token("v1")}});

    doc.header_items.push_back({"States", {int_token(aut.state_count)}});
    doc.state_count = aut.state_count;

    doc.header_items.push_back({"Start", {int_token(aut.start)}});
    doc.start_state = aut.start;

    {
        HeaderItem ap{"AP", {int_token(aut.ap.size())}};
        ApDecl decl{aut.ap.size(), aut.ap.names};
        for (const std::string& n : aut.ap.names)
            ap.tokens.push_back(string_token(n));
        doc.header_items.push_back(std::move(ap));
        doc.ap = std::move(decl);
    }

    doc.header_items.push_back({"acc-name",
                                {ident_token("parity"), ident_token(parity_mode_name(aut.parity.mode)),
                                 ident_token(parity_polarity_name(aut.parity.polarity)),
                                 int_token(aut.parity.colors)}});
    doc.acc_name = doc.header_items.back().tokens;

    doc.header_items.push_back({"Acceptance", {}});
    doc.acceptance = AcceptanceDecl{aut.parity.colors, aut.acc_formula};

    {
        HeaderItem ctrl{"controllable-AP", {}};
        for (int i : aut.ap.controllable)
            ctrl.tokens.push_back(int_token(i));
        doc.header_items.push_back(std::move(ctrl));
        doc.controllable = aut.ap.controllable;
    }

    for (int q = 0; q < aut.state_count; ++q) {
        RawState st;
        st.index = q;
        for (const Edge& e : aut.edges[q])
            st.edges.push_back(RawEdge{e.label, e.dest, {e.color}});
        doc.body.push_back(std::move(st));
    }
    return doc;
}

} // namespace ehoa
