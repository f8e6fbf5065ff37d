#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ehoa/hoa.hpp"

namespace ehoa {

// Assignment of truth values to atomic propositions. Bit i corresponds to the
// i-th proposition of the valuation's domain (the full AP table, or the
// ascending list of uncontrollable/controllable indices for split valuations).
struct Valuation {
    uint32_t bits = 0;
    int width = 0;

    bool test(int i) const { return (bits >> i) & 1u; }
    void set(int i, bool b) {
        if (b)
            bits |= 1u << i;
        else
            bits &= ~(1u << i);
    }
    bool operator==(const Valuation&) const = default;
};

struct APTable {
    std::vector<std::string> names;
    std::vector<int> controllable; // sorted, unique

    int size() const { return static_cast<int>(names.size()); }
    bool is_controllable(int idx) const;
    std::vector<int> uncontrollable() const; // ascending
};

enum class ParityMode { Max, Min };
enum class ParityPolarity { Even, Odd };

struct ParitySpec {
    ParityMode mode = ParityMode::Max;
    ParityPolarity polarity = ParityPolarity::Even;
    int colors = 0; // acceptance sets 0..colors-1
};

struct Edge {
    LabelExpr label; // alias-free after validation
    int dest = 0;
    int color = 0;
};

struct Automaton {
    int state_count = 0;
    int start = 0;
    APTable ap;
    std::vector<std::vector<Edge>> edges; // per state
    ParitySpec parity;
    AccFormula acc_formula;
};

// Exhaustive-valuation ceiling: validation enumerates 2^|AP| full valuations.
inline constexpr int kMaxAps = 24;
// Acceptance-equivalence ceiling: 2^k Inf subsets are enumerated.
inline constexpr int kMaxColors = 16;

// Checks the deterministic/complete/colored parity restrictions and resolves
// aliases; the result is safe for all downstream passes.
Automaton validate(const RawDocument& doc);

// m(inf) == polarity (mod 2), with inf given as a bit mask over colors.
bool parity_accepts(const ParitySpec& spec, uint32_t inf_mask);

// Unique transition taken from `state` under a full-AP valuation.
std::pair<int, int> successor(const Automaton& aut, int state, const Valuation& v);

std::pair<Valuation, Valuation> split(const APTable& ap, const Valuation& full);
Valuation join(const APTable& ap, const Valuation& u, const Valuation& c);

bool eval_label(const LabelExpr& e, const Valuation& v);
// Membership interpretation: Inf(n) holds iff n is in the mask, Fin(n) iff not.
bool eval_acc(const AccFormula& f, uint32_t inf_mask);

// The standard nesting of Fin/Inf atoms expressing m(Inf) == p (mod 2).
AccFormula canonical_parity_formula(const ParitySpec& spec);

const char* parity_mode_name(ParityMode m);
const char* parity_polarity_name(ParityPolarity p);

// Serializes a validated automaton back into a printable document.
RawDocument to_document(const Automaton& aut);

} // namespace ehoa
