#pragma once
// Exponent-pair calculus with exact rational arithmetic.
//
// A triple (kappa, lambda, nu) encodes an exponential-sum exponent pair
// together with the arithmetic defect nu accumulated by van der Corput
// steps. Two processes act on triples:
//
//   A: (k, l, n) -> ( k/(2(k+1)), (k+l+1)/(2(k+1)), k/(k+1) )
//   B: (k, l, n) -> ( l - 1/2,    k + 1/2,          l - k + n )
//
// A word like "B A B A^2 B A^3 B" is applied to a start triple with the
// RIGHTMOST letter first, matching how processes compose when written as
// operators. A triple is admissible when 0 <= nu - kappa < 1; an admissible
// triple yields a smoothness budget theta = (1-k)/(1-k+l), and when that
// budget exceeds 1/2 a non-vanishing proportion theta/(1+theta) (as a
// rational in lowest terms).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nvlab/rational.hpp"

namespace nvlab {

struct ExponentPair {
    Rational kappa, lambda, nu;

    // Validates 0 <= kappa <= 1, 0 <= lambda <= 1, nu >= 0.
    ExponentPair(Rational k, Rational l, Rational n);

    bool operator==(const ExponentPair&) const = default;
    std::string str() const; // "(52/243, 50/81, 202/243)"
};

// The trivial starting triple (0, 1, 0).
ExponentPair trivial_pair();

ExponentPair apply_A(const ExponentPair& p);
// Requires lambda >= 1/2 and kappa <= 1/2 so the image stays in range;
// throws InvalidExponentPair otherwise.
ExponentPair apply_B(const ExponentPair& p);

// 0 <= nu - kappa < 1.
bool is_admissible(const ExponentPair& p);

// theta(p) = (1 - kappa) / (1 - kappa + lambda). Denominator is positive
// for every valid triple (kappa <= 1, lambda > 0 unless the degenerate
// kappa = 1, lambda = 0 corner, which is rejected).
Rational theta_budget(const ExponentPair& p);

// theta/(1+theta) when the triple is admissible and theta > 1/2;
// std::nullopt otherwise (no window).
std::optional<Rational> proportion_sup(const ExponentPair& p);

// A word over the process alphabet. Letters are stored in display order:
// word.letters.front() is applied LAST. Parsing accepts whitespace-separated
// tokens "A", "B", "A^3" (exponent >= 1); throws UsageError on anything else
// or on an empty word.
struct Word {
    std::vector<char> letters; // each 'A' or 'B'

    static Word parse(std::string_view text);

    std::size_t size() const { return letters.size(); } // elementary letters
    std::size_t runs() const;                           // maximal A^k/B^k blocks
    std::string text() const;                           // "B A B A^2 B A^3 B"
};

// Applies the word rightmost-first. On failure throws InvalidExponentPair
// whose message names the longest suffix (= prefix of application order)
// that still evaluated.
ExponentPair eval_word(const Word& w, const ExponentPair& start);

struct SearchEntry {
    Word word;
    ExponentPair pair;
    Rational budget;             // theta(pair)
    Rational proportion;         // theta/(1+theta), only for ranked entries
};

struct SearchResult {
    // Pairs opening a window (admissible, theta > 1/2), sorted by budget
    // descending, ties broken by lexicographically smaller letter string.
    std::vector<SearchEntry> ranked;
    std::size_t distinct_pairs = 0; // all distinct triples reached
};

// Breadth-first enumeration of words from `start`. One search step appends
// one maximal run A^k or B^k (k >= 1, alternating with the previous run's
// letter), so a word of r runs is reached at depth r; depth is capped at
// max_steps and the total elementary letter count at 20. Each distinct
// triple is kept with its canonical word (fewest runs, then fewest letters,
// then lexicographically smallest).
SearchResult search_words(unsigned max_steps, const ExponentPair& start);

} // namespace nvlab
