#include "nvlab/exppair.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <tuple>

namespace nvlab {

namespace {

const Rational kZero(0);
const Rational kOne(1);
const Rational kHalf(1, 2);

} // namespace

ExponentPair::ExponentPair(Rational k, Rational l, Rational n)
    : kappa(std::move(k)), lambda(std::move(l)), nu(std::move(n)) {
    if (kappa < kZero || kappa > kOne || lambda < kZero || lambda > kOne || nu < kZero)
        throw InvalidExponentPair("triple out of range: (" + to_fraction_string(kappa) +
                                  ", " + to_fraction_string(lambda) + ", " +
                                  to_fraction_string(nu) + ")");
}

std::string ExponentPair::str() const {
    return "(" + to_fraction_string(kappa) + ", " + to_fraction_string(lambda) + ", " +
           to_fraction_string(nu) + ")";
}

ExponentPair trivial_pair() { return ExponentPair(0, 1, 0); }

ExponentPair apply_A(const ExponentPair& p) {
    const Rational d = 2 * (p.kappa + 1);
    return ExponentPair(p.kappa / d, (p.kappa + p.lambda + 1) / d, p.kappa / (p.kappa + 1));
}

ExponentPair apply_B(const ExponentPair& p) {
    if (p.lambda < kHalf)
        throw InvalidExponentPair("B requires lambda >= 1/2, got " + p.str());
    // kappa <= 1/2 is needed so the image's lambda = kappa + 1/2 stays <= 1;
    // the constructor would catch it, but name the cause.
    if (p.kappa > kHalf)
        throw InvalidExponentPair("B requires kappa <= 1/2, got " + p.str());
    return ExponentPair(p.lambda - kHalf, p.kappa + kHalf, p.lambda - p.kappa + p.nu);
}

bool is_admissible(const ExponentPair& p) {
    const Rational d = p.nu - p.kappa;
    return d >= kZero && d < kOne;
}

Rational theta_budget(const ExponentPair& p) {
    const Rational den = 1 - p.kappa + p.lambda;
    if (den == kZero)
        throw DegenerateDenominator("degenerate budget denominator at " + p.str());
    return (1 - p.kappa) / den;
}

std::optional<Rational> proportion_sup(const ExponentPair& p) {
    if (!is_admissible(p)) return std::nullopt;
    const Rational theta = theta_budget(p);
    if (theta <= kHalf) return std::nullopt;
    return theta / (1 + theta);
}

Word Word::parse(std::string_view text) {
    Word w;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == text.size()) break;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        const std::string_view tok = text.substr(i, j - i);
        i = j;
        const char letter = tok[0];
        if (letter != 'A' && letter != 'B')
            throw UsageError("bad word token '" + std::string(tok) + "'");
        std::size_t count = 1;
        if (tok.size() > 1) {
            if (tok[1] != '^' || tok.size() < 3)
                throw UsageError("bad word token '" + std::string(tok) + "'");
            count = 0;
            for (std::size_t t = 2; t < tok.size(); ++t) {
                if (!std::isdigit(static_cast<unsigned char>(tok[t])))
                    throw UsageError("bad word token '" + std::string(tok) + "'");
                count = count * 10 + static_cast<std::size_t>(tok[t] - '0');
                if (count > 1000) throw UsageError("run too long in '" + std::string(tok) + "'");
            }
            if (count == 0) throw UsageError("zero run in '" + std::string(tok) + "'");
        }
        w.letters.insert(w.letters.end(), count, letter);
    }
    if (w.letters.empty()) throw UsageError("empty word");
    return w;
}

std::size_t Word::runs() const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < letters.size(); ++i)
        if (i == 0 || letters[i] != letters[i - 1]) ++r;
    return r;
}

std::string Word::text() const {
    std::string out;
    std::size_t i = 0;
    while (i < letters.size()) {
        std::size_t j = i;
        while (j < letters.size() && letters[j] == letters[i]) ++j;
        if (!out.empty()) out += ' ';
        out += letters[i];
        if (j - i > 1) out += "^" + std::to_string(j - i);
        i = j;
    }
    return out;
}

ExponentPair eval_word(const Word& w, const ExponentPair& start) {
    ExponentPair cur = start;
    // Rightmost letter first.
    for (std::size_t done = 0; done < w.letters.size(); ++done) {
        const std::size_t idx = w.letters.size() - 1 - done;
        const char letter = w.letters[idx];
        try {
            cur = (letter == 'A') ? apply_A(cur) : apply_B(cur);
        } catch (const InvalidExponentPair& e) {
            Word prefix;
            prefix.letters.assign(w.letters.begin() + idx, w.letters.end());
            throw InvalidExponentPair(std::string("word failed at suffix '") + prefix.text() +
                                      "' (rightmost-first): " + e.what());
        }
    }
    return cur;
}

namespace {

struct TripleLess {
    bool operator()(const ExponentPair& a, const ExponentPair& b) const {
        if (a.kappa != b.kappa) return a.kappa < b.kappa;
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        return a.nu < b.nu;
    }
};

struct BestInfo {
    unsigned runs = 0;
    unsigned elem = 0;
    std::vector<char> word; // display order
    bool better_than(const BestInfo& o) const {
        return std::tie(runs, elem, word) < std::tie(o.runs, o.elem, o.word);
    }
};

struct FrontierKey {
    ExponentPair pair;
    char last;
    unsigned used;
};

struct FrontierLess {
    TripleLess tl;
    bool operator()(const FrontierKey& a, const FrontierKey& b) const {
        if (tl(a.pair, b.pair)) return true;
        if (tl(b.pair, a.pair)) return false;
        return std::tie(a.last, a.used) < std::tie(b.last, b.used);
    }
};

constexpr unsigned kElementaryCap = 20;

} // namespace

SearchResult search_words(unsigned max_steps, const ExponentPair& start) {
    std::map<ExponentPair, BestInfo, TripleLess> best;
    best.emplace(start, BestInfo{});

    std::map<FrontierKey, std::vector<char>, FrontierLess> frontier;
    frontier.emplace(FrontierKey{start, '\0', 0}, std::vector<char>{});

    for (unsigned depth = 1; depth <= max_steps; ++depth) {
        std::map<FrontierKey, std::vector<char>, FrontierLess> next;
        for (const auto& [key, word] : frontier) {
            for (const char letter : {'A', 'B'}) {
                if (letter == key.last) continue;
                ExponentPair cur = key.pair;
                unsigned k = 0;
                while (key.used + k < kElementaryCap) {
                    try {
                        cur = (letter == 'A') ? apply_A(cur) : apply_B(cur);
                    } catch (const InvalidExponentPair&) {
                        break;
                    }
                    ++k;
                    std::vector<char> word2(k, letter);
                    word2.insert(word2.end(), word.begin(), word.end());
                    BestInfo cand{depth, key.used + k, word2};

                    auto [it, inserted] =
                        next.try_emplace(FrontierKey{cur, letter, key.used + k}, word2);
                    if (!inserted && word2 < it->second) it->second = std::move(word2);

                    auto [bit, fresh] = best.try_emplace(cur, cand);
                    if (!fresh && cand.better_than(bit->second)) bit->second = std::move(cand);
                }
            }
        }
        frontier.swap(next);
    }

    SearchResult out;
    out.distinct_pairs = best.size();
    for (const auto& [pair, info] : best) {
        const auto prop = proportion_sup(pair);
        if (!prop) continue;
        Word w;
        w.letters = info.word;
        out.ranked.push_back(SearchEntry{std::move(w), pair, theta_budget(pair), *prop});
    }
    std::sort(out.ranked.begin(), out.ranked.end(), [](const SearchEntry& a, const SearchEntry& b) {
        if (a.budget != b.budget) return a.budget > b.budget;
        return a.word.letters < b.word.letters;
    });
    return out;
}

} // namespace nvlab
