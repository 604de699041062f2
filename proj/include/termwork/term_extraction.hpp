#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "termwork/corpus.hpp"
#include "termwork/term_grammar.hpp"

namespace termwork {

/// Absolute phrase counts plus the size (in tokens) of the corpus they came from.
struct PhraseTable {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t corpus_size = 0;

    bool operator==(const PhraseTable&) const = default;
};

/// Counts every leftmost-longest non-overlapping match of each rule inside
/// each paragraph. Rules are independent: a span may be counted by several.
/// `threads` > 1 splits the documents across workers.
PhraseTable extract_candidates(const CorpusIndex& index, const TermGrammar& grammar,
                               unsigned threads = 1);

/// Smoothing constant of the rank ratio; must be positive.
class SimpleMath {
public:
    explicit SimpleMath(double n = 1.0);
    double value() const { return n_; }

private:
    double n_;
};

struct TermCandidate {
    std::string phrase;
    std::uint64_t raw_count = 0;
    double f = 0.0;      // per million tokens, domain corpus
    double f_ref = 0.0;  // per million tokens, reference corpus
    double rank = 0.0;
};

double per_million(std::uint64_t count, std::uint64_t corpus_size);

/// (f + n) / (f_ref + n)
double term_rank(double f, double f_ref, SimpleMath n);

struct RankOptions {
    SimpleMath n{1.0};
    std::uint64_t min_count = 2;
};

/// Ranks every domain phrase with raw_count >= min_count, descending by rank,
/// then raw_count, then phrase. Throws Error("invalid_argument") when a
/// corpus size is zero.
std::vector<TermCandidate> rank_terms(const PhraseTable& domain, const PhraseTable& reference,
                                      const RankOptions& options = {});

/// `# corpus_size<TAB>N` header, then `phrase<TAB>count` lines.
void write_phrase_table(std::ostream& out, const PhraseTable& table);
PhraseTable read_phrase_table(std::istream& in);

/// `phrase<TAB>raw_count<TAB>f<TAB>f_ref<TAB>rank` with a header line.
void write_ranked_terms(std::ostream& out, const std::vector<TermCandidate>& terms);
std::vector<TermCandidate> read_ranked_terms(std::istream& in);

}  // namespace termwork
