#include "termwork/term_extraction.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <thread>

#include "termwork/text.hpp"

namespace termwork {

namespace {

void extract_range(const CorpusIndex& index, const TermGrammar& grammar, std::size_t first,
                   std::size_t last, std::map<std::string, std::uint64_t>& counts) {
    const auto& docs = index.documents();
    for (std::size_t d = first; d < last; ++d) {
        const auto& doc = docs[d];
        const std::span<const Token> all(doc.tokens);
        for (std::uint32_t p = 0; p < doc.paragraph_starts.size(); ++p) {
            const auto [begin, end] = doc.paragraph_range(p);
            const auto para = all.subspan(begin, end - begin);
            for (const auto& rule : grammar.rules) {
                for (const Span& s : find_matches(rule, para)) {
                    std::string phrase;
                    for (std::size_t i = s.begin; i < s.end; ++i) {
                        if (i > s.begin) phrase.push_back(' ');
                        phrase += para[i].normalized;
                    }
                    ++counts[phrase];
                }
            }
        }
    }
}

double parse_double(const std::string& s) { return std::stod(s); }

}  // namespace

PhraseTable extract_candidates(const CorpusIndex& index, const TermGrammar& grammar, unsigned threads) {
    PhraseTable table;
    table.corpus_size = index.token_count();
    const std::size_t n = index.doc_count();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        extract_range(index, grammar, 0, n, table.counts);
        return table;
    }
    std::vector<std::map<std::string, std::uint64_t>> partial(threads);
    {
        std::vector<std::jthread> workers;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t first = std::min(n, t * chunk);
            const std::size_t last = std::min(n, first + chunk);
            workers.emplace_back([&, first, last, t] { extract_range(index, grammar, first, last, partial[t]); });
        }
    }
    for (const auto& part : partial) {
        for (const auto& [phrase, c] : part) table.counts[phrase] += c;
    }
    return table;
}

SimpleMath::SimpleMath(double n) : n_(n) {
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw Error("invalid_argument", "simple math parameter n must be positive");
    }
}

double per_million(std::uint64_t count, std::uint64_t corpus_size) {
    return static_cast<double>(count) * 1e6 / static_cast<double>(corpus_size);
}

double term_rank(double f, double f_ref, SimpleMath n) { return (f + n.value()) / (f_ref + n.value()); }

std::vector<TermCandidate> rank_terms(const PhraseTable& domain, const PhraseTable& reference,
                                      const RankOptions& options) {
    if (domain.corpus_size == 0 || reference.corpus_size == 0) {
        throw Error("invalid_argument", "corpus sizes must be positive");
    }
    std::vector<TermCandidate> out;
    for (const auto& [phrase, count] : domain.counts) {
        if (count < options.min_count) continue;
        TermCandidate c;
        c.phrase = phrase;
        c.raw_count = count;
        c.f = per_million(count, domain.corpus_size);
        const auto ref = reference.counts.find(phrase);
        c.f_ref = ref == reference.counts.end() ? 0.0 : per_million(ref->second, reference.corpus_size);
        c.rank = term_rank(c.f, c.f_ref, options.n);
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const TermCandidate& a, const TermCandidate& b) {
        if (a.rank != b.rank) return a.rank > b.rank;
        if (a.raw_count != b.raw_count) return a.raw_count > b.raw_count;
        return a.phrase < b.phrase;
    });
    return out;
}

void write_phrase_table(std::ostream& out, const PhraseTable& table) {
    out << "# corpus_size\t" << table.corpus_size << '\n';
    for (const auto& [phrase, count] : table.counts) out << phrase << '\t' << count << '\n';
}

PhraseTable read_phrase_table(std::istream& in) {
    PhraseTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = text::split(line, '\t');
        if (line.rfind("# corpus_size", 0) == 0 && fields.size() == 2) {
            t.corpus_size = std::stoull(fields[1]);
            continue;
        }
        if (line[0] == '#') continue;
        if (fields.size() != 2) {
            throw Error("table_syntax", "phrase table line " + std::to_string(lineno) + ": expected 2 fields");
        }
        t.counts[fields[0]] += std::stoull(fields[1]);
    }
    return t;
}

void write_ranked_terms(std::ostream& out, const std::vector<TermCandidate>& terms) {
    out << "phrase\traw_count\tf\tf_ref\trank\n";
    for (const auto& c : terms) {
        out << c.phrase << '\t' << c.raw_count << '\t' << text::format_double(c.f) << '\t'
            << text::format_double(c.f_ref) << '\t' << text::format_double(c.rank) << '\n';
    }
}

std::vector<TermCandidate> read_ranked_terms(std::istream& in) {
    std::vector<TermCandidate> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (lineno == 1 && line.rfind("phrase\t", 0) == 0)) continue;
        const auto f = text::split(line, '\t');
        if (f.size() != 5) {
            throw Error("table_syntax", "ranked terms line " + std::to_string(lineno) + ": expected 5 fields");
        }
        out.push_back({f[0], std::stoull(f[1]), parse_double(f[2]), parse_double(f[3]), parse_double(f[4])});
    }
    return out;
}

}  // namespace termwork
