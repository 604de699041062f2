#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "termwork/corpus.hpp"

namespace termwork {

struct DedupConfig {
    std::size_t shingle_len = 5;
    double threshold = 0.9;
};

struct DuplicatePair {
    std::string kept_id;
    std::string removed_id;
    double similarity = 0.0;
};

struct DedupReport {
    std::size_t docs_in = 0;
    std::size_t docs_kept = 0;
    std::size_t paragraphs_removed = 0;
    /// Documents dropped because every paragraph was a repeat of earlier text.
    std::size_t docs_emptied = 0;
    std::vector<DuplicatePair> duplicate_pairs;

    nlohmann::json to_json() const;
};

struct DedupResult {
    std::vector<Document> kept;
    DedupReport report;
};

/// Sorted, unique 64-bit hashes of every `k`-token window. Sequences shorter
/// than `k` yield a single shingle covering the whole sequence.
std::vector<std::uint64_t> shingle_hashes(std::span<const std::string> tokens, std::size_t k);

/// Jaccard similarity of two sorted unique hash sets; 0 when both are empty.
double jaccard(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// Document pass (exact duplicates, then shingle Jaccard >= threshold against
/// earlier kept documents) followed by a paragraph pass that drops good
/// paragraphs whose shingles all occur in earlier kept text. Both passes
/// repeat until nothing changes. Throws Error("invalid_argument") for
/// shingle_len == 0 or threshold outside (0, 1].
DedupResult dedup(const std::vector<Document>& documents, const DedupConfig& config = {});

}  // namespace termwork
