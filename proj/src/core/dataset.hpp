#ifndef FUSION_CORE_DATASET_HPP
#define FUSION_CORE_DATASET_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "core/image.hpp"

namespace fusion {

inline constexpr int kBookCount = 4;
inline constexpr int kSamplesPerClass = 25; // 15 train + 5 test + 5 validation
inline constexpr int kTrainPerClass = 15;
inline constexpr int kTestPerClass = 5;
inline constexpr int kValidationPerClass = 5;
inline constexpr int kPerBookCap = 6; // every non-final book contributes at most 6

struct ManifestRecord {
    std::string path;
    int label = 0;      // class label
    int book = 1;       // 1..4
    bool invert = false; // ink is light-on-dark in the stored image
};

/// Text manifest, one record per line: path,label,book[,invert].
/// '#' starts a comment. Paths must be unique.
struct CorpusManifest {
    std::vector<ManifestRecord> records; // record id = index
};

CorpusManifest load_manifest(std::istream& in);
CorpusManifest load_manifest_file(const std::string& path); // resolves relative image paths
void save_manifest(std::ostream& out, const CorpusManifest& manifest);

/// Manifest plus the decoded 32x32 glyphs, indexed like the records.
struct Corpus {
    CorpusManifest manifest;
    std::vector<BinaryImage> images;
};

/// Read, binarize and resize every manifest image.
Corpus load_corpus(const CorpusManifest& manifest, int binarize_threshold = 128);

/// Sorted class labels whose total sample count reaches min_samples.
std::vector<int> eligible_classes(const CorpusManifest& manifest, int min_samples = 25);

/// The book-balancing rule: walk books in ascending count order (ties by
/// book index); every non-final book contributes min(count, 6, remaining);
/// the final book contributes whatever is left of the quota. Throws
/// InsufficientSamples when the final take exceeds that book's count.
std::array<int, kBookCount> book_balanced_selection(const std::array<int, kBookCount>& per_book_counts,
                                                    int quota = kSamplesPerClass);

struct ClassPlan {
    int label = 0;
    std::array<int, kBookCount> take{}; // samples per book
};

/// Eligible classes with their per-book takes.
std::vector<ClassPlan> plan_selection(const CorpusManifest& manifest, int min_samples = 25,
                                      int quota = kSamplesPerClass);

struct SplitEntry {
    int label = 0;
    int book = 0;
    int id = 0; // manifest record index
};

struct SplitPlan {
    std::vector<SplitEntry> train;
    std::vector<SplitEntry> test;
    std::vector<SplitEntry> validation;
};

/// Uniform without-replacement selection per (class, book), then a seeded
/// shuffle of each class's 25 samples: first 15 train, next 5 test, last
/// 5 validation. Deterministic for a fixed manifest and seed.
SplitPlan draw_samples(const CorpusManifest& manifest, const std::vector<ClassPlan>& plans,
                       std::uint64_t seed);

/// Text sections TRAIN/TEST/VALIDATION listing label,book,id,path.
void save_split_plan(std::ostream& out, const SplitPlan& plan, const CorpusManifest& manifest);

/// Synthetic stand-in for the unavailable scans: per class a random stroke
/// prototype, samples are the prototype with i.i.d. pixel flips. Books are
/// assigned round-robin so the book balancer has work to do.
Corpus synth_corpus(int classes, int per_class, double noise, std::uint64_t seed);

/// Write a synthetic corpus to disk as PGM files plus a manifest at
/// manifest_path; image paths are stored relative to the manifest.
void write_synth_corpus(const Corpus& corpus, const std::string& manifest_path);

} // namespace fusion

#endif
