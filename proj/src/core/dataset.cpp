#include "core/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/image_io.hpp"
#include "core/rng.hpp"

namespace fusion {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (;;) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            fields.push_back(trim(line.substr(pos)));
            return fields;
        }
        fields.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
}

} // namespace

CorpusManifest load_manifest(std::istream& in) {
    CorpusManifest manifest;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() < 3 || fields.size() > 4)
            raise(ErrorCode::DataError,
                  "manifest line " + std::to_string(line_no) + ": expected path,label,book[,invert]");
        ManifestRecord rec;
        rec.path = fields[0];
        try {
            rec.label = std::stoi(fields[1]);
            rec.book = std::stoi(fields[2]);
        } catch (const std::exception&) {
            raise(ErrorCode::DataError, "manifest line " + std::to_string(line_no) + ": bad number");
        }
        if (rec.label < 0)
            raise(ErrorCode::DataError, "manifest line " + std::to_string(line_no) + ": negative label");
        if (rec.book < 1 || rec.book > kBookCount)
            raise(ErrorCode::DataError,
                  "manifest line " + std::to_string(line_no) + ": book must be 1.." +
                      std::to_string(kBookCount));
        if (fields.size() == 4) {
            if (fields[3] == "invert" || fields[3] == "1" || fields[3] == "true")
                rec.invert = true;
            else if (fields[3] == "0" || fields[3] == "false" || fields[3].empty())
                rec.invert = false;
            else
                raise(ErrorCode::DataError,
                      "manifest line " + std::to_string(line_no) + ": bad invert flag");
        }
        if (!seen.insert(rec.path).second)
            raise(ErrorCode::DataError, "manifest: duplicate path " + rec.path);
        manifest.records.push_back(std::move(rec));
    }
    return manifest;
}

CorpusManifest load_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoError, "cannot open manifest: " + path);
    CorpusManifest manifest = load_manifest(in);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    for (ManifestRecord& rec : manifest.records) {
        std::filesystem::path p(rec.path);
        if (p.is_relative()) rec.path = (base / p).string();
    }
    return manifest;
}

void save_manifest(std::ostream& out, const CorpusManifest& manifest) {
    for (const ManifestRecord& rec : manifest.records) {
        out << rec.path << "," << rec.label << "," << rec.book;
        if (rec.invert) out << ",invert";
        out << "\n";
    }
}

Corpus load_corpus(const CorpusManifest& manifest, int binarize_threshold) {
    Corpus corpus;
    corpus.manifest = manifest;
    corpus.images.reserve(manifest.records.size());
    for (const ManifestRecord& rec : manifest.records) {
        GrayImage gray = load_gray_image(rec.path);
        if (rec.invert)
            for (std::uint8_t& px : gray.pixels) px = static_cast<std::uint8_t>(255 - px);
        corpus.images.push_back(resize_to_canonical(gray, binarize_threshold));
    }
    return corpus;
}

std::vector<int> eligible_classes(const CorpusManifest& manifest, int min_samples) {
    std::map<int, int> counts;
    for (const ManifestRecord& rec : manifest.records) ++counts[rec.label];
    std::vector<int> classes;
    for (const auto& [label, count] : counts)
        if (count >= min_samples) classes.push_back(label);
    return classes; // map iteration is already sorted
}

std::array<int, kBookCount> book_balanced_selection(const std::array<int, kBookCount>& per_book_counts,
                                                    int quota) {
    const long long total =
        std::accumulate(per_book_counts.begin(), per_book_counts.end(), 0LL);
    if (total < quota)
        raise(ErrorCode::InsufficientSamples, "book_balanced_selection: counts below quota");

    // Books in ascending count order, ties by book index.
    std::array<int, kBookCount> order{};
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return per_book_counts[static_cast<std::size_t>(a)] <
                                                per_book_counts[static_cast<std::size_t>(b)]; });

    std::array<int, kBookCount> take{};
    int remaining = quota;
    for (int i = 0; i < kBookCount - 1; ++i) {
        const int b = order[static_cast<std::size_t>(i)];
        const int t = std::min({per_book_counts[static_cast<std::size_t>(b)], kPerBookCap, remaining});
        take[static_cast<std::size_t>(b)] = t;
        remaining -= t;
    }
    const int last = order[kBookCount - 1];
    if (remaining > per_book_counts[static_cast<std::size_t>(last)])
        raise(ErrorCode::InsufficientSamples,
              "book_balanced_selection: final book cannot cover the quota");
    take[static_cast<std::size_t>(last)] = remaining;
    return take;
}

std::vector<ClassPlan> plan_selection(const CorpusManifest& manifest, int min_samples, int quota) {
    std::vector<ClassPlan> plans;
    for (int label : eligible_classes(manifest, min_samples)) {
        std::array<int, kBookCount> counts{};
        for (const ManifestRecord& rec : manifest.records)
            if (rec.label == label) ++counts[static_cast<std::size_t>(rec.book - 1)];
        ClassPlan plan;
        plan.label = label;
        plan.take = book_balanced_selection(counts, quota);
        plans.push_back(plan);
    }
    return plans;
}

SplitPlan draw_samples(const CorpusManifest& manifest, const std::vector<ClassPlan>& plans,
                       std::uint64_t seed) {
    Rng rng(seed);
    SplitPlan split;
    for (const ClassPlan& plan : plans) {
        std::vector<SplitEntry> chosen;
        for (int book = 1; book <= kBookCount; ++book) {
            const int want = plan.take[static_cast<std::size_t>(book - 1)];
            if (want == 0) continue;
            std::vector<int> pool;
            for (std::size_t id = 0; id < manifest.records.size(); ++id)
                if (manifest.records[id].label == plan.label && manifest.records[id].book == book)
                    pool.push_back(static_cast<int>(id));
            if (static_cast<int>(pool.size()) < want)
                raise(ErrorCode::InsufficientSamples, "draw_samples: pool smaller than plan");
            // Partial Fisher-Yates: the first `want` slots are a uniform
            // without-replacement selection.
            for (int i = 0; i < want; ++i) {
                const std::size_t j =
                    i + static_cast<std::size_t>(rng.uniform_int(pool.size() - static_cast<std::size_t>(i)));
                std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
                chosen.push_back({plan.label, book, pool[static_cast<std::size_t>(i)]});
            }
        }
        rng.shuffle(chosen);
        const int total = static_cast<int>(chosen.size());
        if (total != kSamplesPerClass)
            raise(ErrorCode::InsufficientSamples, "draw_samples: class quota not met");
        for (int i = 0; i < total; ++i) {
            if (i < kTrainPerClass)
                split.train.push_back(chosen[static_cast<std::size_t>(i)]);
            else if (i < kTrainPerClass + kTestPerClass)
                split.test.push_back(chosen[static_cast<std::size_t>(i)]);
            else
                split.validation.push_back(chosen[static_cast<std::size_t>(i)]);
        }
    }
    return split;
}

void save_split_plan(std::ostream& out, const SplitPlan& plan, const CorpusManifest& manifest) {
    const auto dump = [&](const char* name, const std::vector<SplitEntry>& entries) {
        out << name << "\n";
        for (const SplitEntry& e : entries)
            out << e.label << "," << e.book << "," << e.id << ","
                << manifest.records[static_cast<std::size_t>(e.id)].path << "\n";
    };
    dump("TRAIN", plan.train);
    dump("TEST", plan.test);
    dump("VALIDATION", plan.validation);
}

namespace {

BinaryImage random_glyph(Rng& rng) {
    BinaryImage glyph;
    const int strokes = 6 + static_cast<int>(rng.uniform_int(7)); // 6..12 strokes
    for (int s = 0; s < strokes; ++s) {
        const Point a{static_cast<int>(rng.uniform_int(BinaryImage::side)),
                      static_cast<int>(rng.uniform_int(BinaryImage::side))};
        const Point b{static_cast<int>(rng.uniform_int(BinaryImage::side)),
                      static_cast<int>(rng.uniform_int(BinaryImage::side))};
        for (const Point& p : bresenham_line(a, b)) glyph.at(p.x, p.y) = 1;
    }
    return glyph;
}

} // namespace

Corpus synth_corpus(int classes, int per_class, double noise, std::uint64_t seed) {
    if (classes < 2) raise(ErrorCode::ConfigError, "synth_corpus: need at least 2 classes");
    if (per_class < kSamplesPerClass)
        raise(ErrorCode::ConfigError, "synth_corpus: per_class must be >= 25 for eligibility");
    if (noise < 0.0 || noise > 1.0)
        raise(ErrorCode::ConfigError, "synth_corpus: noise must be in [0, 1]");

    Rng rng(seed);
    Corpus corpus;
    int id = 0;
    for (int c = 0; c < classes; ++c) {
        const BinaryImage prototype = random_glyph(rng);
        for (int i = 0; i < per_class; ++i, ++id) {
            BinaryImage sample = prototype;
            for (std::uint8_t& px : sample.pixels)
                if (rng.bernoulli(noise)) px = px ? 0 : 1;
            ManifestRecord rec;
            rec.path = "synth://class" + std::to_string(c) + "/sample" + std::to_string(i);
            rec.label = c;
            rec.book = 1 + (i % kBookCount);
            corpus.manifest.records.push_back(std::move(rec));
            corpus.images.push_back(std::move(sample));
        }
    }
    return corpus;
}

void write_synth_corpus(const Corpus& corpus, const std::string& manifest_path) {
    namespace fs = std::filesystem;
    const fs::path manifest_file(manifest_path);
    const fs::path base = manifest_file.parent_path();
    const fs::path image_dir = base / "images";
    std::error_code ec;
    fs::create_directories(image_dir.empty() ? fs::path("images") : image_dir, ec);
    if (ec) raise(ErrorCode::IoError, "cannot create image directory: " + image_dir.string());

    CorpusManifest relative;
    for (std::size_t i = 0; i < corpus.images.size(); ++i) {
        const ManifestRecord& rec = corpus.manifest.records[i];
        const std::string name = "c" + std::to_string(rec.label) + "_b" + std::to_string(rec.book) +
                                 "_" + std::to_string(i) + ".pgm";
        write_pgm((image_dir / name).string(), corpus.images[i]);
        ManifestRecord out = rec;
        out.path = (fs::path("images") / name).string();
        relative.records.push_back(std::move(out));
    }
    std::ofstream out(manifest_path);
    if (!out) raise(ErrorCode::IoError, "cannot write manifest: " + manifest_path);
    save_manifest(out, relative);
}

} // namespace fusion
