#include "core/feature_cache.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "core/error.hpp"

namespace fusion {

namespace {

const char* kMagic = "fusionbench-features";

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void store_le64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

double load_le64(std::istream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    if (!in) raise(ErrorCode::DataError, "feature cache: truncated binary record");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

} // namespace

void write_feature_cache(std::ostream& out, const FeatureCache& cache, bool binary) {
    out << kMagic << " v1 kind=" << feature_kind_name(cache.kind) << " dim=" << cache.dim
        << " n=" << cache.records.size() << "\n";
    for (const CachedFeature& rec : cache.records) {
        if (rec.values.size() != cache.dim)
            raise(ErrorCode::DimensionMismatch, "feature cache: record dim mismatch");
        out << rec.label << "," << rec.book << "," << rec.id;
        if (binary) {
            out << "\n";
            for (double v : rec.values) store_le64(out, v);
        } else {
            for (double v : rec.values) out << "," << format_double(v);
            out << "\n";
        }
    }
}

FeatureCache read_feature_cache(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) raise(ErrorCode::DataError, "feature cache: empty stream");
    std::istringstream hs(header);
    std::string magic, version, kind_kv, dim_kv, n_kv;
    hs >> magic >> version >> kind_kv >> dim_kv >> n_kv;
    if (magic != kMagic || version != "v1" || kind_kv.rfind("kind=", 0) != 0 ||
        dim_kv.rfind("dim=", 0) != 0 || n_kv.rfind("n=", 0) != 0)
        raise(ErrorCode::DataError, "feature cache: bad header: " + header);

    FeatureCache cache;
    cache.kind = feature_kind_from_name(kind_kv.substr(5));
    cache.dim = std::stoul(dim_kv.substr(4));
    const std::size_t n = std::stoul(n_kv.substr(2));

    for (std::size_t r = 0; r < n; ++r) {
        std::string line;
        if (!std::getline(in, line)) raise(ErrorCode::DataError, "feature cache: missing record");
        CachedFeature rec;
        std::size_t pos = 0;
        auto next_field = [&](bool require_more) {
            std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) {
                if (require_more) raise(ErrorCode::DataError, "feature cache: short record");
                std::string f = line.substr(pos);
                pos = line.size();
                return f;
            }
            std::string f = line.substr(pos, comma - pos);
            pos = comma + 1;
            return f;
        };
        rec.label = std::stoi(next_field(true));
        rec.book = std::stoi(next_field(true));
        const bool binary_record = line.find(',', pos) == std::string::npos && cache.dim > 0;
        rec.id = std::stoi(next_field(false));
        if (binary_record && pos >= line.size()) {
            rec.values.reserve(cache.dim);
            for (std::size_t i = 0; i < cache.dim; ++i) rec.values.push_back(load_le64(in));
        } else {
            rec.values.reserve(cache.dim);
            while (pos < line.size()) rec.values.push_back(std::stod(next_field(false)));
        }
        if (rec.values.size() != cache.dim)
            raise(ErrorCode::DataError, "feature cache: record dim mismatch");
        cache.records.push_back(std::move(rec));
    }
    return cache;
}

} // namespace fusion
