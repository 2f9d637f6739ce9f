#ifndef FUSION_CORE_FEATURE_CACHE_HPP
#define FUSION_CORE_FEATURE_CACHE_HPP

#include <iosfwd>
#include <vector>

#include "core/features.hpp"

namespace fusion {

struct CachedFeature {
    int label = 0;
    int book = 0;
    int id = 0;
    std::vector<double> values;
};

struct FeatureCache {
    FeatureKind kind = FeatureKind::Raw;
    std::size_t dim = 0;
    std::vector<CachedFeature> records;
};

/// Cache format: header line
///   fusionbench-features v1 kind=<kind> dim=<d> n=<count>
/// then one record per sample. Text records are one line
///   label,book,id,v0,...,v{d-1}
/// with values printed round-trip exact. In the binary variant each record
/// is the "label,book,id" line followed by d little-endian 64-bit floats.
void write_feature_cache(std::ostream& out, const FeatureCache& cache, bool binary = false);

FeatureCache read_feature_cache(std::istream& in);

} // namespace fusion

#endif
