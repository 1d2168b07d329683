#ifndef CIRCLELAB_CACHE_HPP
#define CIRCLELAB_CACHE_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "circlelab/lattice.hpp"

namespace circlelab::cache {

// Representation-table cache files: cache/rep_k{K}_d{D}_L{LMAX}.bin with a
// 16-byte header  magic "CLRT" | version u16 | k u16 | d u32 | lambda_max u32
// followed by, per lambda, a u32 limb count and little-endian u32 limbs, and
// a trailing FNV-1a-64 checksum over the payload. Corrupt files are renamed
// to .bad and recomputed, never silently used.
struct CacheConfig {
    std::string dir;       // empty disables caching
    bool warned = false;   // set after the first unwritable-dir warning
};

std::string rep_cache_path(const CacheConfig& cfg, int k, int d, std::int64_t lambda_max);

std::optional<lattice::RepresentationTable> load_rep_table(CacheConfig& cfg, int k, int d,
                                                           std::int64_t lambda_max);
void store_rep_table(CacheConfig& cfg, const lattice::RepresentationTable& table);

// lookup-or-compute with quarantine on checksum mismatch
lattice::RepresentationTable rep_table_cached(CacheConfig& cfg, const FormParams& params,
                                              std::int64_t lambda_max,
                                              const Parallelism& par = {});

// Gauss-sum tables G(q; a, 0) for all reduced a/q with q <= q_max, cached as
// gauss_k{K}_q{QMAX}.bin with the same header/checksum layout (magic "CLGT",
// the d field unused, the bound field holding q_max).
struct GaussTable {
    int k = 0;
    std::int64_t q_max = 0;
    struct Entry {
        std::uint32_t q, a;
        std::complex<double> value;
    };
    std::vector<Entry> entries;  // ordered by (q, a)
};

std::string gauss_cache_path(const CacheConfig& cfg, int k, std::int64_t q_max);
std::optional<GaussTable> load_gauss_table(CacheConfig& cfg, int k, std::int64_t q_max);
void store_gauss_table(CacheConfig& cfg, const GaussTable& table);
GaussTable gauss_table_cached(CacheConfig& cfg, int k, std::int64_t q_max);

}

#endif
