#include "circlelab/cache.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <vector>

#include "circlelab/expsum.hpp"

namespace circlelab::cache {

namespace fs = std::filesystem;

namespace {

constexpr char magic[4] = {'C', 'L', 'R', 'T'};
constexpr std::uint16_t format_version = 1;

void put_u16(std::string& out, std::uint16_t v) {
    out += char(v & 0xff);
    out += char((v >> 8) & 0xff);
}
void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out += char((v >> (8 * i)) & 0xff);
}
void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += char((v >> (8 * i)) & 0xff);
}

std::uint64_t fnv1a(const char* data, std::size_t len) {
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ull;
    }
    return h;
}

struct Reader {
    const char* p;
    const char* end;
    bool ok = true;
    std::uint16_t u16() {
        if (end - p < 2) { ok = false; return 0; }
        std::uint16_t v = std::uint16_t(static_cast<unsigned char>(p[0])) |
                          std::uint16_t(static_cast<unsigned char>(p[1])) << 8;
        p += 2;
        return v;
    }
    std::uint32_t u32() {
        if (end - p < 4) { ok = false; return 0; }
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(p[i])) << (8 * i);
        p += 4;
        return v;
    }
    std::uint64_t u64() {
        if (end - p < 8) { ok = false; return 0; }
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(p[i])) << (8 * i);
        p += 8;
        return v;
    }
};

void quarantine(const std::string& path) {
    std::error_code ec;
    fs::remove(path + ".bad", ec);
    fs::rename(path, path + ".bad", ec);
    std::cerr << "circlelab: quarantined corrupt cache file " << path << "\n";
}

}  // namespace

std::string rep_cache_path(const CacheConfig& cfg, int k, int d, std::int64_t lambda_max) {
    return cfg.dir + "/rep_k" + std::to_string(k) + "_d" + std::to_string(d) + "_L" +
           std::to_string(lambda_max) + ".bin";
}

std::optional<lattice::RepresentationTable> load_rep_table(CacheConfig& cfg, int k, int d,
                                                           std::int64_t lambda_max) {
    if (cfg.dir.empty()) return std::nullopt;
    std::string path = rep_cache_path(cfg, k, d, lambda_max);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (blob.size() < 24) { quarantine(path); return std::nullopt; }
    if (std::memcmp(blob.data(), magic, 4) != 0) { quarantine(path); return std::nullopt; }
    Reader r{blob.data() + 4, blob.data() + blob.size()};
    std::uint16_t ver = r.u16();
    std::uint16_t fk = r.u16();
    std::uint32_t fd = r.u32();
    std::uint32_t fl = r.u32();
    if (!r.ok || ver != format_version || fk != static_cast<std::uint16_t>(k) ||
        fd != static_cast<std::uint32_t>(d) || fl != static_cast<std::uint32_t>(lambda_max)) {
        quarantine(path);
        return std::nullopt;
    }
    // payload is everything between the header and the trailing checksum
    std::size_t payload_len = blob.size() - 16 - 8;
    std::uint64_t want = fnv1a(blob.data() + 16, payload_len);
    Reader tail{blob.data() + 16 + payload_len, blob.data() + blob.size()};
    std::uint64_t got = tail.u64();
    if (!tail.ok || want != got) { quarantine(path); return std::nullopt; }

    lattice::RepresentationTable table;
    table.params = FormParams{k, d};
    table.lambda_max = lambda_max;
    table.counts.reserve(static_cast<std::size_t>(lambda_max) + 1);
    Reader body{blob.data() + 16, blob.data() + 16 + payload_len};
    for (std::int64_t l = 0; l <= lambda_max; ++l) {
        std::uint32_t n = body.u32();
        std::vector<std::uint32_t> limbs(n);
        for (std::uint32_t i = 0; i < n; ++i) limbs[i] = body.u32();
        if (!body.ok) { quarantine(path); return std::nullopt; }
        table.counts.push_back(BigInt::from_limbs(1, std::move(limbs)));
    }
    if (body.p != body.end) { quarantine(path); return std::nullopt; }
    return table;
}

void store_rep_table(CacheConfig& cfg, const lattice::RepresentationTable& table) {
    if (cfg.dir.empty()) return;
    std::error_code ec;
    fs::create_directories(cfg.dir, ec);
    std::string payload;
    for (const auto& c : table.counts) {
        const auto& limbs = c.limbs();
        put_u32(payload, static_cast<std::uint32_t>(limbs.size()));
        for (std::uint32_t limb : limbs) put_u32(payload, limb);
    }
    std::string blob;
    blob.append(magic, 4);
    put_u16(blob, format_version);
    put_u16(blob, static_cast<std::uint16_t>(table.params.k));
    put_u32(blob, static_cast<std::uint32_t>(table.params.d));
    put_u32(blob, static_cast<std::uint32_t>(table.lambda_max));
    blob += payload;
    put_u64(blob, fnv1a(payload.data(), payload.size()));

    std::string path = rep_cache_path(cfg, table.params.k, table.params.d, table.lambda_max);
    // temp + rename; concurrent writers each land a complete file
    std::random_device rd;
    std::string tmp = path + ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            if (!cfg.warned) {
                std::cerr << "circlelab: cache directory not writable, continuing without cache\n";
                cfg.warned = true;
            }
            return;
        }
        out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
        if (!out) { fs::remove(tmp, ec); return; }
    }
    fs::rename(tmp, path, ec);
    if (ec) fs::remove(tmp, ec);
}

lattice::RepresentationTable rep_table_cached(CacheConfig& cfg, const FormParams& params,
                                              std::int64_t lambda_max, const Parallelism& par) {
    if (auto hit = load_rep_table(cfg, params.k, params.d, lambda_max)) return std::move(*hit);
    auto table = lattice::count_representations(params, lambda_max, {}, par);
    store_rep_table(cfg, table);
    return table;
}

namespace {
constexpr char gauss_magic[4] = {'C', 'L', 'G', 'T'};

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

double get_f64(Reader& r) {
    std::uint64_t bits = r.u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}
}  // namespace

std::string gauss_cache_path(const CacheConfig& cfg, int k, std::int64_t q_max) {
    return cfg.dir + "/gauss_k" + std::to_string(k) + "_q" + std::to_string(q_max) + ".bin";
}

std::optional<GaussTable> load_gauss_table(CacheConfig& cfg, int k, std::int64_t q_max) {
    if (cfg.dir.empty()) return std::nullopt;
    std::string path = gauss_cache_path(cfg, k, q_max);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (blob.size() < 24 || std::memcmp(blob.data(), gauss_magic, 4) != 0) {
        quarantine(path);
        return std::nullopt;
    }
    Reader head{blob.data() + 4, blob.data() + blob.size()};
    std::uint16_t ver = head.u16();
    std::uint16_t fk = head.u16();
    std::uint32_t unused = head.u32();
    std::uint32_t fq = head.u32();
    (void)unused;
    if (!head.ok || ver != format_version || fk != static_cast<std::uint16_t>(k) ||
        fq != static_cast<std::uint32_t>(q_max)) {
        quarantine(path);
        return std::nullopt;
    }
    std::size_t payload_len = blob.size() - 16 - 8;
    Reader tail{blob.data() + 16 + payload_len, blob.data() + blob.size()};
    if (fnv1a(blob.data() + 16, payload_len) != tail.u64() || !tail.ok) {
        quarantine(path);
        return std::nullopt;
    }
    GaussTable table;
    table.k = k;
    table.q_max = q_max;
    Reader body{blob.data() + 16, blob.data() + 16 + payload_len};
    while (body.p < body.end) {
        GaussTable::Entry e;
        e.q = body.u32();
        e.a = body.u32();
        double re = get_f64(body);
        double im = get_f64(body);
        if (!body.ok) { quarantine(path); return std::nullopt; }
        e.value = {re, im};
        table.entries.push_back(e);
    }
    return table;
}

void store_gauss_table(CacheConfig& cfg, const GaussTable& table) {
    if (cfg.dir.empty()) return;
    std::error_code ec;
    fs::create_directories(cfg.dir, ec);
    std::string payload;
    for (const auto& e : table.entries) {
        put_u32(payload, e.q);
        put_u32(payload, e.a);
        put_f64(payload, e.value.real());
        put_f64(payload, e.value.imag());
    }
    std::string blob;
    blob.append(gauss_magic, 4);
    put_u16(blob, format_version);
    put_u16(blob, static_cast<std::uint16_t>(table.k));
    put_u32(blob, 0);
    put_u32(blob, static_cast<std::uint32_t>(table.q_max));
    blob += payload;
    put_u64(blob, fnv1a(payload.data(), payload.size()));
    std::string path = gauss_cache_path(cfg, table.k, table.q_max);
    std::random_device rd;
    std::string tmp = path + ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            if (!cfg.warned) {
                std::cerr << "circlelab: cache directory not writable, continuing without cache\n";
                cfg.warned = true;
            }
            return;
        }
        out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
        if (!out) { fs::remove(tmp, ec); return; }
    }
    fs::rename(tmp, path, ec);
    if (ec) fs::remove(tmp, ec);
}

GaussTable gauss_table_cached(CacheConfig& cfg, int k, std::int64_t q_max) {
    if (auto hit = load_gauss_table(cfg, k, q_max)) return std::move(*hit);
    GaussTable table;
    table.k = k;
    table.q_max = q_max;
    for (std::uint64_t q = 1; q <= static_cast<std::uint64_t>(q_max); ++q)
        for (std::uint64_t a = 1; a <= q; ++a) {
            std::uint64_t x = a, y = q;
            while (y) { std::uint64_t t = x % y; x = y; y = t; }
            if (x != 1) continue;
            table.entries.push_back({static_cast<std::uint32_t>(q),
                                     static_cast<std::uint32_t>(a % q),
                                     expsum::gauss_sum(q, a % q, 0, k).value});
        }
    store_gauss_table(cfg, table);
    return table;
}

}
