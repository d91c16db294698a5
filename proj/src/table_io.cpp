#include "krank/table_io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "krank/errors.hpp"

namespace krank {

namespace {

constexpr std::array<char, 4> kMagic{'P', 'T', 'A', 'B'};

template <typename UInt>
void put_le(std::string& out, UInt v) {
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

class Reader {
public:
    explicit Reader(std::string data) : data_(std::move(data)) {}

    template <typename UInt>
    UInt get_le(const char* what) {
        need(sizeof(UInt), what);
        UInt v = 0;
        for (std::size_t i = 0; i < sizeof(UInt); ++i) {
            v |= static_cast<UInt>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        }
        pos_ += sizeof(UInt);
        return v;
    }

    const unsigned char* take(std::size_t len, const char* what) {
        need(len, what);
        const auto* p = reinterpret_cast<const unsigned char*>(data_.data() + pos_);
        pos_ += len;
        return p;
    }

    bool at_end() const { return pos_ == data_.size(); }
    std::size_t remaining() const { return data_.size() - pos_; }

private:
    void need(std::size_t len, const char* what) const {
        if (data_.size() - pos_ < len) {
            throw CorruptFileError(std::string("table cache truncated while reading ") + what);
        }
    }

    std::string data_;
    std::size_t pos_ = 0;
};

}  // namespace

void save_table(const PartitionTable& table, const std::filesystem::path& path) {
    std::string out(kMagic.begin(), kMagic.end());
    put_le<std::uint32_t>(out, kTableFormatVersion);
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(table.max_n()));
    std::vector<unsigned char> buf;
    for (const mpz_class& v : table.values()) {
        const std::size_t len = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
        buf.assign(len, 0);
        std::size_t written = 0;
        if (v != 0) mpz_export(buf.data(), &written, -1, 1, -1, 0, v.get_mpz_t());
        put_le<std::uint32_t>(out, static_cast<std::uint32_t>(written));
        out.append(reinterpret_cast<const char*>(buf.data()), written);
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("save_table: cannot open " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("save_table: write failed for " + path.string());
}

std::vector<std::int64_t> spot_check_indices(std::int64_t max_n) {
    std::vector<std::int64_t> idx;
    if (max_n < 1) return idx;
    std::mt19937_64 rng(kSpotCheckSeed ^ static_cast<std::uint64_t>(max_n));
    std::uniform_int_distribution<std::int64_t> pick(1, max_n);
    for (int i = 0; i < kSpotCheckCount; ++i) idx.push_back(pick(rng));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

PartitionTable load_table(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_table: cannot open " + path.string());
    Reader in(std::string(std::istreambuf_iterator<char>(f), {}));

    const unsigned char* magic = in.take(kMagic.size(), "magic");
    if (!std::equal(kMagic.begin(), kMagic.end(), magic,
                    [](char a, unsigned char b) { return static_cast<unsigned char>(a) == b; })) {
        throw CorruptFileError("table cache has bad magic bytes");
    }
    const auto version = in.get_le<std::uint32_t>("version");
    if (version != kTableFormatVersion) {
        throw CorruptFileError("unsupported table cache version " + std::to_string(version));
    }
    const auto max_n = in.get_le<std::uint64_t>("max_n");
    // Each entry takes at least its 4-byte length prefix.
    if (max_n >= in.remaining() / 4) {
        throw CorruptFileError("table cache too short for max_n = " + std::to_string(max_n));
    }

    std::vector<mpz_class> values(static_cast<std::size_t>(max_n) + 1);
    for (auto& v : values) {
        const auto len = in.get_le<std::uint32_t>("value length");
        const unsigned char* bytes = in.take(len, "value bytes");
        if (len == 0) {
            v = 0;
        } else {
            mpz_import(v.get_mpz_t(), len, -1, 1, -1, 0, bytes);
        }
    }
    if (!in.at_end()) throw CorruptFileError("table cache has trailing bytes");

    if (values[0] != 1 || (values.size() > 1 && values[1] != 1)) {
        throw RecurrenceMismatchError("table cache does not start with p(0) = p(1) = 1");
    }
    for (std::int64_t i : spot_check_indices(static_cast<std::int64_t>(max_n))) {
        const std::span<const mpz_class> prefix(values.data(), static_cast<std::size_t>(i));
        if (pentagonal_recurrence(prefix, i) != values[static_cast<std::size_t>(i)]) {
            throw RecurrenceMismatchError("table cache fails the pentagonal recurrence at index " +
                                          std::to_string(i));
        }
    }
    return PartitionTable::from_values(std::move(values));
}

PartitionTable load_or_build_table(std::int64_t max_n, const std::filesystem::path& path) {
    if (!path.empty() && std::filesystem::exists(path)) {
        PartitionTable cached = load_table(path);
        if (cached.max_n() >= max_n) return cached;
    }
    PartitionTable table = PartitionTable::build(max_n);
    if (!path.empty()) save_table(table, path);
    return table;
}

}  // namespace krank
