#include <axiscat/radialkernel.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

namespace axiscat::radial
{

namespace
{
constexpr char kMagic[8] = {'L', 'S', 'M', 'O', 'M', 'N', 'T', '\0'};
constexpr std::uint64_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 8 + 7 * 8;

void put_u64(std::string& out, std::uint64_t v)
{
    for (int b = 0; b < 8; ++b)
        out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void put_f64(std::string& out, double v)
{
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t get_u64(const std::string& in, std::size_t& pos)
{
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + b])) << (8 * b);
    pos += 8;
    return v;
}

double get_f64(const std::string& in, std::size_t& pos)
{
    return std::bit_cast<double>(get_u64(in, pos));
}

std::uint64_t fnv1a(const char* data, std::size_t n)
{
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < n; ++i)
    {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ull;
    }
    return h;
}

std::string header_bytes(double r_max, std::size_t n_i, std::size_t n_d, std::size_t f, double k, std::uint64_t count)
{
    std::string h(kMagic, kMagic + 8);
    put_u64(h, kVersion);
    put_f64(h, r_max);
    put_u64(h, n_i);
    put_u64(h, n_d);
    put_u64(h, f);
    put_f64(h, k);
    put_u64(h, count);
    return h;
}
} // namespace

std::string moment_cache_filename(double r_max, std::size_t n_i, std::size_t n_d, std::size_t f, double k)
{
    const std::string h = header_bytes(r_max, n_i, n_d, f, k, 0);
    std::ostringstream name;
    name << "moments_" << std::hex << fnv1a(h.data(), h.size()) << ".bin";
    return name.str();
}

void write_moment_cache(const std::string& path, const MomentTable& t)
{
    std::string bytes = header_bytes(t.r_max, t.n_i, t.n_d, t.f, t.k, t.size());
    bytes.reserve(kHeaderBytes + 3 * t.size() * 16 + 8);
    for (const auto* arr : {&t.alpha, &t.beta, &t.gamma})
        for (double v : *arr)
        {
            put_f64(bytes, v);
            put_f64(bytes, 0.0);
        }
    put_u64(bytes, fnv1a(bytes.data() + kHeaderBytes, bytes.size() - kHeaderBytes));

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("write_moment_cache: cannot open " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw std::runtime_error("write_moment_cache: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::optional<MomentTable> read_moment_cache(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < kHeaderBytes + 8 || std::memcmp(bytes.data(), kMagic, 8) != 0)
        return std::nullopt;

    std::size_t pos = 8;
    if (get_u64(bytes, pos) != kVersion)
        return std::nullopt;
    MomentTable t;
    t.r_max = get_f64(bytes, pos);
    t.n_i = get_u64(bytes, pos);
    t.n_d = get_u64(bytes, pos);
    t.f = get_u64(bytes, pos);
    t.k = get_f64(bytes, pos);
    const std::uint64_t count = get_u64(bytes, pos);
    if (count != t.size() || bytes.size() != kHeaderBytes + 3 * count * 16 + 8)
        return std::nullopt;

    std::size_t tail = bytes.size() - 8;
    if (get_u64(bytes, tail) != fnv1a(bytes.data() + kHeaderBytes, bytes.size() - 8 - kHeaderBytes))
        return std::nullopt;

    for (auto* arr : {&t.alpha, &t.beta, &t.gamma})
    {
        arr->resize(count);
        for (auto& v : *arr)
        {
            v = get_f64(bytes, pos);
            pos += 8; // imaginary part, zero for real wavenumbers
        }
    }
    return t;
}

MomentTable precompute_moments_cached(const RadialGrid& grid, std::size_t f, double k, const std::string& cache_dir)
{
    if (cache_dir.empty())
        return precompute_moments(grid, f, k);
    const auto path = (std::filesystem::path(cache_dir) / moment_cache_filename(grid.r_max, grid.n_i, grid.n_d, f, k)).string();
    if (auto cached = read_moment_cache(path))
        if (cached->r_max == grid.r_max && cached->n_i == grid.n_i && cached->n_d == grid.n_d && cached->f == f && cached->k == k)
            return std::move(*cached);
    MomentTable t = precompute_moments(grid, f, k);
    std::filesystem::create_directories(cache_dir);
    write_moment_cache(path, t);
    return t;
}

} // namespace axiscat::radial
